//! Fixtures and a test-side reference model shared by the integration tests
//! and the acceptance runner.
//!
//! The reference model below deliberately avoids the library: states are
//! plain tuples, transitions are spelled out from the round definition, and
//! absorption is computed by pushing probability mass forward until none is
//! left on transient states (no linear solve).

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use adaptive_voter::graph::{Opinion, VoterGraph};
use adaptive_voter::rng::RandomStream;
use rand::Rng;

/// Opinions as 0/1 and edges as sorted pairs, edge list sorted.
pub type RefState = (Vec<u8>, Vec<(u8, u8)>);

pub fn ref_state(g: &VoterGraph) -> RefState {
    let ops = g.opinions().iter().map(|o| o.index() as u8).collect();
    let mut edges: Vec<(u8, u8)> = g
        .groups()
        .map(|(_, [a, b])| {
            let (a, b) = (a.0 as u8, b.0 as u8);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    (ops, edges)
}

pub fn graph_of(ops: &[u8], edges: &[(usize, usize)]) -> VoterGraph {
    let ops = ops.iter().map(|&o| if o == 1 { Opinion::One } else { Opinion::Zero }).collect();
    VoterGraph::new(ops, edges).unwrap()
}

fn discordant(s: &RefState) -> usize {
    s.1.iter().filter(|(a, b)| s.0[*a as usize] != s.0[*b as usize]).count()
}

/// One round: every (edge, orientation, choice, target) leaf with its mass.
/// Non-effective leaves return the state itself.
pub fn ref_round(s: &RefState, alpha: f64) -> Vec<(RefState, f64)> {
    let (ops, edges) = s;
    let m = edges.len() as f64;
    let mut out = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for (x, y) in [(a, b), (b, a)] {
            let w = 0.5 / m;
            if ops[x as usize] == ops[y as usize] {
                out.push((s.clone(), w));
                continue;
            }
            let cands: Vec<u8> = (0..ops.len() as u8)
                .filter(|&z| z != x && ops[z as usize] == ops[x as usize])
                .collect();
            if alpha > 0.0 {
                if cands.is_empty() {
                    out.push((s.clone(), w * alpha));
                } else {
                    for &z in &cands {
                        let mut e = edges.clone();
                        e[i] = (x.min(z), x.max(z));
                        e.sort_unstable();
                        out.push(((ops.clone(), e), w * alpha / cands.len() as f64));
                    }
                }
            }
            if alpha < 1.0 {
                let mut o = ops.clone();
                o[x as usize] = ops[y as usize];
                out.push(((o, edges.clone()), w * (1.0 - alpha)));
            }
        }
    }
    out
}

fn merge(leaves: Vec<(RefState, f64)>) -> Vec<(RefState, f64)> {
    let mut acc: BTreeMap<RefState, f64> = BTreeMap::new();
    for (t, p) in leaves {
        *acc.entry(t).or_default() += p;
    }
    acc.into_iter().collect()
}

/// Terminal states: no discordant edge, no move that changes anything, or
/// (with `lcm_halt`) a side with fewer than two agents.
fn terminal(s: &RefState, alpha: f64, lcm_halt: bool) -> bool {
    if discordant(s) == 0 {
        return true;
    }
    let ones = s.0.iter().filter(|&&o| o == 1).count();
    let zeros = s.0.len() - ones;
    if lcm_halt && (ones < 2 || zeros < 2) {
        return true;
    }
    alpha >= 1.0 && ones < 2 && zeros < 2
}

/// Probability of ending in each terminal state, starting from `start`.
pub fn ref_absorption(start: &RefState, alpha: f64, lcm_halt: bool) -> BTreeMap<RefState, f64> {
    let mut rows: HashMap<RefState, Vec<(RefState, f64)>> = HashMap::new();
    let mut mass: BTreeMap<RefState, f64> = BTreeMap::from([(start.clone(), 1.0)]);
    let mut done: BTreeMap<RefState, f64> = BTreeMap::new();
    for _ in 0..1_000_000 {
        let mut next: BTreeMap<RefState, f64> = BTreeMap::new();
        for (s, p) in mass {
            if terminal(&s, alpha, lcm_halt) {
                *done.entry(s).or_default() += p;
                continue;
            }
            let row = rows.entry(s.clone()).or_insert_with(|| merge(ref_round(&s, alpha)));
            for (t, q) in row.iter() {
                *next.entry(t.clone()).or_default() += p * q;
            }
        }
        mass = next;
        if mass.values().sum::<f64>() < 1e-15 {
            return done;
        }
    }
    panic!("reference absorption did not converge");
}

/// Marginal of an absorption distribution over the final number of One holders.
pub fn by_ones(dist: &BTreeMap<RefState, f64>) -> BTreeMap<usize, f64> {
    let mut out = BTreeMap::new();
    for (s, p) in dist {
        *out.entry(s.0.iter().filter(|&&o| o == 1).count()).or_default() += p;
    }
    out
}

/// Injective assignments of an edge pattern (a, b) plus `extras` further
/// agents with the given opinions, counted straight from the definition. An
/// edge matches once per group, with the endpoints bound in either order.
pub fn brute_count(g: &VoterGraph, edge: (Opinion, Opinion), extras: &[Opinion]) -> u64 {
    let n = g.n_agents();
    let mut total = 0;
    for (_, [p, q]) in g.groups() {
        let bindings = if edge.0 == edge.1 {
            vec![(p, q)]
        } else {
            vec![(p, q), (q, p)]
        };
        for (u, v) in bindings {
            if g.opinion(u) != edge.0 || g.opinion(v) != edge.1 {
                continue;
            }
            let free: Vec<usize> = (0..n).filter(|&z| z != u.index() && z != v.index()).collect();
            total += match extras {
                [] => 1,
                [x] => free.iter().filter(|&&z| g.opinions()[z] == *x).count() as u64,
                [x, y] => {
                    let mut c = 0;
                    for &z1 in &free {
                        for &z2 in &free {
                            if z1 != z2 && g.opinions()[z1] == *x && g.opinions()[z2] == *y {
                                c += 1;
                            }
                        }
                    }
                    c
                }
                _ => unreachable!(),
            };
        }
    }
    total
}

/// Random multigraph with `n` agents and `m` groups, no self-groups.
pub fn random_multigraph(n: usize, m: usize, rng: &mut RandomStream) -> VoterGraph {
    assert!(n >= 2 || m == 0);
    let ops = (0..n).map(|_| if rng.random_bool(0.5) { Opinion::One } else { Opinion::Zero }).collect();
    let edges: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    VoterGraph::new(ops, &edges).unwrap()
}

/// Corpus of `k` multigraphs with 2..=max_n agents and 0..=max_m groups.
pub fn corpus(k: usize, max_n: usize, max_m: usize, seed: u64) -> Vec<VoterGraph> {
    let mut rng = RandomStream::from_seed(seed);
    (0..k)
        .map(|_| {
            let n = rng.random_range(2..=max_n);
            let m = rng.random_range(0..=max_m);
            random_multigraph(n, m, &mut rng)
        })
        .collect()
}

/// Small fixtures used by the exact comparisons.
pub fn pair_fixture() -> VoterGraph {
    graph_of(&[1, 0], &[(0, 1)])
}

pub fn three_fixture() -> VoterGraph {
    graph_of(&[1, 1, 0], &[(0, 2)])
}

pub fn four_fixture() -> VoterGraph {
    graph_of(&[1, 1, 0, 0], &[(0, 2), (1, 3), (0, 1)])
}

pub fn five_fixture() -> VoterGraph {
    graph_of(&[1, 0, 1, 0, 0], &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
}

/// Binomial band check: |k − n p| ≤ z · sqrt(n p (1 − p)). A zero-probability
/// outcome must never occur.
pub fn within_band(hits: u64, n: u64, p: f64, z: f64) -> bool {
    let (n, k) = (n as f64, hits as f64);
    let sd = (n * p * (1.0 - p)).sqrt();
    if sd == 0.0 {
        return (k - n * p).abs() < 0.5;
    }
    (k - n * p).abs() <= z * sd
}
