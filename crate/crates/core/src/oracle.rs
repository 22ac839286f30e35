//! Exact round-based semantics for tiny graphs.
//!
//! States are labeled (no isomorphism reduction): an opinion vector plus the
//! sorted multiset of edges. One-step distributions come straight from the
//! decision tree of a round, evaluated on plain vectors without touching the
//! incremental graph store or any sampler, so the engines can be checked
//! against them. Probabilities are `f64`; kernel rows sum to one within
//! `1e-12`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Opinion, VoterGraph};
use crate::rules::RuleId;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalState {
    pub opinions: Vec<Opinion>,
    /// `(i, j)` with `i < j`, sorted; parallel edges repeat.
    pub edges: Vec<(u32, u32)>,
}

impl CanonicalState {
    pub fn new(opinions: Vec<Opinion>, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut edges: Vec<(u32, u32)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        CanonicalState { opinions, edges }
    }

    pub fn of(g: &VoterGraph) -> Self {
        CanonicalState::new(g.opinions().to_vec(), g.groups().map(|(_, [a, b])| (a.0, b.0)))
    }

    pub fn to_graph(&self) -> Result<VoterGraph, GraphError> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        VoterGraph::new(self.opinions.clone(), &edges)
    }

    fn opinion(&self, a: u32) -> Opinion {
        self.opinions[a as usize]
    }

    pub fn holders(&self, o: Opinion) -> usize {
        self.opinions.iter().filter(|&&x| x == o).count()
    }

    pub fn discordant_edges(&self) -> usize {
        self.edges.iter().filter(|&&(a, b)| self.opinion(a) != self.opinion(b)).count()
    }

    fn with_opinion(&self, a: u32, o: Opinion) -> Self {
        let mut next = self.clone();
        next.opinions[a as usize] = o;
        next
    }

    fn with_edge(&self, e: usize, a: u32, b: u32) -> Self {
        let mut edges = self.edges.clone();
        edges[e] = (a.min(b), a.max(b));
        edges.sort_unstable();
        CanonicalState {
            opinions: self.opinions.clone(),
            edges,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TransitionLabel {
    /// A concordant edge was drawn.
    Inactive,
    /// Rewiring was chosen but the actor has no same-opinion partner to join.
    NoRewireCandidate { actor: u32 },
    Rewire { rule: RuleId, actor: u32, peer: u32, new_peer: u32 },
    Adopt { rule: RuleId, actor: u32, peer: u32 },
}

impl TransitionLabel {
    pub fn rule(&self) -> Option<RuleId> {
        match *self {
            TransitionLabel::Rewire { rule, .. } | TransitionLabel::Adopt { rule, .. } => Some(rule),
            _ => None,
        }
    }

    pub fn is_effective(&self) -> bool {
        self.rule().is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub label: TransitionLabel,
    pub successor: CanonicalState,
    pub probability: f64,
}

/// Exact one-round distribution, one branch per leaf of the decision tree
/// (parallel edges give repeated labels).
pub fn one_step_exact(state: &CanonicalState, alpha: f64) -> Vec<Branch> {
    let n_e = state.edges.len();
    if n_e == 0 {
        return vec![Branch {
            label: TransitionLabel::Inactive,
            successor: state.clone(),
            probability: 1.0,
        }];
    }
    let per_edge = 1.0 / n_e as f64;
    let mut out = Vec::new();
    for (e, &(a, b)) in state.edges.iter().enumerate() {
        if state.opinion(a) == state.opinion(b) {
            out.push(Branch {
                label: TransitionLabel::Inactive,
                successor: state.clone(),
                probability: per_edge,
            });
            continue;
        }
        for (x, y) in [(a, b), (b, a)] {
            let ox = state.opinion(x);
            let oy = state.opinion(y);
            let half = per_edge / 2.0;

            let candidates: Vec<u32> = (0..state.opinions.len() as u32)
                .filter(|&z| z != x && state.opinion(z) == ox)
                .collect();
            if alpha > 0.0 {
                if candidates.is_empty() {
                    out.push(Branch {
                        label: TransitionLabel::NoRewireCandidate { actor: x },
                        successor: state.clone(),
                        probability: half * alpha,
                    });
                } else {
                    let rule = match ox {
                        Opinion::One => RuleId::RewireKeepOne,
                        Opinion::Zero => RuleId::RewireKeepZero,
                    };
                    let each = half * alpha / candidates.len() as f64;
                    for &z in &candidates {
                        out.push(Branch {
                            label: TransitionLabel::Rewire { rule, actor: x, peer: y, new_peer: z },
                            successor: state.with_edge(e, x, z),
                            probability: each,
                        });
                    }
                }
            }
            if alpha < 1.0 {
                let rule = match oy {
                    Opinion::One => RuleId::AdoptToOne,
                    Opinion::Zero => RuleId::AdoptToZero,
                };
                out.push(Branch {
                    label: TransitionLabel::Adopt { rule, actor: x, peer: y },
                    successor: state.with_opinion(x, oy),
                    probability: half * (1.0 - alpha),
                });
            }
        }
    }
    out
}

/// Effective branches renormalized to total one; empty if none exist.
pub fn effective_conditional(state: &CanonicalState, alpha: f64) -> Vec<Branch> {
    let mut eff: Vec<Branch> = one_step_exact(state, alpha)
        .into_iter()
        .filter(|b| b.label.is_effective())
        .collect();
    let total: f64 = eff.iter().map(|b| b.probability).sum();
    if total > 0.0 {
        for b in &mut eff {
            b.probability /= total;
        }
    }
    eff
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Halt {
    /// Only states without discordant edges (or without any effective move) absorb.
    Natural,
    /// Also absorb once either opinion has fewer than two holders, the point
    /// at which the common-left-hand-side rules lose all matches.
    MinorityBelowTwo,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub max_states: usize,
    pub halt: Halt,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_states: 200_000,
            halt: Halt::Natural,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("reachable state space exceeds the cap of {cap} states")]
    StateCap { cap: usize },
    #[error("{transient} transient states exceed the dense solver limit of {limit}")]
    DenseLimit { transient: usize, limit: usize },
    #[error("absorption system is singular")]
    Singular,
    #[error("alpha must lie in [0, 1], got {0}")]
    Alpha(f64),
    #[error("start state is not in the enumerated space")]
    UnknownStart,
}

#[derive(Clone, Debug)]
pub struct StateSpace {
    pub states: Vec<CanonicalState>,
    pub index: HashMap<CanonicalState, usize>,
    /// Sparse rows `(successor, probability)`, successors ascending.
    pub kernel: Vec<Vec<(usize, f64)>>,
}

impl StateSpace {
    pub fn is_absorbing(&self, i: usize) -> bool {
        matches!(self.kernel[i].as_slice(), [(j, p)] if *j == i && *p == 1.0)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn halts(state: &CanonicalState, halt: Halt) -> bool {
    if state.discordant_edges() == 0 {
        return true;
    }
    match halt {
        Halt::Natural => false,
        Halt::MinorityBelowTwo => state.holders(Opinion::One) < 2 || state.holders(Opinion::Zero) < 2,
    }
}

/// Breadth-first enumeration of every state reachable from `start`.
pub fn enumerate(start: &CanonicalState, alpha: f64, opts: EnumerateOptions) -> Result<StateSpace, OracleError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(OracleError::Alpha(alpha));
    }
    let mut space = StateSpace {
        states: vec![start.clone()],
        index: HashMap::from([(start.clone(), 0)]),
        kernel: Vec::new(),
    };
    let mut queue = VecDeque::from([0usize]);
    let mut rows: Vec<Option<Vec<(usize, f64)>>> = vec![None];
    while let Some(i) = queue.pop_front() {
        let state = space.states[i].clone();
        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
        let mut branches = if halts(&state, opts.halt) {
            Vec::new()
        } else {
            one_step_exact(&state, alpha)
        };
        if branches.iter().all(|b| !b.label.is_effective()) {
            // no effective move: the chain stays here forever
            row.insert(i, 1.0);
            branches.clear();
        }
        for b in branches {
            let j = match space.index.get(&b.successor) {
                Some(&j) => j,
                None => {
                    if space.states.len() >= opts.max_states {
                        return Err(OracleError::StateCap { cap: opts.max_states });
                    }
                    let j = space.states.len();
                    space.index.insert(b.successor.clone(), j);
                    space.states.push(b.successor);
                    rows.push(None);
                    queue.push_back(j);
                    j
                }
            };
            *row.entry(j).or_insert(0.0) += b.probability;
        }
        rows[i] = Some(row.into_iter().collect());
    }
    space.kernel = rows.into_iter().map(|r| r.expect("every enumerated state is expanded")).collect();
    Ok(space)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDistribution {
    pub probs: BTreeMap<CanonicalState, f64>,
}

impl StateDistribution {
    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn get(&self, s: &CanonicalState) -> f64 {
        self.probs.get(s).copied().unwrap_or(0.0)
    }
}

pub const DENSE_SOLVE_LIMIT: usize = 6000;

/// Probability of ending in each absorbing state when started from `start`.
///
/// Solves `(I − Q)ᵀ v = e_start` for the expected visits `v` to transient
/// states, then reads off `Rᵀ v`.
pub fn absorption_distribution(space: &StateSpace, start: &CanonicalState) -> Result<StateDistribution, OracleError> {
    let &s = space.index.get(start).ok_or(OracleError::UnknownStart)?;
    if space.is_absorbing(s) {
        return Ok(StateDistribution {
            probs: BTreeMap::from([(start.clone(), 1.0)]),
        });
    }
    let transient: Vec<usize> = (0..space.len()).filter(|&i| !space.is_absorbing(i)).collect();
    if transient.len() > DENSE_SOLVE_LIMIT {
        return Err(OracleError::DenseLimit {
            transient: transient.len(),
            limit: DENSE_SOLVE_LIMIT,
        });
    }
    let mut pos = vec![usize::MAX; space.len()];
    for (k, &i) in transient.iter().enumerate() {
        pos[i] = k;
    }
    let t = transient.len();
    // a[(j, i)] = (I − Q)ᵀ
    let mut a = DMatrix::<f64>::identity(t, t);
    for (k, &i) in transient.iter().enumerate() {
        for &(j, p) in &space.kernel[i] {
            if pos[j] != usize::MAX {
                a[(pos[j], k)] -= p;
            }
        }
    }
    let mut e = DVector::<f64>::zeros(t);
    e[pos[s]] = 1.0;
    let visits = a.lu().solve(&e).ok_or(OracleError::Singular)?;

    let mut probs = BTreeMap::new();
    for (k, &i) in transient.iter().enumerate() {
        for &(j, p) in &space.kernel[i] {
            if pos[j] == usize::MAX {
                *probs.entry(space.states[j].clone()).or_insert(0.0) += visits[k] * p;
            }
        }
    }
    Ok(StateDistribution { probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Opinion::{One, Zero};

    fn state(opinions: &[Opinion], edges: &[(u32, u32)]) -> CanonicalState {
        CanonicalState::new(opinions.to_vec(), edges.iter().copied())
    }

    #[test]
    fn absorbed_start_is_a_fixed_point() {
        let s = state(&[One, One], &[(0, 1)]);
        let space = enumerate(&s, 0.5, EnumerateOptions::default()).unwrap();
        assert_eq!(space.len(), 1);
        assert_eq!(space.kernel[0], vec![(0, 1.0)]);
        let d = absorption_distribution(&space, &s).unwrap();
        assert_eq!(d.get(&s), 1.0);
    }

    #[test]
    fn two_agents_adopt_only() {
        let s = state(&[One, Zero], &[(0, 1)]);
        let space = enumerate(&s, 0.0, EnumerateOptions::default()).unwrap();
        assert_eq!(space.len(), 3);
        let all_one = state(&[One, One], &[(0, 1)]);
        let all_zero = state(&[Zero, Zero], &[(0, 1)]);
        let row = &space.kernel[space.index[&s]];
        assert_eq!(row.len(), 2);
        for &(j, p) in row {
            assert!(space.states[j] == all_one || space.states[j] == all_zero);
            assert_eq!(p, 0.5);
        }
        let d = absorption_distribution(&space, &s).unwrap();
        assert!((d.get(&all_one) - 0.5).abs() < 1e-12);
        assert!((d.get(&all_zero) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn three_agents_rewire_only() {
        let s = state(&[One, One, Zero], &[(0, 2)]);
        let branches = one_step_exact(&s, 1.0);
        let rewired = state(&[One, One, Zero], &[(0, 1)]);
        let p_rewire: f64 = branches.iter().filter(|b| b.successor == rewired).map(|b| b.probability).sum();
        let p_stay: f64 = branches.iter().filter(|b| b.successor == s).map(|b| b.probability).sum();
        assert_eq!((p_rewire, p_stay), (0.5, 0.5));

        let space = enumerate(&s, 1.0, EnumerateOptions::default()).unwrap();
        let row = &space.kernel[space.index[&s]];
        assert_eq!(row, &vec![(0, 0.5), (1, 0.5)]);
        let d = absorption_distribution(&space, &s).unwrap();
        assert!((d.get(&rewired) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_rows_sum_to_one() {
        let s = state(&[One, Zero, One, Zero], &[(0, 1), (1, 2), (2, 3), (0, 1)]);
        for alpha in [0.0, 0.3, 1.0] {
            let space = enumerate(&s, alpha, EnumerateOptions::default()).unwrap();
            for row in &space.kernel {
                let sum: f64 = row.iter().map(|(_, p)| p).sum();
                assert!((sum - 1.0).abs() < 1e-12);
            }
            let d = absorption_distribution(&space, &s).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-12);
            assert!(d.probs.values().all(|&p| p >= -1e-15));
        }
    }

    #[test]
    fn state_cap_is_reported() {
        let s = state(&[One, Zero, One, Zero], &[(0, 1), (1, 2), (2, 3), (0, 1)]);
        let opts = EnumerateOptions { max_states: 3, halt: Halt::Natural };
        assert_eq!(enumerate(&s, 0.5, opts).unwrap_err(), OracleError::StateCap { cap: 3 });
    }

    #[test]
    fn stuck_state_absorbs() {
        // alpha = 1 and each opinion held once: no effective move exists
        let s = state(&[One, Zero], &[(0, 1)]);
        let space = enumerate(&s, 1.0, EnumerateOptions::default()).unwrap();
        assert_eq!(space.len(), 1);
        assert!(space.is_absorbing(0));
    }

    #[test]
    fn canonical_state_ignores_edge_order() {
        let g1 = VoterGraph::new(vec![One, Zero, One], &[(0, 1), (2, 1)]).unwrap();
        let g2 = VoterGraph::new(vec![One, Zero, One], &[(1, 2), (1, 0)]).unwrap();
        assert_eq!(CanonicalState::of(&g1), CanonicalState::of(&g2));
        let back = CanonicalState::of(&g1).to_graph().unwrap();
        assert_eq!(back.counts(), g1.counts());
    }
}
