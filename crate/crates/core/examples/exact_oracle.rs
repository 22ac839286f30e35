//! Exact absorption probabilities of a 4-agent graph, compared with 20 000
//! simulated runs of the round-based chain.
//!
//!     cargo run --example exact_oracle -- 0.3

use std::collections::BTreeMap;

use adaptive_voter::graph::Opinion::{One, Zero};
use adaptive_voter::oracle::{absorption_distribution, enumerate, CanonicalState, EnumerateOptions};
use adaptive_voter::prelude::*;

fn main() {
    let alpha: f64 = std::env::args().nth(1).map_or(0.3, |a| a.parse().expect("alpha"));
    let g0 = VoterGraph::new(vec![One, One, Zero, Zero], &[(0, 2), (1, 3), (0, 1)]).unwrap();
    let start = CanonicalState::of(&g0);
    let space = enumerate(&start, alpha, EnumerateOptions::default()).unwrap();
    let dist = absorption_distribution(&space, &start).unwrap();
    println!("{} reachable states, {} absorbing", space.len(), dist.probs.len());

    let mut exact: BTreeMap<usize, f64> = BTreeMap::new();
    for (s, p) in &dist.probs {
        *exact.entry(s.holders(One)).or_default() += p;
    }

    let runs = 20_000;
    let mut seen: BTreeMap<usize, u32> = BTreeMap::new();
    let mut rng = RandomStream::from_seed(1);
    let mut cfg = EngineConfig::new(Semantics::Dtmc { alpha, count_noop_steps: false });
    cfg.record_events = false;
    for _ in 0..runs {
        let mut g = g0.clone();
        run(&mut g, &cfg, &mut rng).unwrap();
        *seen.entry(g.counts().n_one).or_default() += 1;
    }

    println!("ones  exact     simulated");
    for (k, p) in exact {
        let f = seen.get(&k).copied().unwrap_or(0) as f64 / runs as f64;
        println!("{k:>4}  {p:.5}   {f:.5}");
    }
}
