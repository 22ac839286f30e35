//! The common-left-hand-side rules against the weighted basic rules on 50
//! agents and 200 groups. The extended rules stop when one side has a single
//! agent left, so their minority fraction never drops below 1/50.
//!
//!     cargo run --release --example lcm_vs_weighted

use adaptive_voter::generator::EdgeMode;
use adaptive_voter::harness::{crossing, summarize_configs};
use adaptive_voter::prelude::*;

fn series(model: ModelKind) -> Vec<(f64, f64)> {
    let spec = SweepSpec {
        us: vec![0.5],
        runs_per_config: 10,
        n_agents: 50,
        edge_mode: EdgeMode::FixedCount(200),
        ..SweepSpec::standard(model)
    };
    let records = run_sweep(&spec).unwrap();
    summarize_configs(&records).into_iter().map(|s| (s.alpha, s.mean_minority)).collect()
}

fn main() {
    let lcm = series(ModelKind::CtmcLcm);
    let weighted = series(ModelKind::CtmcWeighted);
    println!("alpha   lcm     weighted");
    for ((a, x), (_, y)) in lcm.iter().zip(&weighted) {
        println!("{a:<5}   {x:.3}   {y:.3}");
    }
    println!("crossing of 0.1: lcm {:?}, weighted {:?}", crossing(&lcm, 0.1), crossing(&weighted, 0.1));
}
