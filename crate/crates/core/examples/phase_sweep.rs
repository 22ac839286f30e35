//! Minority fraction against alpha for the weighted CTMC, 100 agents and
//! 400 groups, three initial splits. Writes the CSV next to the summary.
//!
//!     cargo run --release --example phase_sweep -- sweep.csv

use std::fs::File;

use adaptive_voter::harness::{crossing, print_summary, summarize_configs, write_csv};
use adaptive_voter::prelude::*;

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "phase_sweep.csv".into());
    let spec = SweepSpec::standard(ModelKind::CtmcWeighted);
    let records = run_sweep(&spec).unwrap();
    write_csv(&records, File::create(&out).unwrap()).unwrap();
    print_summary(&spec, &records, std::io::stdout()).unwrap();

    for u in &spec.us {
        let pts: Vec<(f64, f64)> = summarize_configs(&records)
            .into_iter()
            .filter(|s| s.u == *u)
            .map(|s| (s.alpha, s.mean_minority))
            .collect();
        match crossing(&pts, 0.1) {
            Some(a) => println!("u = {u}: mean minority reaches 0.1 at alpha ~ {a:.3}"),
            None => println!("u = {u}: mean minority stays below 0.1"),
        }
    }
    println!("wrote {out}");
}
