//! Generate the standard 100-agent graph, run it to absorption and report
//! what is left.
//!
//!     cargo run --example quickstart -- 0.7

use adaptive_voter::prelude::*;

fn main() {
    let alpha: f64 = std::env::args().nth(1).map_or(0.7, |a| a.parse().expect("alpha"));
    let mut rng = RandomStream::from_seed(42);
    let mut g = generate(&InitSpec::standard(), &mut rng).unwrap();
    println!("start: {:?}", g.counts());

    let cfg = EngineConfig::new(Semantics::CtmcWeighted { alpha });
    let t = run(&mut g, &cfg, &mut rng).unwrap();
    println!(
        "stop:  {:?} after {} events, t = {:.2}",
        t.summary.reason, t.summary.effective_events, t.summary.time
    );

    let report = components(&g);
    println!(
        "{} components, fragmented = {}, minority fraction = {:.3}",
        report.n_components, report.fragmented, report.minority_fraction
    );
    println!("component sizes: {:?}", report.sizes());
}
