//! The same start graph under all five execution semantics. The round-based
//! chain and the weighted CTMC share their jump chain; mass action hands the
//! rewire rules a large head start; the common-left-hand-side variant stops
//! once either side is down to one agent.
//!
//!     cargo run --example semantics_tour

use adaptive_voter::prelude::*;

fn main() {
    let alpha = 0.5;
    let models = [
        Semantics::Dtmc { alpha, count_noop_steps: true },
        Semantics::CtmcWeighted { alpha },
        Semantics::CtmcMassAction(MassActionRates::symmetric(alpha, 1.0 - alpha)),
        Semantics::CtmcUniformized(RuleProbabilities::from_alpha(alpha)),
        Semantics::CtmcLcm { alpha },
    ];
    println!("{:<18} {:>8} {:>8} {:>10} {:>9}  reason", "model", "steps", "events", "time", "minority");
    for sem in models {
        let mut rng = RandomStream::from_seed(3);
        let mut g = generate(&InitSpec::standard(), &mut rng).unwrap();
        let mut cfg = EngineConfig::new(sem);
        cfg.record_events = false;
        let t = run(&mut g, &cfg, &mut rng).unwrap();
        let s = &t.summary;
        println!(
            "{:<18} {:>8} {:>8} {:>10.3} {:>9.3}  {:?}",
            t.model,
            s.steps,
            s.effective_events,
            s.time,
            minority_fraction(&g),
            s.reason
        );
    }
}
