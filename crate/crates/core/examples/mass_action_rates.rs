//! Mass-action rates: every rewire match counts, so the rewire rate must be
//! orders of magnitude below the adopt rate before consensus returns.
//!
//!     cargo run --release --example mass_action_rates

use adaptive_voter::harness::summarize_configs;
use adaptive_voter::prelude::*;

fn main() {
    let g = {
        let mut rng = RandomStream::from_seed(0);
        generate(&InitSpec::standard(), &mut rng).unwrap()
    };
    let c = g.counts();
    let rates = MassActionRates::symmetric(1.0, 1.0);
    let a = adaptive_voter::engine::propensities(&Semantics::CtmcMassAction(rates), &c).unwrap();
    println!("initial propensities at equal base rates: {a:?}");
    println!("rewire/adopt ratio: {:.1}", a[0] / a[2]);

    let spec = SweepSpec {
        alphas: vec![1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001],
        us: vec![0.5],
        runs_per_config: 20,
        ..SweepSpec::standard(ModelKind::CtmcMassAction)
    };
    let records = run_sweep(&spec).unwrap();
    println!("rewire rate   mean minority   fragmented");
    for s in summarize_configs(&records) {
        println!("{:>11}   {:>13.3}   {:>10.2}", s.alpha, s.mean_minority, s.fragmented_share);
    }
}
