//! Adaptive voter models as stochastic graph rewriting.
//!
//! Agents hold one of two opinions and are linked by two-member groups
//! (an undirected multigraph). Four rules act on discordant groups: the
//! acting endpoint either adopts its partner's opinion or rewires the group
//! to another agent sharing its own opinion. The crate runs those rules under
//! several execution semantics and compares them:
//!
//! | module | contents |
//! |---|---|
//! | [`graph`] | incremental multigraph store and pattern counts |
//! | [`patterns`] | motif counting, uniform match sampling, brute-force enumeration |
//! | [`rules`] | the basic and common-left-hand-side rule catalog |
//! | [`engine`] | round-based DTMC and four continuous-time schedulers |
//! | [`generator`] | random initial graphs |
//! | [`analysis`] | components, fragmentation, minority fraction |
//! | [`oracle`] | exact state-space enumeration and absorption probabilities |
//! | [`harness`] | reproducible `alpha × u` sweeps with CSV output |
//!
//! ```
//! use adaptive_voter::prelude::*;
//!
//! let mut rng = RandomStream::from_seed(7);
//! let mut g = generate(&InitSpec::standard(), &mut rng).unwrap();
//! let cfg = EngineConfig::new(Semantics::CtmcWeighted { alpha: 0.7 });
//! let t = run(&mut g, &cfg, &mut rng).unwrap();
//! assert!(t.summary.absorbed);
//! assert_eq!(g.counts().n_01, 0);
//! ```

pub mod analysis;
pub mod engine;
pub mod generator;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod patterns;
pub mod rng;
pub mod rules;

pub mod prelude {
    pub use crate::analysis::{components, minority_fraction, ComponentReport};
    pub use crate::engine::{
        run, run_seeded, EngineConfig, MassActionRates, RuleProbabilities, Semantics, StepOutcome, StopReason,
        Trajectory,
    };
    pub use crate::generator::{generate, EdgeMode, InitSpec};
    pub use crate::graph::{AgentId, GroupId, Opinion, PatternCounts, VoterGraph};
    pub use crate::harness::{run_sweep, ModelKind, SweepSpec};
    pub use crate::patterns::{count_motif, Motif};
    pub use crate::rng::RandomStream;
    pub use crate::rules::RuleId;
}
