//! Execution semantics over the shared rule catalog.
//!
//! Five ways of scheduling the same rules:
//!
//! * [`Semantics::Dtmc`]: the round-based reference process. Pick a group
//!   uniformly; if discordant pick an acting endpoint, then rewire with
//!   probability `alpha` or adopt otherwise.
//! * [`Semantics::CtmcWeighted`]: Gillespie over the basic rules with the
//!   rewire propensities divided by their number of rewiring targets, which
//!   makes the jump chain equal to the DTMC conditioned on effective moves.
//! * [`Semantics::CtmcMassAction`]: standard mass action, propensity equals
//!   base rate times match count.
//! * [`Semantics::CtmcUniformized`]: total jump rate 1, rule `j` chosen with
//!   a fixed probability whatever its match count.
//! * [`Semantics::CtmcLcm`]: the extended rules, which all share one
//!   left-hand side and so one match count.
//!
//! The weighted and common-LHS propensities omit the constant `1 / N_E`
//! factor of the reference generator. Their clocks therefore run `N_E` times
//! faster than that normalization; jump chains are unaffected.

mod ctmc;
mod dtmc;

pub use ctmc::{
    ctmc_lcm_step, ctmc_mass_action_step, ctmc_uniformized_step, ctmc_weighted_step, exact_jump_distribution,
    propensities, rule_set, select_uniformized_rule, JumpBranch,
};
pub use dtmc::dtmc_step;

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{PatternCounts, VoterGraph};
use crate::patterns::count_motif;
use crate::rng::RandomStream;
use crate::rules::{EventRecord, RuleError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassActionRates {
    pub rewire_keep_one: f64,
    pub rewire_keep_zero: f64,
    pub adopt_to_one: f64,
    pub adopt_to_zero: f64,
}

impl MassActionRates {
    pub fn symmetric(rewire: f64, adopt: f64) -> Self {
        MassActionRates {
            rewire_keep_one: rewire,
            rewire_keep_zero: rewire,
            adopt_to_one: adopt,
            adopt_to_zero: adopt,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.rewire_keep_one, self.rewire_keep_zero, self.adopt_to_one, self.adopt_to_zero]
    }
}

/// Per-rule firing probabilities of the uniformized chain, in
/// [`RuleId::BASIC`](crate::rules::RuleId::BASIC) order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleProbabilities(pub [f64; 4]);

impl RuleProbabilities {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(p: [f64; 4]) -> Result<Self, EngineError> {
        let probs = RuleProbabilities(p);
        probs.validate()?;
        Ok(probs)
    }

    /// `(α/2, α/2, (1−α)/2, (1−α)/2)`: the reference chain's rule split.
    pub fn from_alpha(alpha: f64) -> Self {
        let r = alpha / 2.0;
        let a = (1.0 - alpha) / 2.0;
        RuleProbabilities([r, r, a, a])
    }

    fn validate(&self) -> Result<(), EngineError> {
        if self.0.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(EngineError::InvalidConfig(format!("rule probabilities must be non-negative: {:?}", self.0)));
        }
        let sum: f64 = self.0.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(EngineError::InvalidConfig(format!("rule probabilities sum to {sum}, not 1")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Semantics {
    Dtmc { alpha: f64, count_noop_steps: bool },
    CtmcWeighted { alpha: f64 },
    CtmcMassAction(MassActionRates),
    CtmcUniformized(RuleProbabilities),
    CtmcLcm { alpha: f64 },
}

impl Semantics {
    /// Command-line name of the model.
    pub fn name(&self) -> &'static str {
        match self {
            Semantics::Dtmc { .. } => "dtmc",
            Semantics::CtmcWeighted { .. } => "ctmc-weighted",
            Semantics::CtmcMassAction(_) => "ctmc-mass-action",
            Semantics::CtmcUniformized(_) => "ctmc-uniform",
            Semantics::CtmcLcm { .. } => "ctmc-lcm",
        }
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, Semantics::Dtmc { .. })
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let check_alpha = |alpha: f64| {
            if (0.0..=1.0).contains(&alpha) {
                Ok(())
            } else {
                Err(EngineError::InvalidConfig(format!("alpha must lie in [0, 1], got {alpha}")))
            }
        };
        match *self {
            Semantics::Dtmc { alpha, .. } | Semantics::CtmcWeighted { alpha } | Semantics::CtmcLcm { alpha } => {
                check_alpha(alpha)
            }
            Semantics::CtmcMassAction(rates) => {
                if rates.as_array().iter().all(|r| r.is_finite() && *r > 0.0) {
                    Ok(())
                } else {
                    Err(EngineError::InvalidConfig(format!("mass-action rates must be positive: {rates:?}")))
                }
            }
            Semantics::CtmcUniformized(p) => p.validate(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub semantics: Semantics,
    pub max_steps: u64,
    /// Horizon for the continuous-time engines; ignored by the DTMC.
    pub max_time: f64,
    /// Record counts after every `sample_stride` effective events; 0 keeps
    /// only the initial and final samples.
    pub sample_stride: u64,
    pub record_events: bool,
}

impl EngineConfig {
    pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

    pub fn new(semantics: Semantics) -> Self {
        EngineConfig {
            semantics,
            max_steps: Self::DEFAULT_MAX_STEPS,
            max_time: f64::INFINITY,
            sample_stride: 0,
            record_events: true,
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        self.semantics.validate()?;
        if self.max_steps == 0 {
            return Err(EngineError::InvalidConfig("max_steps must be positive".into()));
        }
        if self.max_time.is_nan() || self.max_time <= 0.0 {
            return Err(EngineError::InvalidConfig(format!("max_time must be positive, got {}", self.max_time)));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),
    #[error("the round-based chain is undefined on a graph without groups")]
    NoGroups,
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StopReason {
    NoDiscordant,
    NoEffectiveRule,
    StepLimit,
    TimeLimit,
}

impl StopReason {
    pub fn is_absorbing(self) -> bool {
        matches!(self, StopReason::NoDiscordant | StopReason::NoEffectiveRule)
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoOpReason {
    /// The drawn group was concordant.
    ConcordantGroup,
    /// A rewire was chosen but the actor is the only holder of its opinion.
    NoRewireCandidate,
    /// The chosen rule has no match.
    NoMatch,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    Effective(EventRecord),
    NoOp(NoOpReason),
    Absorbed(StopReason),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedEvent {
    pub step: u64,
    pub time: f64,
    pub event: EventRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub step: u64,
    pub time: f64,
    pub counts: PatternCounts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalSummary {
    pub absorbed: bool,
    pub reason: StopReason,
    pub counts: PatternCounts,
    pub steps: u64,
    pub effective_events: u64,
    /// Continuous time for CTMC engines; number of rounds for the DTMC.
    pub time: f64,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub model: String,
    pub events: Vec<TimedEvent>,
    pub samples: Vec<Sample>,
    pub summary: FinalSummary,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum JsonLine<'a> {
    Sample(&'a Sample),
    Event(&'a TimedEvent),
    Final(&'a FinalSummary),
}

impl Trajectory {
    /// One JSON object per line: samples and events in step order, then the
    /// final summary.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut events = self.events.iter().peekable();
        let line = |w: &mut W, l: JsonLine| -> io::Result<()> {
            serde_json::to_writer(&mut *w, &l)?;
            w.write_all(b"\n")
        };
        for s in &self.samples {
            while let Some(e) = events.next_if(|e| e.step <= s.step) {
                line(&mut w, JsonLine::Event(e))?;
            }
            line(&mut w, JsonLine::Sample(s))?;
        }
        for e in events {
            line(&mut w, JsonLine::Event(e))?;
        }
        line(&mut w, JsonLine::Final(&self.summary))
    }
}

/// Whether any effective transition has positive probability in `g`.
fn effective_possible(g: &VoterGraph, semantics: &Semantics) -> bool {
    let c = g.counts();
    if c.n_01 == 0 {
        return false;
    }
    match *semantics {
        Semantics::Dtmc { alpha, .. } => alpha < 1.0 || c.n_one >= 2 || c.n_zero >= 2,
        Semantics::CtmcUniformized(RuleProbabilities(p)) => crate::rules::RuleId::BASIC
            .iter()
            .zip(p)
            .any(|(r, pj)| pj > 0.0 && count_motif(g, r.spec().motif) > 0),
        ref gillespie => propensities(gillespie, &c)
            .expect("continuous semantics")
            .iter()
            .any(|&a| a > 0.0),
    }
}

struct Recorder<'a> {
    config: &'a EngineConfig,
    events: Vec<TimedEvent>,
    samples: Vec<Sample>,
    steps: u64,
    effective: u64,
    time: f64,
}

impl Recorder<'_> {
    fn sample(&mut self, counts: PatternCounts) {
        self.samples.push(Sample {
            step: self.steps,
            time: self.time,
            counts,
        });
    }

    fn effective(&mut self, ev: EventRecord) {
        self.effective += 1;
        let after = ev.after;
        if self.config.record_events {
            self.events.push(TimedEvent {
                step: self.steps,
                time: self.time,
                event: ev,
            });
        }
        let stride = self.config.sample_stride;
        if stride > 0 && self.effective.is_multiple_of(stride) {
            self.sample(after);
        }
    }
}

/// Runs the configured semantics on `g` until absorption or a limit.
pub fn run(g: &mut VoterGraph, config: &EngineConfig, rng: &mut RandomStream) -> Result<Trajectory, EngineError> {
    config.validate()?;
    let sem = config.semantics;
    if matches!(sem, Semantics::Dtmc { .. }) && g.n_groups() == 0 {
        return Err(EngineError::NoGroups);
    }
    let mut rec = Recorder {
        config,
        events: Vec::new(),
        samples: Vec::new(),
        steps: 0,
        effective: 0,
        time: 0.0,
    };
    rec.sample(g.counts());
    let mut rounds: u64 = 0;

    let reason = loop {
        if g.counts().n_01 == 0 {
            break StopReason::NoDiscordant;
        }
        if !effective_possible(g, &sem) {
            break StopReason::NoEffectiveRule;
        }
        if rec.steps >= config.max_steps {
            break StopReason::StepLimit;
        }
        let outcome = match sem {
            Semantics::Dtmc { alpha, count_noop_steps } => {
                let out = dtmc_step(g, alpha, rng)?;
                rounds += 1;
                rec.time = rounds as f64;
                if count_noop_steps || matches!(out, StepOutcome::Effective(_)) {
                    rec.steps += 1;
                }
                out
            }
            Semantics::CtmcUniformized(probs) => {
                let (dt, rule) = select_uniformized_rule(&probs, rng);
                if rec.time + dt > config.max_time {
                    rec.time = config.max_time;
                    break StopReason::TimeLimit;
                }
                rec.time += dt;
                rec.steps += 1;
                ctmc::fire(g, rule, rng)?
            }
            ref gillespie => match ctmc::plan(g, gillespie, rng) {
                ctmc::Plan::Absorbed(r) => break r,
                ctmc::Plan::Fire { dt, rule } => {
                    if rec.time + dt > config.max_time {
                        rec.time = config.max_time;
                        break StopReason::TimeLimit;
                    }
                    rec.time += dt;
                    rec.steps += 1;
                    ctmc::fire(g, rule, rng)?
                }
            },
        };
        match outcome {
            StepOutcome::Effective(ev) => rec.effective(ev),
            StepOutcome::NoOp(_) => {}
            StepOutcome::Absorbed(r) => break r,
        }
    };

    let counts = g.counts();
    if rec.samples.last().map(|s| (s.step, s.counts)) != Some((rec.steps, counts)) {
        rec.sample(counts);
    }
    Ok(Trajectory {
        model: sem.name().to_string(),
        summary: FinalSummary {
            absorbed: reason.is_absorbing(),
            reason,
            counts,
            steps: rec.steps,
            effective_events: rec.effective,
            time: rec.time,
            seed: None,
        },
        events: rec.events,
        samples: rec.samples,
    })
}

/// [`run`] with a fresh stream seeded by `seed`, recorded in the summary.
pub fn run_seeded(g: &mut VoterGraph, config: &EngineConfig, seed: u64) -> Result<Trajectory, EngineError> {
    let mut rng = RandomStream::from_seed(seed);
    let mut t = run(g, config, &mut rng)?;
    t.summary.seed = Some(seed);
    Ok(t)
}
