//! Nested parameter sweeps over `alpha × u` with reproducible per-run seeds.
//!
//! Configuration `c` enumerates `alphas` in the outer loop and `us` in the
//! inner one; run `r` of configuration `c` is seeded with
//! [`derive_seed`]`(base_seed, c, r)`. The same stream first builds the
//! initial graph and then drives the engine. Runs execute on a rayon pool of
//! `jobs` threads and rows are emitted in `(c, r)` order.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{summarize, RunContext, SweepRecord};
use crate::engine::{run, EngineConfig, EngineError, MassActionRates, RuleProbabilities, Semantics};
use crate::generator::{generate, EdgeMode, InitError, InitSpec};
use crate::rng::{derive_seed, RandomStream};

pub const CSV_HEADER: &str = "model,alpha,u,n_agents,n_edges,run,seed,steps,effective_events,sim_time,absorb_reason,minority_frac_final,n_components,fragmented,wallclock_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Dtmc,
    CtmcWeighted,
    CtmcMassAction,
    CtmcUniform,
    CtmcLcm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Dtmc,
        ModelKind::CtmcWeighted,
        ModelKind::CtmcMassAction,
        ModelKind::CtmcUniform,
        ModelKind::CtmcLcm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Dtmc => "dtmc",
            ModelKind::CtmcWeighted => "ctmc-weighted",
            ModelKind::CtmcMassAction => "ctmc-mass-action",
            ModelKind::CtmcUniform => "ctmc-uniform",
            ModelKind::CtmcLcm => "ctmc-lcm",
        }
    }

    /// Semantics at sweep coordinate `alpha`. For mass action `alpha` is the
    /// rewire base rate of both rewire rules.
    pub fn semantics(self, alpha: f64, adopt_rates: [f64; 2], count_noop_steps: bool) -> Semantics {
        match self {
            ModelKind::Dtmc => Semantics::Dtmc { alpha, count_noop_steps },
            ModelKind::CtmcWeighted => Semantics::CtmcWeighted { alpha },
            ModelKind::CtmcMassAction => Semantics::CtmcMassAction(MassActionRates {
                rewire_keep_one: alpha,
                rewire_keep_zero: alpha,
                adopt_to_one: adopt_rates[0],
                adopt_to_zero: adopt_rates[1],
            }),
            ModelKind::CtmcUniform => Semantics::CtmcUniformized(RuleProbabilities::from_alpha(alpha)),
            ModelKind::CtmcLcm => Semantics::CtmcLcm { alpha },
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ModelKind::ALL.iter().map(|m| m.name()).collect();
                format!("unknown model `{s}`, expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: ModelKind,
    pub alphas: Vec<f64>,
    pub us: Vec<f64>,
    pub runs_per_config: u64,
    pub n_agents: usize,
    pub edge_mode: EdgeMode,
    pub base_seed: u64,
    pub max_steps: u64,
    pub max_time: f64,
    pub count_noop_steps: bool,
    /// Adopt-to-One and adopt-to-Zero base rates (mass action only).
    pub adopt_rates: [f64; 2],
    pub jobs: usize,
    /// Measure wall-clock time per run. Off by default so that identical
    /// specs give byte-identical CSV files; the column is then 0.
    pub record_wallclock: bool,
}

impl SweepSpec {
    /// Seven alphas `0.1..=0.7`, three `u`s, 100 agents and 400 links.
    pub fn standard(model: ModelKind) -> Self {
        SweepSpec {
            model,
            alphas: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7],
            us: vec![0.5, 0.3, 0.1],
            runs_per_config: 40,
            n_agents: 100,
            edge_mode: EdgeMode::FixedCount(400),
            base_seed: 0,
            max_steps: EngineConfig::DEFAULT_MAX_STEPS,
            max_time: f64::INFINITY,
            count_noop_steps: false,
            adopt_rates: [1.0, 1.0],
            jobs: default_jobs(),
            record_wallclock: false,
        }
    }

    pub fn n_configs(&self) -> usize {
        self.alphas.len() * self.us.len()
    }

    /// `(alpha, u)` of configuration `c`.
    pub fn config(&self, c: usize) -> (f64, f64) {
        (self.alphas[c / self.us.len()], self.us[c % self.us.len()])
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |flag: &'static str, reason: String| Err(HarnessError::InvalidFlag { flag, reason });
        if self.alphas.is_empty() {
            return bad("--alphas", "at least one value is required".into());
        }
        for &a in &self.alphas {
            let ok = if self.model == ModelKind::CtmcMassAction {
                a.is_finite() && a > 0.0
            } else {
                (0.0..=1.0).contains(&a)
            };
            if !ok {
                let want = if self.model == ModelKind::CtmcMassAction {
                    "a positive rewire rate"
                } else {
                    "a probability in [0, 1]"
                };
                return bad("--alphas", format!("{a} is not {want}"));
            }
        }
        if self.us.is_empty() {
            return bad("--us", "at least one value is required".into());
        }
        if let Some(u) = self.us.iter().find(|u| !(0.0..=1.0).contains(*u)) {
            return bad("--us", format!("{u} is not in [0, 1]"));
        }
        if self.adopt_rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return bad("--rate-adopt-one/--rate-adopt-zero", format!("{:?} must be positive", self.adopt_rates));
        }
        if self.max_steps == 0 {
            return bad("--max-steps", "must be positive".into());
        }
        if self.max_time.is_nan() || self.max_time <= 0.0 {
            return bad("--max-time", "must be positive".into());
        }
        if self.jobs == 0 {
            return bad("--jobs", "must be positive".into());
        }
        let init = InitSpec { n_agents: self.n_agents, u: 0.5, edge_mode: self.edge_mode };
        match init.validate() {
            Ok(()) => Ok(()),
            Err(InitError::NoAgents) => bad("--agents", "must be positive".into()),
            Err(e @ InitError::TooManyEdges { .. }) => bad("--edges", e.to_string()),
            Err(e @ InitError::PairProbability(_)) => bad("--pair-prob", e.to_string()),
            Err(e) => bad("--us", e.to_string()),
        }
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid {flag}: {reason}")]
    InvalidFlag { flag: &'static str, reason: String },
    #[error(transparent)]
    Init(#[from] InitError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

fn run_one(spec: &SweepSpec, c: usize, r: u64) -> Result<SweepRecord, HarnessError> {
    let started = Instant::now();
    let (alpha, u) = spec.config(c);
    let seed = derive_seed(spec.base_seed, c as u64, r);
    let mut rng = RandomStream::from_seed(seed);
    let init = InitSpec { n_agents: spec.n_agents, u, edge_mode: spec.edge_mode };
    let mut g = generate(&init, &mut rng)?;
    let config = EngineConfig {
        semantics: spec.model.semantics(alpha, spec.adopt_rates, spec.count_noop_steps),
        max_steps: spec.max_steps,
        max_time: spec.max_time,
        sample_stride: 0,
        record_events: false,
    };
    let mut t = run(&mut g, &config, &mut rng)?;
    t.summary.seed = Some(seed);
    let wallclock_ms = if spec.record_wallclock {
        started.elapsed().as_millis() as u64
    } else {
        0
    };
    let ctx = RunContext {
        model: spec.model.name().to_string(),
        alpha,
        u,
        run: r,
        seed,
        wallclock_ms,
    };
    Ok(summarize(&t, &g, &ctx))
}

/// Runs every `(config, run)` pair; rows come back in `(config, run)` order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, HarnessError> {
    spec.validate()?;
    let work: Vec<(usize, u64)> = (0..spec.n_configs())
        .flat_map(|c| (0..spec.runs_per_config).map(move |r| (c, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    pool.install(|| work.par_iter().map(|&(c, r)| run_one(spec, c, r)).collect())
}

pub fn write_csv<W: Write>(records: &[SweepRecord], w: W) -> Result<(), HarnessError> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(CSV_HEADER.split(','))?;
    for rec in records {
        wtr.serialize(rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<SweepRecord>, csv::Error> {
    csv::Reader::from_reader(r).deserialize().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub alpha: f64,
    pub u: f64,
    pub runs: usize,
    pub mean_minority: f64,
    pub fragmented_share: f64,
    pub absorbed_share: f64,
}

/// Per-`(alpha, u)` aggregates in first-appearance order.
pub fn summarize_configs(records: &[SweepRecord]) -> Vec<ConfigSummary> {
    let mut out: Vec<ConfigSummary> = Vec::new();
    let mut sums: Vec<(f64, usize, usize)> = Vec::new();
    for rec in records {
        let i = match out.iter().position(|s| s.alpha == rec.alpha && s.u == rec.u) {
            Some(i) => i,
            None => {
                out.push(ConfigSummary {
                    alpha: rec.alpha,
                    u: rec.u,
                    runs: 0,
                    mean_minority: 0.0,
                    fragmented_share: 0.0,
                    absorbed_share: 0.0,
                });
                sums.push((0.0, 0, 0));
                out.len() - 1
            }
        };
        out[i].runs += 1;
        sums[i].0 += rec.minority_frac_final;
        sums[i].1 += usize::from(rec.fragmented);
        sums[i].2 += usize::from(rec.absorb_reason.is_absorbing());
    }
    for (s, (m, f, a)) in out.iter_mut().zip(sums) {
        let n = s.runs as f64;
        s.mean_minority = m / n;
        s.fragmented_share = f as f64 / n;
        s.absorbed_share = a as f64 / n;
    }
    out
}

/// First `alpha` at which the mean minority fraction reaches `level`,
/// linearly interpolated between neighbouring grid points. `points` must be
/// sorted by `alpha`.
pub fn crossing(points: &[(f64, f64)], level: f64) -> Option<f64> {
    if let Some(&(a, m)) = points.first() {
        if m >= level {
            return Some(a);
        }
    }
    points.windows(2).find_map(|w| {
        let ((a0, m0), (a1, m1)) = (w[0], w[1]);
        (m0 < level && m1 >= level).then(|| a0 + (level - m0) / (m1 - m0) * (a1 - a0))
    })
}

/// Prints one line per configuration.
pub fn print_summary<W: Write>(spec: &SweepSpec, records: &[SweepRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "model={} configs={} runs/config={}", spec.model, spec.n_configs(), spec.runs_per_config)?;
    for s in summarize_configs(records) {
        writeln!(
            w,
            "alpha={:<8} u={:<5} runs={:<4} mean_minority={:.4} fragmented={:.3} absorbed={:.3}",
            s.alpha, s.u, s.runs, s.mean_minority, s.fragmented_share, s.absorbed_share
        )?;
    }
    Ok(())
}
