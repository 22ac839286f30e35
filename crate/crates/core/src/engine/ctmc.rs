use crate::graph::{PatternCounts, VoterGraph};
use crate::patterns::{count_motif, enumerate_matches, sample_match_uniform, Match};
use crate::rng::RandomStream;
use crate::rules::{apply, RuleId};

use super::{EngineError, MassActionRates, NoOpReason, RuleProbabilities, Semantics, StepOutcome, StopReason};

/// Rules scheduled by a continuous-time semantics, in selection order.
pub fn rule_set(semantics: &Semantics) -> [RuleId; 4] {
    match semantics {
        Semantics::CtmcLcm { .. } => RuleId::EXTENDED,
        _ => RuleId::BASIC,
    }
}

/// Per-rule propensities of a Gillespie-scheduled semantics, aligned with
/// [`rule_set`]. `None` for the DTMC and the uniformized chain, which are not
/// driven by propensities.
pub fn propensities(semantics: &Semantics, c: &PatternCounts) -> Option<[f64; 4]> {
    let n01 = c.n_01 as f64;
    let minus_one = |n: usize| n.saturating_sub(1) as f64;
    match *semantics {
        Semantics::CtmcWeighted { alpha } => {
            // mass-action count n01·(N_x − 1) divided by its weight (N_x − 1),
            // or zero when there is no rewiring target
            let r = alpha / 2.0 * n01;
            let a = (1.0 - alpha) / 2.0 * n01;
            let gate = |n: usize| if n >= 2 { r } else { 0.0 };
            Some([gate(c.n_one), gate(c.n_zero), a, a])
        }
        Semantics::CtmcMassAction(MassActionRates {
            rewire_keep_one,
            rewire_keep_zero,
            adopt_to_one,
            adopt_to_zero,
        }) => Some([
            rewire_keep_one * n01 * minus_one(c.n_one),
            rewire_keep_zero * n01 * minus_one(c.n_zero),
            adopt_to_one * n01,
            adopt_to_zero * n01,
        ]),
        Semantics::CtmcLcm { alpha } => {
            let m = n01 * minus_one(c.n_one) * minus_one(c.n_zero);
            let r = alpha / 2.0 * m;
            let a = (1.0 - alpha) / 2.0 * m;
            Some([r, r, a, a])
        }
        Semantics::Dtmc { .. } | Semantics::CtmcUniformized(_) => None,
    }
}

pub(super) enum Plan {
    Absorbed(StopReason),
    Fire { dt: f64, rule: RuleId },
}

/// Index of the first entry whose cumulative sum exceeds `target`, skipping
/// zero weights. Falls back to the last positive weight on rounding.
fn select(weights: &[f64; 4], target: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (j, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = j;
        if target < acc {
            return j;
        }
    }
    last
}

/// Waiting time and rule choice of one direct-method step (two draws).
pub(super) fn plan(g: &VoterGraph, semantics: &Semantics, rng: &mut RandomStream) -> Plan {
    let c = g.counts();
    if c.n_01 == 0 {
        return Plan::Absorbed(StopReason::NoDiscordant);
    }
    let a = propensities(semantics, &c).expect("plan requires a propensity-driven semantics");
    let total: f64 = a.iter().sum();
    if total <= 0.0 {
        return Plan::Absorbed(StopReason::NoEffectiveRule);
    }
    let dt = rng.exponential(total);
    let j = select(&a, rng.uniform() * total);
    Plan::Fire { dt, rule: rule_set(semantics)[j] }
}

/// Applies `rule` at a uniformly drawn match, or reports that it has none.
pub(super) fn fire(g: &mut VoterGraph, rule: RuleId, rng: &mut RandomStream) -> Result<StepOutcome, EngineError> {
    let spec = rule.spec();
    match sample_match_uniform(g, spec.motif, rng) {
        Some(m) => Ok(StepOutcome::Effective(apply(g, &spec, &m)?)),
        None => Ok(StepOutcome::NoOp(NoOpReason::NoMatch)),
    }
}

fn gillespie_step(
    g: &mut VoterGraph,
    semantics: &Semantics,
    rng: &mut RandomStream,
) -> Result<(f64, StepOutcome), EngineError> {
    semantics.validate()?;
    match plan(g, semantics, rng) {
        Plan::Absorbed(r) => Ok((0.0, StepOutcome::Absorbed(r))),
        Plan::Fire { dt, rule } => Ok((dt, fire(g, rule, rng)?)),
    }
}

/// Weighted-rule step: the continuous-time counterpart of the reference chain.
pub fn ctmc_weighted_step(
    g: &mut VoterGraph,
    alpha: f64,
    rng: &mut RandomStream,
) -> Result<(f64, StepOutcome), EngineError> {
    gillespie_step(g, &Semantics::CtmcWeighted { alpha }, rng)
}

pub fn ctmc_mass_action_step(
    g: &mut VoterGraph,
    rates: &MassActionRates,
    rng: &mut RandomStream,
) -> Result<(f64, StepOutcome), EngineError> {
    gillespie_step(g, &Semantics::CtmcMassAction(*rates), rng)
}

/// Common-left-hand-side step over the extended rules.
pub fn ctmc_lcm_step(g: &mut VoterGraph, alpha: f64, rng: &mut RandomStream) -> Result<(f64, StepOutcome), EngineError> {
    gillespie_step(g, &Semantics::CtmcLcm { alpha }, rng)
}

/// Rate-1 waiting time and a rule drawn with the fixed probabilities.
pub fn select_uniformized_rule(probs: &RuleProbabilities, rng: &mut RandomStream) -> (f64, RuleId) {
    let dt = rng.exponential(1.0);
    let j = select(&probs.0, rng.uniform());
    (dt, RuleId::BASIC[j])
}

/// Uniformized step: always advances time; a matchless rule is a no-op.
pub fn ctmc_uniformized_step(
    g: &mut VoterGraph,
    probs: &RuleProbabilities,
    rng: &mut RandomStream,
) -> Result<(f64, StepOutcome), EngineError> {
    probs.validate()?;
    let (dt, rule) = select_uniformized_rule(probs, rng);
    Ok((dt, fire(g, rule, rng)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpBranch {
    pub rule: RuleId,
    pub matched: Match,
    pub probability: f64,
}

/// Exact distribution of the next effective jump: rule `j` with probability
/// `a_j / A`, then a uniform match of it. Matches are enumerated by brute
/// force, so this is meant for small graphs. Empty when nothing can fire.
pub fn exact_jump_distribution(g: &VoterGraph, semantics: &Semantics) -> Result<Vec<JumpBranch>, EngineError> {
    semantics.validate()?;
    let weights = match *semantics {
        Semantics::CtmcUniformized(RuleProbabilities(p)) => {
            let mut w = p;
            for (wj, r) in w.iter_mut().zip(RuleId::BASIC) {
                if count_motif(g, r.spec().motif) == 0 {
                    *wj = 0.0;
                }
            }
            w
        }
        ref s => propensities(s, &g.counts())
            .ok_or_else(|| EngineError::InvalidConfig("no jump distribution for the round-based chain".into()))?,
    };
    let total: f64 = weights.iter().sum();
    let mut out = Vec::new();
    if total <= 0.0 {
        return Ok(out);
    }
    for (rule, w) in rule_set(semantics).into_iter().zip(weights) {
        if w <= 0.0 {
            continue;
        }
        let matches = enumerate_matches(g, rule.spec().motif);
        let each = w / total / matches.len() as f64;
        out.extend(matches.into_iter().map(|matched| JumpBranch {
            rule,
            matched,
            probability: each,
        }));
    }
    Ok(out)
}
