use crate::graph::{Opinion, VoterGraph};
use crate::patterns::{Anchor, Match};
use crate::rng::RandomStream;
use crate::rules::{apply, RuleId};

use super::{EngineError, NoOpReason, StepOutcome};

/// One round of the reference chain.
///
/// 1. Draw a group uniformly among all groups; concordant means no-op.
/// 2. Draw the acting endpoint `x`, each with probability 1/2.
/// 3. With probability `alpha`, `x` rewires to a uniformly drawn other agent
///    of its own opinion (no-op when there is none); otherwise `x` adopts its
///    partner's opinion.
pub fn dtmc_step(g: &mut VoterGraph, alpha: f64, rng: &mut RandomStream) -> Result<StepOutcome, EngineError> {
    if g.n_groups() == 0 {
        return Err(EngineError::NoGroups);
    }
    let group = crate::graph::GroupId(rng.uniform_index(g.n_groups()) as u32);
    if !g.is_discordant(group) {
        return Ok(StepOutcome::NoOp(NoOpReason::ConcordantGroup));
    }
    let [a, b] = g.endpoints(group);
    let (x, y) = if rng.uniform_index(2) == 0 { (a, b) } else { (b, a) };
    let (first, second) = if g.opinion(a) == Opinion::One { (a, b) } else { (b, a) };
    let anchor = Anchor::Edge { group, first, second };
    let xo = g.opinion(x);

    let (rule, extras) = if rng.bernoulli(alpha) {
        let pool = g.agents_with(xo);
        if pool.len() < 2 {
            return Ok(StepOutcome::NoOp(NoOpReason::NoRewireCandidate));
        }
        let z = loop {
            let z = pool[rng.uniform_index(pool.len())];
            if z != x {
                break z;
            }
        };
        let rule = match xo {
            Opinion::One => RuleId::RewireKeepOne,
            Opinion::Zero => RuleId::RewireKeepZero,
        };
        (rule, [Some(z), None])
    } else {
        let rule = match g.opinion(y) {
            Opinion::One => RuleId::AdoptToOne,
            Opinion::Zero => RuleId::AdoptToZero,
        };
        (rule, [None, None])
    };
    let ev = apply(g, &rule.spec(), &Match { anchor, extras })?;
    Ok(StepOutcome::Effective(ev))
}
