//! The eight transformation rules as data.
//!
//! Four basic rules (two rewire, two adopt) and their extensions to a common
//! left-hand side: a discordant edge plus one further agent of each opinion.
//! Rules never create or delete agents or groups, so applying one reduces to
//! an opinion update or a single group redirection.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AgentId, GraphError, GroupId, Opinion, PatternCounts, VoterGraph};
use crate::patterns::{is_admissible, Anchor, Match, Motif};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    RewireKeepOne,
    RewireKeepZero,
    AdoptToOne,
    AdoptToZero,
    ExtRewireKeepOne,
    ExtRewireKeepZero,
    ExtAdoptToOne,
    ExtAdoptToZero,
}

impl RuleId {
    pub const BASIC: [RuleId; 4] = [
        RuleId::RewireKeepOne,
        RuleId::RewireKeepZero,
        RuleId::AdoptToOne,
        RuleId::AdoptToZero,
    ];
    pub const EXTENDED: [RuleId; 4] = [
        RuleId::ExtRewireKeepOne,
        RuleId::ExtRewireKeepZero,
        RuleId::ExtAdoptToOne,
        RuleId::ExtAdoptToZero,
    ];

    pub fn spec(self) -> RuleSpec {
        RuleSpec::of(self)
    }

    /// The basic rule with the same effect.
    pub fn basic(self) -> RuleId {
        match self {
            RuleId::ExtRewireKeepOne => RuleId::RewireKeepOne,
            RuleId::ExtRewireKeepZero => RuleId::RewireKeepZero,
            RuleId::ExtAdoptToOne => RuleId::AdoptToOne,
            RuleId::ExtAdoptToZero => RuleId::AdoptToZero,
            basic => basic,
        }
    }

    pub fn is_extended(self) -> bool {
        self.basic() != self
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Effect {
    /// The endpoint holding `keep` leaves its peer and joins the extra agent
    /// holding the same opinion.
    Rewire { keep: Opinion },
    /// The endpoint not holding `target` switches to it.
    SetActorOpinion { target: Opinion },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleSpec {
    pub id: RuleId,
    pub motif: Motif,
    pub effect: Effect,
}

impl RuleSpec {
    pub const fn of(id: RuleId) -> RuleSpec {
        use Opinion::{One, Zero};
        const E: (Opinion, Opinion) = Motif::DISCORDANT;
        const EXT: Motif = Motif::EdgePlusTwoVertices { edge: E };
        let (motif, effect) = match id {
            RuleId::RewireKeepOne => (Motif::EdgePlusVertex { edge: E, extra: One }, Effect::Rewire { keep: One }),
            RuleId::RewireKeepZero => (Motif::EdgePlusVertex { edge: E, extra: Zero }, Effect::Rewire { keep: Zero }),
            RuleId::AdoptToOne => (Motif::Edge(One, Zero), Effect::SetActorOpinion { target: One }),
            RuleId::AdoptToZero => (Motif::Edge(One, Zero), Effect::SetActorOpinion { target: Zero }),
            RuleId::ExtRewireKeepOne => (EXT, Effect::Rewire { keep: One }),
            RuleId::ExtRewireKeepZero => (EXT, Effect::Rewire { keep: Zero }),
            RuleId::ExtAdoptToOne => (EXT, Effect::SetActorOpinion { target: One }),
            RuleId::ExtAdoptToZero => (EXT, Effect::SetActorOpinion { target: Zero }),
        };
        RuleSpec { id, motif, effect }
    }

    /// Opinion of the endpoint that acts (rewires or adopts).
    pub fn actor_opinion(&self) -> Opinion {
        match self.effect {
            Effect::Rewire { keep } => keep,
            Effect::SetActorOpinion { target } => target.flipped(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub rule: RuleId,
    pub group: GroupId,
    /// The endpoint that rewired or adopted.
    pub actor: AgentId,
    /// The actor's partner in `group` before the event.
    pub peer: AgentId,
    /// Set for rewires: the actor's partner after the event.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub new_peer: Option<AgentId>,
    pub before: PatternCounts,
    pub after: PatternCounts,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("match {matched:?} is not admissible for {rule}")]
    StaleMatch { rule: RuleId, matched: Match },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Applies `rule` at match `m`, re-validating the match first.
pub fn apply(g: &mut VoterGraph, rule: &RuleSpec, m: &Match) -> Result<EventRecord, RuleError> {
    let stale = || RuleError::StaleMatch { rule: rule.id, matched: *m };
    if !is_admissible(g, rule.motif, m) {
        return Err(stale());
    }
    let Anchor::Edge { group, first, second } = m.anchor else {
        return Err(stale());
    };
    let (actor, peer) = if g.opinion(first) == rule.actor_opinion() {
        (first, second)
    } else {
        (second, first)
    };
    let before = g.counts();
    let new_peer = match rule.effect {
        Effect::Rewire { keep } => {
            let target = m.extras().find(|&z| g.opinion(z) == keep).ok_or_else(stale)?;
            g.rewire_group(group, actor, target)?;
            Some(target)
        }
        Effect::SetActorOpinion { target } => {
            g.set_opinion(actor, target)?;
            None
        }
    };
    Ok(EventRecord {
        rule: rule.id,
        group,
        actor,
        peer,
        new_peer,
        before,
        after: g.counts(),
    })
}

/// Projects an extended-rule match onto the basic rule with the same effect:
/// rewires keep the extra of the actor's opinion, adopts drop both extras.
pub fn project_to_basic(g: &VoterGraph, rule: RuleId, m: &Match) -> Match {
    let spec = RuleSpec::of(rule);
    let extras = match spec.effect {
        Effect::Rewire { keep } => [m.extras().find(|&z| g.opinion(z) == keep), None],
        Effect::SetActorOpinion { .. } => [None, None],
    };
    Match { anchor: m.anchor, extras }
}
