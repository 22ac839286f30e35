//! Motifs, match counting, uniform match sampling and brute-force enumeration.
//!
//! Matches are injective: an extra vertex never coincides with an edge
//! endpoint or with another extra. Edge motifs are counted once per group,
//! so a concordant `Edge(One, One)` has one match per `1–1` group rather than
//! one per orientation. With that convention every count has a closed form in
//! the cached [`PatternCounts`]; [`enumerate_matches`] is the independent
//! check used by the tests.

use crate::graph::{AgentId, GroupId, Opinion, PatternCounts, VoterGraph};
use crate::rng::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Motif {
    Vertex(Opinion),
    Edge(Opinion, Opinion),
    /// An edge plus one further agent holding `extra`.
    EdgePlusVertex { edge: (Opinion, Opinion), extra: Opinion },
    /// An edge plus one further agent of each opinion, `One` extra listed first.
    EdgePlusTwoVertices { edge: (Opinion, Opinion) },
}

impl Motif {
    /// The discordant edge with the `One` endpoint first.
    pub const DISCORDANT: (Opinion, Opinion) = (Opinion::One, Opinion::Zero);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    Vertex(AgentId),
    /// `first` is bound to the motif's first edge opinion, `second` to the other.
    Edge { group: GroupId, first: AgentId, second: AgentId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Match {
    pub anchor: Anchor,
    /// Context vertices in motif order; unused slots are `None`.
    pub extras: [Option<AgentId>; 2],
}

impl Match {
    pub fn group(&self) -> Option<GroupId> {
        match self.anchor {
            Anchor::Edge { group, .. } => Some(group),
            Anchor::Vertex(_) => None,
        }
    }

    pub fn extras(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.extras.iter().flatten().copied()
    }

    /// Every agent the match binds, in motif order.
    pub fn agents(&self) -> Vec<AgentId> {
        let mut v = match self.anchor {
            Anchor::Vertex(a) => vec![a],
            Anchor::Edge { first, second, .. } => vec![first, second],
        };
        v.extend(self.extras());
        v
    }
}

fn extra_opinions(motif: Motif) -> &'static [Opinion] {
    match motif {
        Motif::Vertex(_) | Motif::Edge(..) => &[],
        Motif::EdgePlusVertex { extra: Opinion::One, .. } => &[Opinion::One],
        Motif::EdgePlusVertex { extra: Opinion::Zero, .. } => &[Opinion::Zero],
        Motif::EdgePlusTwoVertices { .. } => &[Opinion::One, Opinion::Zero],
    }
}

fn edge_of(motif: Motif) -> Option<(Opinion, Opinion)> {
    match motif {
        Motif::Vertex(_) => None,
        Motif::Edge(a, b) => Some((a, b)),
        Motif::EdgePlusVertex { edge, .. } | Motif::EdgePlusTwoVertices { edge } => Some(edge),
    }
}

/// Closed-form match count from cached pattern counts.
pub fn count_from_counts(c: &PatternCounts, motif: Motif) -> u64 {
    let Some((a, b)) = edge_of(motif) else {
        let Motif::Vertex(o) = motif else { unreachable!() };
        return c.agents_with(o) as u64;
    };
    let mut total = c.groups_between(a, b) as u64;
    for &x in extra_opinions(motif) {
        // endpoints holding x are excluded by injectivity
        let used = usize::from(a == x) + usize::from(b == x);
        total *= c.agents_with(x).saturating_sub(used) as u64;
    }
    total
}

pub fn count_motif(g: &VoterGraph, motif: Motif) -> u64 {
    count_from_counts(&g.counts(), motif)
}

/// All admissible matches by exhaustive search. Never reads the count cache.
pub fn enumerate_matches(g: &VoterGraph, motif: Motif) -> Vec<Match> {
    let mut out = Vec::new();
    let Some((oa, ob)) = edge_of(motif) else {
        let Motif::Vertex(o) = motif else { unreachable!() };
        for a in g.agents() {
            if g.opinion(a) == o {
                out.push(Match { anchor: Anchor::Vertex(a), extras: [None; 2] });
            }
        }
        return out;
    };
    for (group, [x, y]) in g.groups() {
        let (px, py) = (g.opinion(x), g.opinion(y));
        let (first, second) = if (px, py) == (oa, ob) {
            (x, y)
        } else if (py, px) == (oa, ob) {
            (y, x)
        } else {
            continue;
        };
        let anchor = Anchor::Edge { group, first, second };
        let wanted = extra_opinions(motif);
        let mut extras = [None; 2];
        extend_extras(g, wanted, &[first, second], &mut extras, 0, anchor, &mut out);
    }
    out
}

fn extend_extras(
    g: &VoterGraph,
    wanted: &[Opinion],
    used: &[AgentId],
    extras: &mut [Option<AgentId>; 2],
    depth: usize,
    anchor: Anchor,
    out: &mut Vec<Match>,
) {
    if depth == wanted.len() {
        out.push(Match { anchor, extras: *extras });
        return;
    }
    for z in g.agents() {
        if g.opinion(z) != wanted[depth] || used.contains(&z) || extras[..depth].contains(&Some(z)) {
            continue;
        }
        extras[depth] = Some(z);
        extend_extras(g, wanted, used, extras, depth + 1, anchor, out);
        extras[depth] = None;
    }
}

/// Draws one admissible match uniformly at random, or `None` if there is none.
///
/// The edge is drawn uniformly from its opinion class (the discordant index
/// for mixed edges), then each extra is drawn uniformly from the agents of its
/// opinion, redrawing whenever it hits an already bound agent.
pub fn sample_match_uniform(g: &VoterGraph, motif: Motif, rng: &mut RandomStream) -> Option<Match> {
    if count_motif(g, motif) == 0 {
        return None;
    }
    let Some((oa, ob)) = edge_of(motif) else {
        let Motif::Vertex(o) = motif else { unreachable!() };
        let pool = g.agents_with(o);
        return Some(Match {
            anchor: Anchor::Vertex(pool[rng.uniform_index(pool.len())]),
            extras: [None; 2],
        });
    };

    let group = if oa != ob {
        let d = g.discordant_groups();
        d[rng.uniform_index(d.len())]
    } else {
        loop {
            let cand = GroupId(rng.uniform_index(g.n_groups()) as u32);
            let [x, y] = g.endpoints(cand);
            if g.opinion(x) == oa && g.opinion(y) == oa {
                break cand;
            }
        }
    };
    let [x, y] = g.endpoints(group);
    let (first, second) = if g.opinion(x) == oa { (x, y) } else { (y, x) };

    let mut extras = [None; 2];
    for (slot, &want) in extra_opinions(motif).iter().enumerate() {
        let pool = g.agents_with(want);
        let z = loop {
            let z = pool[rng.uniform_index(pool.len())];
            if z != first && z != second && !extras[..slot].contains(&Some(z)) {
                break z;
            }
        };
        extras[slot] = Some(z);
    }
    Some(Match {
        anchor: Anchor::Edge { group, first, second },
        extras,
    })
}

/// Checks `|matches(edge•∘ + x)| == n_01 · (N_x − 1)` for both opinions `x`,
/// enumerating the left side by brute force.
pub fn verify_counting_identity(g: &VoterGraph) -> bool {
    let c = g.counts();
    Opinion::BOTH.iter().all(|&x| {
        let motif = Motif::EdgePlusVertex { edge: Motif::DISCORDANT, extra: x };
        let brute = enumerate_matches(g, motif).len() as u64;
        let closed = c.n_01 as u64 * c.agents_with(x).saturating_sub(1) as u64;
        brute == closed
    })
}

/// True if `m` is currently an admissible match of `motif` in `g`.
pub fn is_admissible(g: &VoterGraph, motif: Motif, m: &Match) -> bool {
    let wanted = extra_opinions(motif);
    let extras: Vec<AgentId> = m.extras().collect();
    if extras.len() != wanted.len() || m.extras[wanted.len()..].iter().any(Option::is_some) {
        return false;
    }
    if m.agents().iter().any(|&a| !g.contains_agent(a)) {
        return false;
    }
    let anchored = match (edge_of(motif), m.anchor) {
        (None, Anchor::Vertex(a)) => {
            let Motif::Vertex(o) = motif else { unreachable!() };
            g.opinion(a) == o
        }
        (Some((oa, ob)), Anchor::Edge { group, first, second }) => {
            g.contains_group(group)
                && g.other_endpoint(group, first) == Some(second)
                && g.opinion(first) == oa
                && g.opinion(second) == ob
        }
        _ => false,
    };
    if !anchored {
        return false;
    }
    let all = m.agents();
    let injective = all.iter().enumerate().all(|(i, a)| !all[..i].contains(a));
    injective && extras.iter().zip(wanted).all(|(&z, &o)| g.opinion(z) == o)
}
