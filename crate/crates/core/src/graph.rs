//! Typed, attributed, undirected multigraph of agents and two-member groups.
//!
//! Agents carry a binary [`Opinion`]; each group joins exactly two distinct
//! agents. Parallel groups between the same pair are allowed, self-groups are
//! not. The store keeps the five pattern counts and an O(1)-sampleable index
//! of discordant groups up to date on every edit.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const ABSENT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Opinion {
    Zero,
    One,
}

impl Opinion {
    pub const BOTH: [Opinion; 2] = [Opinion::Zero, Opinion::One];

    #[inline]
    pub fn flipped(self) -> Opinion {
        match self {
            Opinion::Zero => Opinion::One,
            Opinion::One => Opinion::Zero,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

impl From<Opinion> for u8 {
    fn from(o: Opinion) -> u8 {
        o as u8
    }
}

impl TryFrom<u8> for Opinion {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            0 => Ok(Opinion::Zero),
            1 => Ok(Opinion::One),
            other => Err(format!("opinion must be 0 or 1, got {other}")),
        }
    }
}

impl fmt::Display for Opinion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupId(pub u32);

impl AgentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl GroupId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} pairs agent {agent} with itself")]
    SelfGroup { edge: usize, agent: usize },
    #[error("edge {edge} references agent {agent}, but the graph has {n_agents} agents")]
    AgentOutOfRange {
        edge: usize,
        agent: usize,
        n_agents: usize,
    },
    #[error("unknown agent {0:?}")]
    UnknownAgent(AgentId),
    #[error("unknown group {0:?}")]
    UnknownGroup(GroupId),
    #[error("agent {agent:?} is not an endpoint of group {group:?}")]
    NotAnEndpoint { group: GroupId, agent: AgentId },
    #[error("rewiring group {group:?} would join agent {agent:?} to itself")]
    SelfRewire { group: GroupId, agent: AgentId },
    #[error("graph is too large for 32-bit handles")]
    TooLarge,
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// Agent and group counts by opinion class.
///
/// `n_11 + n_01 + n_00` is the number of groups and `n_one + n_zero` the
/// number of agents; both are conserved by every rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternCounts {
    pub n_one: usize,
    pub n_zero: usize,
    pub n_11: usize,
    pub n_01: usize,
    pub n_00: usize,
}

impl PatternCounts {
    #[inline]
    pub fn n_agents(&self) -> usize {
        self.n_one + self.n_zero
    }

    #[inline]
    pub fn n_groups(&self) -> usize {
        self.n_11 + self.n_01 + self.n_00
    }

    #[inline]
    pub fn agents_with(&self, o: Opinion) -> usize {
        match o {
            Opinion::One => self.n_one,
            Opinion::Zero => self.n_zero,
        }
    }

    /// Number of groups whose endpoints carry the given (unordered) opinions.
    #[inline]
    pub fn groups_between(&self, a: Opinion, b: Opinion) -> usize {
        match (a, b) {
            (Opinion::One, Opinion::One) => self.n_11,
            (Opinion::Zero, Opinion::Zero) => self.n_00,
            _ => self.n_01,
        }
    }

    fn agent_slot(&mut self, o: Opinion) -> &mut usize {
        match o {
            Opinion::One => &mut self.n_one,
            Opinion::Zero => &mut self.n_zero,
        }
    }

    fn group_slot(&mut self, a: Opinion, b: Opinion) -> &mut usize {
        match (a, b) {
            (Opinion::One, Opinion::One) => &mut self.n_11,
            (Opinion::Zero, Opinion::Zero) => &mut self.n_00,
            _ => &mut self.n_01,
        }
    }
}

/// On-disk form: `{"opinions": [0,1,...], "edges": [[i,j],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub opinions: Vec<Opinion>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug)]
pub struct VoterGraph {
    opinions: Vec<Opinion>,
    endpoints: Vec<[AgentId; 2]>,
    // position of group g inside incidence[endpoints[g][k]]
    slots: Vec<[u32; 2]>,
    incidence: Vec<Vec<GroupId>>,
    by_opinion: [Vec<AgentId>; 2],
    opinion_pos: Vec<u32>,
    discordant: Vec<GroupId>,
    discordant_pos: Vec<u32>,
    counts: PatternCounts,
}

impl VoterGraph {
    pub fn new(opinions: Vec<Opinion>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = opinions.len();
        if n >= ABSENT as usize || edges.len() >= ABSENT as usize {
            return Err(GraphError::TooLarge);
        }
        for (e, &(a, b)) in edges.iter().enumerate() {
            for agent in [a, b] {
                if agent >= n {
                    return Err(GraphError::AgentOutOfRange {
                        edge: e,
                        agent,
                        n_agents: n,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfGroup { edge: e, agent: a });
            }
        }

        let mut g = VoterGraph {
            opinions,
            endpoints: Vec::with_capacity(edges.len()),
            slots: Vec::with_capacity(edges.len()),
            incidence: vec![Vec::new(); n],
            by_opinion: [Vec::new(), Vec::new()],
            opinion_pos: vec![ABSENT; n],
            discordant: Vec::new(),
            discordant_pos: Vec::with_capacity(edges.len()),
            counts: PatternCounts::default(),
        };
        for a in 0..n {
            let o = g.opinions[a];
            g.opinion_pos[a] = g.by_opinion[o.index()].len() as u32;
            g.by_opinion[o.index()].push(AgentId(a as u32));
            *g.counts.agent_slot(o) += 1;
        }
        for &(a, b) in edges {
            let gid = GroupId(g.endpoints.len() as u32);
            let (a, b) = (AgentId(a as u32), AgentId(b as u32));
            g.endpoints.push([a, b]);
            g.slots.push([ABSENT; 2]);
            g.discordant_pos.push(ABSENT);
            g.attach(gid, 0);
            g.attach(gid, 1);
            g.add_class(gid);
        }
        Ok(g)
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        VoterGraph::new(json.opinions.clone(), &edges)
    }

    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        let json: GraphJson = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
        VoterGraph::from_json(&json)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            opinions: self.opinions.clone(),
            edges: self
                .endpoints
                .iter()
                .map(|[a, b]| [a.index(), b.index()])
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph JSON is always serializable")
    }

    #[inline]
    pub fn n_agents(&self) -> usize {
        self.opinions.len()
    }

    #[inline]
    pub fn n_groups(&self) -> usize {
        self.endpoints.len()
    }

    #[inline]
    pub fn counts(&self) -> PatternCounts {
        self.counts
    }

    #[inline]
    pub fn opinion(&self, a: AgentId) -> Opinion {
        self.opinions[a.index()]
    }

    pub fn opinions(&self) -> &[Opinion] {
        &self.opinions
    }

    #[inline]
    pub fn endpoints(&self, g: GroupId) -> [AgentId; 2] {
        self.endpoints[g.index()]
    }

    pub fn groups(&self) -> impl ExactSizeIterator<Item = (GroupId, [AgentId; 2])> + '_ {
        self.endpoints
            .iter()
            .enumerate()
            .map(|(i, &e)| (GroupId(i as u32), e))
    }

    pub fn agents(&self) -> impl ExactSizeIterator<Item = AgentId> {
        (0..self.opinions.len() as u32).map(AgentId)
    }

    /// Groups incident to `a`, one entry per group (parallel groups repeat the peer).
    pub fn incident_groups(&self, a: AgentId) -> &[GroupId] {
        &self.incidence[a.index()]
    }

    pub fn degree(&self, a: AgentId) -> usize {
        self.incidence[a.index()].len()
    }

    /// The endpoint of `g` other than `a`.
    pub fn other_endpoint(&self, g: GroupId, a: AgentId) -> Option<AgentId> {
        let [x, y] = self.endpoints[g.index()];
        if x == a {
            Some(y)
        } else if y == a {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_discordant(&self, g: GroupId) -> bool {
        let [a, b] = self.endpoints[g.index()];
        self.opinion(a) != self.opinion(b)
    }

    /// Groups whose endpoints disagree, in index order (not sorted).
    pub fn discordant_groups(&self) -> &[GroupId] {
        &self.discordant
    }

    /// Agents currently holding `o`, in index order (not sorted).
    pub fn agents_with(&self, o: Opinion) -> &[AgentId] {
        &self.by_opinion[o.index()]
    }

    pub fn contains_agent(&self, a: AgentId) -> bool {
        a.index() < self.opinions.len()
    }

    pub fn contains_group(&self, g: GroupId) -> bool {
        g.index() < self.endpoints.len()
    }

    pub fn set_opinion(&mut self, a: AgentId, o: Opinion) -> Result<(), GraphError> {
        if !self.contains_agent(a) {
            return Err(GraphError::UnknownAgent(a));
        }
        let old = self.opinions[a.index()];
        if old == o {
            return Ok(());
        }
        for i in 0..self.incidence[a.index()].len() {
            let g = self.incidence[a.index()][i];
            self.remove_class(g);
        }

        // move a between the per-opinion lists
        let pos = self.opinion_pos[a.index()] as usize;
        let list = &mut self.by_opinion[old.index()];
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            self.opinion_pos[moved.index()] = pos as u32;
        }
        self.opinion_pos[a.index()] = self.by_opinion[o.index()].len() as u32;
        self.by_opinion[o.index()].push(a);
        *self.counts.agent_slot(old) -= 1;
        *self.counts.agent_slot(o) += 1;
        self.opinions[a.index()] = o;

        for i in 0..self.incidence[a.index()].len() {
            let g = self.incidence[a.index()][i];
            self.add_class(g);
        }
        Ok(())
    }

    /// Redirects group `g` so that it joins `keep` and `new_peer`.
    ///
    /// `new_peer` may already share a group with `keep`; a parallel group
    /// results. Choosing the current other endpoint is an identity edit.
    pub fn rewire_group(&mut self, g: GroupId, keep: AgentId, new_peer: AgentId) -> Result<(), GraphError> {
        if !self.contains_group(g) {
            return Err(GraphError::UnknownGroup(g));
        }
        if !self.contains_agent(new_peer) {
            return Err(GraphError::UnknownAgent(new_peer));
        }
        let [x, y] = self.endpoints[g.index()];
        let k = if x == keep {
            1
        } else if y == keep {
            0
        } else {
            return Err(GraphError::NotAnEndpoint { group: g, agent: keep });
        };
        if new_peer == keep {
            return Err(GraphError::SelfRewire { group: g, agent: keep });
        }
        if self.endpoints[g.index()][k] == new_peer {
            return Ok(());
        }
        self.remove_class(g);
        self.detach(g, k);
        self.endpoints[g.index()][k] = new_peer;
        self.attach(g, k);
        self.add_class(g);
        Ok(())
    }

    /// Pattern counts computed from scratch, ignoring the cache.
    pub fn recount(&self) -> PatternCounts {
        let mut c = PatternCounts::default();
        for &o in &self.opinions {
            *c.agent_slot(o) += 1;
        }
        for &[a, b] in &self.endpoints {
            *c.group_slot(self.opinions[a.index()], self.opinions[b.index()]) += 1;
        }
        c
    }

    /// Full structural audit of every cached index. Intended for tests.
    pub fn check_consistency(&self) -> Result<(), String> {
        if self.recount() != self.counts {
            return Err(format!("cached {:?} != recount {:?}", self.counts, self.recount()));
        }
        let degree_sum: usize = self.incidence.iter().map(Vec::len).sum();
        if degree_sum != 2 * self.n_groups() {
            return Err(format!("degree sum {degree_sum} != 2 * {}", self.n_groups()));
        }
        for (gi, &[a, b]) in self.endpoints.iter().enumerate() {
            let g = GroupId(gi as u32);
            if a == b {
                return Err(format!("self-group {g:?}"));
            }
            for (k, end) in [a, b].into_iter().enumerate() {
                let slot = self.slots[gi][k] as usize;
                if self.incidence[end.index()].get(slot) != Some(&g) {
                    return Err(format!("incidence slot mismatch for {g:?} at {end:?}"));
                }
            }
            let listed = self.discordant_pos[gi] != ABSENT;
            if listed != self.is_discordant(g) {
                return Err(format!("discordant index wrong for {g:?}"));
            }
            if listed && self.discordant[self.discordant_pos[gi] as usize] != g {
                return Err(format!("discordant position wrong for {g:?}"));
            }
        }
        if self.discordant.len() != self.counts.n_01 {
            return Err("discordant index length != n_01".into());
        }
        for o in Opinion::BOTH {
            for (i, &a) in self.by_opinion[o.index()].iter().enumerate() {
                if self.opinion(a) != o || self.opinion_pos[a.index()] as usize != i {
                    return Err(format!("opinion index wrong for {a:?}"));
                }
            }
        }
        Ok(())
    }

    fn attach(&mut self, g: GroupId, k: usize) {
        let a = self.endpoints[g.index()][k];
        self.slots[g.index()][k] = self.incidence[a.index()].len() as u32;
        self.incidence[a.index()].push(g);
    }

    fn detach(&mut self, g: GroupId, k: usize) {
        let a = self.endpoints[g.index()][k];
        let pos = self.slots[g.index()][k] as usize;
        let list = &mut self.incidence[a.index()];
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            let mk = if self.endpoints[moved.index()][0] == a { 0 } else { 1 };
            self.slots[moved.index()][mk] = pos as u32;
        }
        self.slots[g.index()][k] = ABSENT;
    }

    fn add_class(&mut self, g: GroupId) {
        let [a, b] = self.endpoints[g.index()];
        let (oa, ob) = (self.opinion(a), self.opinion(b));
        *self.counts.group_slot(oa, ob) += 1;
        if oa != ob {
            self.discordant_pos[g.index()] = self.discordant.len() as u32;
            self.discordant.push(g);
        }
    }

    fn remove_class(&mut self, g: GroupId) {
        let [a, b] = self.endpoints[g.index()];
        let (oa, ob) = (self.opinion(a), self.opinion(b));
        *self.counts.group_slot(oa, ob) -= 1;
        if oa != ob {
            let pos = self.discordant_pos[g.index()] as usize;
            self.discordant.swap_remove(pos);
            if let Some(&moved) = self.discordant.get(pos) {
                self.discordant_pos[moved.index()] = pos as u32;
            }
            self.discordant_pos[g.index()] = ABSENT;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Opinion::{One, Zero};

    fn counts(n_one: usize, n_zero: usize, n_11: usize, n_01: usize, n_00: usize) -> PatternCounts {
        PatternCounts { n_one, n_zero, n_11, n_01, n_00 }
    }

    #[test]
    fn empty_graph() {
        let g = VoterGraph::new(vec![], &[]).unwrap();
        assert_eq!(g.counts(), PatternCounts::default());
        assert_eq!(g.recount(), PatternCounts::default());
        assert!(g.discordant_groups().is_empty());
    }

    #[test]
    fn minimal_discordant_edge() {
        let g = VoterGraph::new(vec![One, Zero], &[(0, 1)]).unwrap();
        assert_eq!(g.counts(), counts(1, 1, 0, 1, 0));
        assert_eq!(g.discordant_groups(), &[GroupId(0)]);
        assert_eq!(g.recount(), g.counts());
    }

    #[test]
    fn parallel_edges_counted_separately() {
        let g = VoterGraph::new(vec![One, One, Zero], &[(0, 1), (1, 2), (1, 2)]).unwrap();
        assert_eq!(g.counts(), counts(2, 1, 1, 2, 0));
        assert_eq!(g.n_groups(), 3);
        assert_eq!(g.degree(AgentId(1)), 3);
        assert_eq!(g.recount(), g.counts());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            VoterGraph::new(vec![One, Zero], &[(1, 1)]).unwrap_err(),
            GraphError::SelfGroup { edge: 0, agent: 1 }
        );
        assert!(matches!(
            VoterGraph::new(vec![One, Zero], &[(0, 2)]),
            Err(GraphError::AgentOutOfRange { agent: 2, .. })
        ));
    }

    #[test]
    fn set_opinion_updates_counts() {
        let mut g = VoterGraph::new(vec![One, Zero], &[(0, 1)]).unwrap();
        g.set_opinion(AgentId(0), Zero).unwrap();
        assert_eq!(g.counts().n_01, 0);
        assert_eq!(g.counts().n_00, 1);
        g.check_consistency().unwrap();

        let mut g = VoterGraph::new(vec![One, Zero, Zero], &[(0, 1), (0, 2)]).unwrap();
        g.set_opinion(AgentId(0), Zero).unwrap();
        assert_eq!((g.counts().n_01, g.counts().n_00), (0, 2));
        g.check_consistency().unwrap();
    }

    #[test]
    fn set_same_opinion_is_idempotent() {
        let mut g = VoterGraph::new(vec![One, Zero], &[(0, 1)]).unwrap();
        let before = g.counts();
        g.set_opinion(AgentId(0), One).unwrap();
        assert_eq!(g.counts(), before);
        assert_eq!(g.set_opinion(AgentId(7), One), Err(GraphError::UnknownAgent(AgentId(7))));
    }

    #[test]
    fn rewire_updates_counts() {
        let mut g = VoterGraph::new(vec![One, Zero, One], &[(0, 1)]).unwrap();
        g.rewire_group(GroupId(0), AgentId(0), AgentId(2)).unwrap();
        assert_eq!((g.counts().n_01, g.counts().n_11), (0, 1));
        assert_eq!(g.endpoints(GroupId(0)), [AgentId(0), AgentId(2)]);
        g.check_consistency().unwrap();
    }

    #[test]
    fn rewire_to_current_peer_is_identity() {
        let mut g = VoterGraph::new(vec![One, Zero], &[(0, 1)]).unwrap();
        let before = g.counts();
        g.rewire_group(GroupId(0), AgentId(0), AgentId(1)).unwrap();
        assert_eq!(g.counts(), before);
        assert_eq!(g.endpoints(GroupId(0)), [AgentId(0), AgentId(1)]);
    }

    #[test]
    fn rewire_creates_parallel_group() {
        let mut g = VoterGraph::new(vec![One, Zero, One], &[(0, 2), (0, 1)]).unwrap();
        g.rewire_group(GroupId(1), AgentId(0), AgentId(2)).unwrap();
        assert_eq!(g.n_groups(), 2);
        assert_eq!(g.endpoints(GroupId(0)), g.endpoints(GroupId(1)));
        assert_eq!(g.counts().n_11, 2);
        g.check_consistency().unwrap();
    }

    #[test]
    fn rewire_errors() {
        let mut g = VoterGraph::new(vec![One, Zero, One], &[(0, 1)]).unwrap();
        assert!(matches!(
            g.rewire_group(GroupId(0), AgentId(2), AgentId(1)),
            Err(GraphError::NotAnEndpoint { .. })
        ));
        assert!(matches!(
            g.rewire_group(GroupId(0), AgentId(0), AgentId(0)),
            Err(GraphError::SelfRewire { .. })
        ));
        assert!(matches!(
            g.rewire_group(GroupId(3), AgentId(0), AgentId(2)),
            Err(GraphError::UnknownGroup(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = VoterGraph::new(vec![One, One, Zero], &[(0, 1), (1, 2), (1, 2)]).unwrap();
        let s = g.to_json_string();
        assert_eq!(s, r#"{"opinions":[1,1,0],"edges":[[0,1],[1,2],[1,2]]}"#);
        let back = VoterGraph::from_json_str(&s).unwrap();
        assert_eq!(back.to_json(), g.to_json());
        assert_eq!(back.counts(), g.counts());
        assert!(matches!(
            VoterGraph::from_json_str(r#"{"opinions":[2],"edges":[]}"#),
            Err(GraphError::Json(_))
        ));
    }
}
