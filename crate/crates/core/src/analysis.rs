//! Final-state analysis: components, homogeneity, fragmentation, minority share.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::engine::{StopReason, Trajectory};
use crate::graph::{Opinion, VoterGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpinionProfile {
    AllOne,
    AllZero,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub size: usize,
    pub opinion_profile: OpinionProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub n_components: usize,
    /// Ordered by the smallest agent index in each component.
    pub components: Vec<Component>,
    /// At least two components, every one opinion-homogeneous, and both
    /// opinions still present. A disconnected consensus is not fragmentation.
    pub fragmented: bool,
    pub minority_fraction: f64,
}

pub fn minority_fraction(g: &VoterGraph) -> f64 {
    let c = g.counts();
    if c.n_agents() == 0 {
        return 0.0;
    }
    c.n_one.min(c.n_zero) as f64 / c.n_agents() as f64
}

/// Connected components over group endpoints. Isolated agents form
/// homogeneous singleton components.
pub fn components(g: &VoterGraph) -> ComponentReport {
    let n = g.n_agents();
    let mut uf = UnionFind::<usize>::new(n);
    for (_, [a, b]) in g.groups() {
        uf.union(a.index(), b.index());
    }
    let labels = uf.into_labeling();

    // component slot per root, in order of first appearance
    let mut slot_of_root = vec![usize::MAX; n];
    let mut sizes: Vec<usize> = Vec::new();
    let mut seen: Vec<[bool; 2]> = Vec::new();
    for a in g.agents() {
        let root = labels[a.index()];
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = sizes.len();
            sizes.push(0);
            seen.push([false; 2]);
        }
        let s = slot_of_root[root];
        sizes[s] += 1;
        seen[s][g.opinion(a).index()] = true;
    }
    let components: Vec<Component> = sizes
        .into_iter()
        .zip(seen)
        .map(|(size, seen)| Component {
            size,
            opinion_profile: match seen {
                [true, true] => OpinionProfile::Mixed,
                [false, true] => OpinionProfile::AllOne,
                _ => OpinionProfile::AllZero,
            },
        })
        .collect();
    let homogeneous = components.iter().all(|c| c.opinion_profile != OpinionProfile::Mixed);
    let c = g.counts();
    ComponentReport {
        n_components: components.len(),
        fragmented: components.len() >= 2 && homogeneous && c.n_one > 0 && c.n_zero > 0,
        components,
        minority_fraction: minority_fraction(g),
    }
}

/// Labels a run within a sweep; not recoverable from the trajectory itself.
#[derive(Clone, Debug, PartialEq)]
pub struct RunContext {
    pub model: String,
    pub alpha: f64,
    pub u: f64,
    pub run: u64,
    pub seed: u64,
    pub wallclock_ms: u64,
}

/// One CSV row of a sweep; field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub model: String,
    pub alpha: f64,
    pub u: f64,
    pub n_agents: usize,
    pub n_edges: usize,
    pub run: u64,
    pub seed: u64,
    pub steps: u64,
    pub effective_events: u64,
    pub sim_time: f64,
    pub absorb_reason: StopReason,
    pub minority_frac_final: f64,
    pub n_components: usize,
    pub fragmented: bool,
    pub wallclock_ms: u64,
}

pub fn summarize(t: &Trajectory, g_final: &VoterGraph, ctx: &RunContext) -> SweepRecord {
    let report = components(g_final);
    let s = &t.summary;
    SweepRecord {
        model: ctx.model.clone(),
        alpha: ctx.alpha,
        u: ctx.u,
        n_agents: g_final.n_agents(),
        n_edges: g_final.n_groups(),
        run: ctx.run,
        seed: ctx.seed,
        steps: s.steps,
        effective_events: s.effective_events,
        sim_time: s.time,
        absorb_reason: s.reason,
        minority_frac_final: report.minority_fraction,
        n_components: report.n_components,
        fragmented: report.fragmented,
        wallclock_ms: ctx.wallclock_ms,
    }
}

impl ComponentReport {
    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.size).collect()
    }

    pub fn count_with(&self, o: Opinion) -> usize {
        let want = match o {
            Opinion::One => OpinionProfile::AllOne,
            Opinion::Zero => OpinionProfile::AllZero,
        };
        self.components.iter().filter(|c| c.opinion_profile == want).count()
    }
}
