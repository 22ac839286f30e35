mod common;

use adaptive_voter::graph::{AgentId, GroupId, Opinion, VoterGraph};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Edit {
    Set(usize, bool),
    Rewire { group: usize, keep_first: bool, peer: usize },
}

fn edit() -> impl Strategy<Value = Edit> {
    prop_oneof![
        (any::<usize>(), any::<bool>()).prop_map(|(a, o)| Edit::Set(a, o)),
        (any::<usize>(), any::<bool>(), any::<usize>()).prop_map(|(group, keep_first, peer)| Edit::Rewire {
            group,
            keep_first,
            peer
        }),
    ]
}

fn start() -> impl Strategy<Value = (Vec<bool>, Vec<(usize, usize)>)> {
    (2usize..15).prop_flat_map(|n| {
        let pair = (0..n, 0..n - 1).prop_map(|(a, b)| (a, if b >= a { b + 1 } else { b }));
        (proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(pair, 1..30))
    })
}

fn opinion(b: bool) -> Opinion {
    if b {
        Opinion::One
    } else {
        Opinion::Zero
    }
}

fn check(g: &VoterGraph, n: usize, m: usize) {
    g.check_consistency().unwrap();
    assert_eq!(g.counts(), g.recount());
    assert_eq!(g.n_agents(), n);
    assert_eq!(g.n_groups(), m);
    let degree_sum: usize = g.agents().map(|a| g.degree(a)).sum();
    assert_eq!(degree_sum, 2 * m);
    let disc: Vec<GroupId> = g.groups().filter(|(id, _)| g.is_discordant(*id)).map(|(id, _)| id).collect();
    let mut index = g.discordant_groups().to_vec();
    index.sort();
    assert_eq!(index, disc);
    for o in Opinion::BOTH {
        assert_eq!(g.agents_with(o).len(), g.counts().agents_with(o));
        assert!(g.agents_with(o).iter().all(|&a| g.opinion(a) == o));
    }
    for (id, [a, b]) in g.groups() {
        assert_ne!(a, b);
        assert!(g.incident_groups(a).contains(&id));
        assert!(g.incident_groups(b).contains(&id));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incremental_counts_survive_random_edits(
        (ops, edges) in start(),
        edits in proptest::collection::vec(edit(), 150..=160),
    ) {
        let n = ops.len();
        let m = edges.len();
        let mut g = VoterGraph::new(ops.into_iter().map(opinion).collect(), &edges).unwrap();
        check(&g, n, m);
        for e in edits {
            match e {
                Edit::Set(a, o) => g.set_opinion(AgentId((a % n) as u32), opinion(o)).unwrap(),
                Edit::Rewire { group, keep_first, peer } => {
                    let id = GroupId((group % m) as u32);
                    let [a, b] = g.endpoints(id);
                    let keep = if keep_first { a } else { b };
                    let peer = AgentId((peer % n) as u32);
                    if peer == keep {
                        prop_assert!(g.rewire_group(id, keep, peer).is_err());
                        continue;
                    }
                    g.rewire_group(id, keep, peer).unwrap();
                    prop_assert!(g.endpoints(id).contains(&keep));
                    prop_assert_eq!(g.other_endpoint(id, keep), Some(peer));
                }
            }
            check(&g, n, m);
        }
    }

    #[test]
    fn json_round_trip(( ops, edges) in start()) {
        let g = VoterGraph::new(ops.into_iter().map(opinion).collect(), &edges).unwrap();
        let back = VoterGraph::from_json_str(&g.to_json_string()).unwrap();
        prop_assert_eq!(back.to_json(), g.to_json());
        prop_assert_eq!(back.counts(), g.counts());
    }
}

#[test]
fn ten_thousand_edits_on_one_graph() {
    use rand::Rng;
    let mut rng = adaptive_voter::rng::RandomStream::from_seed(17);
    let mut g = common::random_multigraph(12, 25, &mut rng);
    for _ in 0..10_000 {
        if rng.random_bool(0.5) {
            let a = AgentId(rng.random_range(0..12));
            g.set_opinion(a, g.opinion(a).flipped()).unwrap();
        } else {
            let id = GroupId(rng.random_range(0..25));
            let keep = g.endpoints(id)[rng.random_range(0..2)];
            let peer = AgentId(rng.random_range(0..12));
            if peer != keep {
                g.rewire_group(id, keep, peer).unwrap();
            }
        }
        assert_eq!(g.counts(), g.recount());
    }
    check(&g, 12, 25);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(VoterGraph::new(vec![Opinion::One], &[(0, 0)]).is_err());
    assert!(VoterGraph::new(vec![Opinion::One, Opinion::Zero], &[(0, 2)]).is_err());
    assert!(VoterGraph::from_json_str(r#"{"opinions":[1,2],"edges":[]}"#).is_err());
    assert!(VoterGraph::from_json_str(r#"{"opinions":[1,0],"edges":[[0,1,1]]}"#).is_err());
    assert!(VoterGraph::from_json_str("not json").is_err());
}
