//! Round trip through the JSON graph format and a single traced run.
//!
//!     cargo run --example graph_json -- '{"opinions":[1,1,0],"edges":[[0,2]]}'

use adaptive_voter::prelude::*;

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| r#"{"opinions":[1,1,0,0,1],"edges":[[0,2],[1,3],[0,1],[4,3],[4,2]]}"#.into());
    let mut g = VoterGraph::from_json_str(&text).unwrap();
    println!("in:  {}", g.to_json_string());

    let mut cfg = EngineConfig::new(Semantics::Dtmc { alpha: 0.6, count_noop_steps: true });
    cfg.sample_stride = 1;
    let t = run_seeded(&mut g, &cfg, 5).unwrap();
    for e in &t.events {
        let ev = &e.event;
        match ev.new_peer {
            Some(p) => println!("round {:>3}: {} agent {} drops {} for {}", e.time, ev.rule, ev.actor.0, ev.peer.0, p.0),
            None => println!("round {:>3}: {} agent {} copies {}", e.time, ev.rule, ev.actor.0, ev.peer.0),
        }
    }
    println!("out: {}", g.to_json_string());
    println!("{}", serde_json::to_string(&components(&g)).unwrap());
}
