//! Motif counts from the cached pattern counts against brute-force
//! enumeration, on a small multigraph with parallel groups.
//!
//!     cargo run --example counting_identity

use adaptive_voter::graph::Opinion::{One, Zero};
use adaptive_voter::patterns::{enumerate_matches, verify_counting_identity};
use adaptive_voter::prelude::*;

fn main() {
    let g = VoterGraph::new(
        vec![One, Zero, One, Zero, Zero],
        &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
    )
    .unwrap();
    println!("{:?}", g.counts());

    let motifs = [
        Motif::Edge(One, Zero),
        Motif::EdgePlusVertex { edge: Motif::DISCORDANT, extra: One },
        Motif::EdgePlusVertex { edge: Motif::DISCORDANT, extra: Zero },
        Motif::EdgePlusTwoVertices { edge: Motif::DISCORDANT },
    ];
    for m in motifs {
        println!("{:<60} closed form {:>3}  enumerated {:>3}", format!("{m:?}"), count_motif(&g, m), enumerate_matches(&g, m).len());
    }
    println!("identity holds: {}", verify_counting_identity(&g));
}
