//! Minimum number of arcs whose deletion raises the cost of a cheapest
//! k-arborescence, for each of the three problem variants.
//!
//! cargo run --example block_optimal [instance-file]

use karb::blocking::{minimum_transversal, minimum_transversal_l_tight, minimum_transversal_rooted, BlockingOptions};
use karb::graph::{format_rational, NodeSet};
use karb::instance::Instance;
use std::path::PathBuf;

fn main() -> karb::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/pair_formula.txt"));
    let inst = Instance::from_file(&path)?;
    let (d, c, k) = (&inst.digraph, inst.costs_or_zero(), inst.k);
    let opts = BlockingOptions::default();
    let root = inst.root.unwrap_or(0);

    let free = minimum_transversal(d, &c, k, &opts)?;
    let cost = free.opt_cost.as_ref().map_or("-".into(), format_rational);
    println!(
        "free roots:   optimum {cost}, delete {:?} ({})",
        free.transversal.arcs,
        free.transversal.provenance.as_str()
    );

    let rooted = minimum_transversal_rooted(d, &c, root, k, &opts)?;
    println!("rooted at {root}: delete {:?} ({})", rooted.transversal.arcs, rooted.transversal.provenance.as_str());

    let universe: NodeSet = d.nodes().iter().copied().filter(|&v| v != root).collect();
    let tight = minimum_transversal_l_tight(d, root, k, &inst.laminar_over(universe)?, &opts)?;
    println!("laminar-tight: delete {:?} ({})", tight.arcs, tight.provenance.as_str());
    if let Some(w) = &tight.witness {
        println!("  member {:?} split into {:?} and {:?}, value {}", w.w, w.z1, w.z2, w.value);
    }
    Ok(())
}
