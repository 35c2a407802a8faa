//! Cheapest pair of arc-disjoint spanning arborescences from node 0, split
//! into the two trees.
//!
//! cargo run --example arborescence_packing

use karb::arb::{decompose, min_cost_rooted_k_arb};
use karb::graph::format_rational;
use karb::instance::Instance;

const GRAPH: &str = "
n 4
k 2
a 0 1 1
a 0 2 1
a 0 3 4
a 1 2 2
a 2 1 2
a 2 3 1
a 3 1 1
a 1 3 3
";

fn main() -> karb::Result<()> {
    let inst = Instance::parse(GRAPH)?;
    let c = inst.costs_or_zero();
    let Some(best) = min_cost_rooted_k_arb(&inst.digraph, &c, 0, inst.k)? else {
        println!("no rooted {}-arborescence", inst.k);
        return Ok(());
    };
    println!("cost {}", format_rational(&best.cost));
    for (i, tree) in decompose(&inst.digraph, &best.arborescence.arcs, 0, inst.k)?.iter().enumerate() {
        let arcs: Vec<String> = inst.digraph.resolve(tree)?.iter().map(|a| format!("{}->{}", a.tail, a.head)).collect();
        println!("tree {i}: {}", arcs.join(" "));
    }
    Ok(())
}
