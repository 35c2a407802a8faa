//! Rank of arc sets entering a laminar member in the matroid of in-stars of
//! tight arborescences, computed directly and by recursion over children.
//!
//! cargo run --example tight_matroid_rank

use karb::graph::{LaminarFamily, NodeSet};
use karb::instance::Instance;
use karb::tightmat::TightMatroidContext;

const GRAPH: &str = "
n 4
k 2
a 0 1
a 0 2
a 1 2
a 2 1
a 2 3
a 3 2
a 1 3
a 3 1
L 1 2
L 1 2 3
";

fn main() -> karb::Result<()> {
    let inst = Instance::parse(GRAPH)?;
    let lam = LaminarFamily::new(inst.digraph.node_set(), inst.laminar.iter().cloned())?;
    let ctx = TightMatroidContext::with_alpha(&inst.digraph, &lam, inst.k, inst.k)?;
    let w: NodeSet = [1, 2, 3].into();
    let star = ctx.in_star(&w);
    println!("arcs entering {w:?}: {star:?}");
    for size in 1..=3 {
        for e in star.windows(size).take(3) {
            println!("rank {:?} = {} (recursive {})", e, ctx.rank(&w, e)?, ctx.rank_recursive(&w, e)?);
        }
    }
    Ok(())
}
