//! Forbidden arcs, mandatory arcs and the laminar family that together
//! describe every minimum-cost rooted k-arborescence, with the dual that
//! certifies them.
//!
//! cargo run --example optimality_structure

use karb::graph::format_rational;
use karb::instance::Instance;
use karb::optstruct::optimality_structure;
use karb::oracle::{enumerate_rooted_k_arbs, OracleBounds};

const GRAPH: &str = "
n 4
k 1
a 0 1 2
a 0 2 2
a 1 2 0
a 2 1 0
a 1 3 1
a 2 3 1
a 0 3 5
";

fn main() -> karb::Result<()> {
    let inst = Instance::parse(GRAPH)?;
    let c = inst.costs_or_zero();
    let st = optimality_structure(&inst.digraph, &c, 0, inst.k)?;
    println!("optimum {}", format_rational(&st.opt_cost));
    println!("forbidden {:?}", st.forbidden);
    println!("mandatory {:?}", st.mandatory);
    for (set, y) in &st.dual.y {
        println!("cut {set:?} weight {}", format_rational(y));
    }
    let members: Vec<_> = st.laminar.members().iter().filter(|w| w.len() > 1).collect();
    println!("laminar members beyond singletons {members:?}");

    // compare with the optima found by enumeration
    let all = enumerate_rooted_k_arbs(&inst.digraph, 0, inst.k, OracleBounds::default())?;
    for f in all {
        let cost = f.iter().fold(karb::graph::Rational::default(), |acc, id| acc + &c[id]);
        if cost == st.opt_cost {
            println!("optimum {f:?}");
        }
    }
    Ok(())
}
