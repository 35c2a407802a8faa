//! Root vectors of minimum-cost k-arborescences: by enumeration, by
//! optimization, and the exchange property they satisfy.
//!
//! cargo run --example root_vectors

use karb::instance::Instance;
use karb::oracle::OracleBounds;
use karb::tightmat::{exchange_property_holds, root_vectors_by_optimization, root_vectors_of_optima};

const GRAPH: &str = "
n 3
k 2
a 0 1 1
a 1 0 1
a 1 2 1
a 2 1 1
a 0 2 1
a 2 0 1
";

fn main() -> karb::Result<()> {
    let inst = Instance::parse(GRAPH)?;
    let c = inst.costs_or_zero();
    let listed = root_vectors_of_optima(&inst.digraph, &c, inst.k, OracleBounds::default())?;
    for q in &listed {
        println!("{:?}", q.values().collect::<Vec<_>>());
    }
    assert_eq!(listed, root_vectors_by_optimization(&inst.digraph, &c, inst.k)?);
    println!("exchange property: {}", exchange_property_holds(&listed));
    Ok(())
}
