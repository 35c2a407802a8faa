//! Times the three pipelines and the enumeration oracle on a seeded random
//! suite and reports agreement.
//!
//! cargo run --release --example random_suite [count] [seed]

use karb::blocking::{minimum_transversal, minimum_transversal_rooted, BlockingOptions};
use karb::generate::{suite, SuiteConfig};
use karb::oracle::{brute_min_transversal, brute_min_transversal_rooted, OracleBounds};
use std::time::{Duration, Instant};

fn timed<T>(total: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *total += start.elapsed();
    out
}

fn main() -> karb::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let count = args.next().flatten().unwrap_or(200) as usize;
    let seed = args.next().flatten().unwrap_or(1);
    let bounds = OracleBounds { max_arb_arcs: 14, max_arcs: 18 };
    let opts = BlockingOptions::default();
    let (mut fast, mut brute) = (Duration::ZERO, Duration::ZERO);
    let mut disagreements = 0;
    for inst in suite(seed, count, &SuiteConfig::default()) {
        let (d, c, k) = (&inst.digraph, inst.costs_or_zero(), inst.k);
        let a = timed(&mut fast, || minimum_transversal(d, &c, k, &opts))?.transversal.size;
        let b = timed(&mut brute, || brute_min_transversal(d, &c, k, bounds))?.size;
        let r = timed(&mut fast, || minimum_transversal_rooted(d, &c, 0, k, &opts))?.transversal.size;
        let s = timed(&mut brute, || brute_min_transversal_rooted(d, &c, 0, k, bounds))?.size;
        disagreements += usize::from(a != b) + usize::from(r != s);
    }
    println!("{count} instances: pipelines {fast:.2?}, oracle {brute:.2?}, {disagreements} disagreements");
    Ok(())
}
