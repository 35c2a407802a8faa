//! Cheapest assignment of workers to jobs as a minimum-cost common
//! independent set of two partition matroids.
//!
//! cargo run --example matroid_intersection

use karb::matroid::{matroid_intersection_min_cost, partition_oracle};

fn main() -> karb::Result<()> {
    // element i is the pair (worker, job) = EDGES[i]
    const EDGES: [(usize, usize, i64); 7] =
        [(0, 0, 4), (0, 1, 1), (1, 0, 2), (1, 2, 5), (2, 1, 3), (2, 2, 2), (2, 0, 6)];
    let block = |side: fn(&(usize, usize, i64)) -> usize| {
        (0..3).map(|g| (0..EDGES.len()).filter(|&i| side(&EDGES[i]) == g).collect()).collect::<Vec<Vec<_>>>()
    };
    let workers = partition_oracle(block(|e| e.0), vec![1; 3])?;
    let jobs = partition_oracle(block(|e| e.1), vec![1; 3])?;
    for size in 1..=3 {
        if let Some(best) = matroid_intersection_min_cost(&workers, &jobs, &|i| EDGES[i].2, size)? {
            let pairs: Vec<_> = best.elements.iter().map(|&i| (EDGES[i].0, EDGES[i].1)).collect();
            println!("{size} assignments, cost {}: {pairs:?}", best.cost);
        }
    }
    Ok(())
}
