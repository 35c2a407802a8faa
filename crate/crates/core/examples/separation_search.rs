//! Random search for a digraph that has rooted k-arborescences and meets
//! the counting conditions on every laminar member, but has no tight one.
//!
//! cargo run --release --example separation_search [k] [nodes] [seeds]

use karb::oracle::{find_separation_witness, SeparationSpace};

fn arg(i: usize, default: u64) -> u64 {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> karb::Result<()> {
    let k = arg(1, 2) as usize;
    let nodes = arg(2, 4) as usize;
    let seeds = arg(3, 20_000);
    let space = SeparationSpace { nodes, k, seeds: 0..seeds };
    match find_separation_witness(&space)? {
        Some(w) => {
            println!("# seed {}, {:?}", w.seed, w.check);
            print!("{}", w.instance.format());
        }
        None => println!("nothing in {seeds} samples"),
    }
    Ok(())
}
