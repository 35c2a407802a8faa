//! Seeded random instances for tests, the self-test and benchmarks.

use crate::graph::{is_laminar, parse_rational, Costs, Digraph, NodeId, NodeSet};
use crate::instance::Instance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const COSTS: [&str; 5] = ["0", "1/2", "1", "2", "3"];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub max_arcs: usize,
    pub max_k: usize,
    /// Chance of skipping the planted k-arborescence.
    pub sparse_chance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { min_nodes: 2, max_nodes: 6, max_arcs: 14, max_k: 3, sparse_chance: 0.1 }
    }
}

/// One instance: a planted k-arborescence (usually) plus random extra arcs,
/// shuffled ids, costs from [`COSTS`], root 0 and a random laminar family
/// avoiding the root.
pub fn random_instance(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Instance {
    let (n, k) = loop {
        let n = rng.gen_range(cfg.min_nodes..=cfg.max_nodes);
        let k = rng.gen_range(1..=cfg.max_k);
        if k * (n - 1) <= cfg.max_arcs {
            break (n, k);
        }
    };
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    if !rng.gen_bool(cfg.sparse_chance) {
        let root = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..n) };
        for _ in 0..k {
            let mut order: Vec<NodeId> = (0..n).filter(|&v| v != root).collect();
            order.shuffle(rng);
            let mut placed = vec![root];
            for v in order {
                pairs.push((*placed.choose(rng).expect("nonempty"), v));
                placed.push(v);
            }
        }
    }
    let target = rng.gen_range(pairs.len()..=cfg.max_arcs);
    while pairs.len() < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            pairs.push((u, v));
        }
    }
    pairs.shuffle(rng);
    let mut digraph = Digraph::with_nodes(n);
    let mut costs = Costs::new();
    for (u, v) in pairs {
        let id = digraph.add_arc(u, v).expect("valid arc");
        costs.insert(id, parse_rational(COSTS.choose(rng).expect("nonempty")).expect("valid"));
    }
    let laminar = random_laminar(rng, &(1..n).collect::<Vec<_>>(), 3);
    Instance { digraph, costs: Some(costs), k, root: Some(0), laminar, expectations: Vec::new() }
}

/// Up to `max_members` random laminar sets over `nodes`, each with at least
/// two nodes.
pub fn random_laminar(rng: &mut ChaCha8Rng, nodes: &[NodeId], max_members: usize) -> Vec<NodeSet> {
    let mut members: Vec<NodeSet> = Vec::new();
    if nodes.len() < 2 {
        return members;
    }
    for _ in 0..max_members * 3 {
        if members.len() == max_members {
            break;
        }
        let size = rng.gen_range(2..=nodes.len());
        let set: NodeSet = nodes.choose_multiple(rng, size).copied().collect();
        if members.contains(&set) {
            continue;
        }
        members.push(set);
        if !is_laminar(&members) {
            members.pop();
        }
    }
    members.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    members
}

/// `count` instances from one seed.
pub fn suite(seed: u64, count: usize, cfg: &SuiteConfig) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_are_reproducible_and_in_range() {
        let cfg = SuiteConfig::default();
        let a = suite(7, 60, &cfg);
        let b = suite(7, 60, &cfg);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.format(), y.format());
            let n = x.digraph.node_count();
            assert!((2..=6).contains(&n));
            assert!(x.digraph.arc_count() <= 14);
            assert!((1..=3).contains(&x.k));
            assert!(is_laminar(&x.laminar));
            assert!(x.laminar.iter().all(|w| !w.contains(&0)));
            assert!(Instance::parse(&x.format()).is_ok());
        }
        assert_ne!(suite(8, 5, &cfg)[0].format(), a[0].format());
    }
}
