//! Minimum-cost k-arborescences as common bases of the k-fold graphic matroid
//! and the in-degree partition matroid.

use crate::error::{internal, invalid, Result};
use crate::flow::arc_connectivity;
use crate::graph::{
    build_cost_extension, is_rooted_k_arborescence, root_vector, validate_costs, Arc, ArcId, ArcSet, Costs, Digraph,
    KArborescence, LaminarFamily, NodeId, Rational,
};
use crate::matroid::{
    direct_sum, k_shorten, matroid_intersection_max, matroid_intersection_min_cost, partition_oracle, KFoldGraphic,
    Matroid, Weight,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug)]
pub struct MinCostArb {
    pub arborescence: KArborescence,
    pub cost: Rational,
}

/// Drops arcs entering `s` and keeps, per (tail, head) class, the k cheapest
/// arcs by (cost, id). Any rooted k-arborescence uses at most k arcs of a
/// class, so the optimum is unchanged.
fn candidate_arcs<T: Ord + Clone>(d: &Digraph, s: NodeId, k: usize, cost: &dyn Fn(ArcId) -> T) -> Vec<Arc> {
    let mut classes: BTreeMap<(NodeId, NodeId), Vec<(T, ArcId)>> = BTreeMap::new();
    for a in d.arcs().iter().filter(|a| a.head != s) {
        classes.entry((a.tail, a.head)).or_default().push((cost(a.id), a.id));
    }
    let mut keep: Vec<ArcId> = Vec::new();
    for members in classes.values_mut() {
        members.sort();
        keep.extend(members.iter().take(k).map(|(_, id)| *id));
    }
    keep.sort_unstable();
    keep.into_iter().map(|id| d.arc(id).expect("arc exists")).collect()
}

fn graphic_of(arcs: &[Arc], k: usize) -> KFoldGraphic {
    KFoldGraphic::new(arcs.iter().map(|a| (a.id, (a.tail, a.head))).collect(), k)
}

fn indegree_matroid(d: &Digraph, arcs: &[Arc], s: NodeId, k: usize) -> Result<impl Matroid> {
    let mut blocks: BTreeMap<NodeId, Vec<ArcId>> = d.nodes().iter().map(|&v| (v, Vec::new())).collect();
    for a in arcs {
        blocks.get_mut(&a.head).expect("head is a node").push(a.id);
    }
    let caps = blocks.keys().map(|&v| if v == s { 0 } else { k }).collect();
    partition_oracle(blocks.into_values().collect(), caps)
}

/// Core solver over any exact weight type. Returns the chosen arcs and their
/// total weight.
pub(crate) fn min_cost_rooted_generic<T: Weight + Send + Sync>(
    d: &Digraph,
    s: NodeId,
    k: usize,
    cost: &dyn Fn(ArcId) -> T,
) -> Result<Option<(ArcSet, T)>> {
    d.require_node(s)?;
    if k == 0 {
        return invalid("k must be positive");
    }
    let arcs = candidate_arcs(d, s, k, cost);
    let target = k * (d.node_count() - 1);
    if arcs.len() < target {
        return Ok(None);
    }
    let dense: Vec<(usize, usize)> =
        arcs.iter().map(|a| (d.index_of(a.tail).unwrap(), d.index_of(a.head).unwrap())).collect();
    let si = d.index_of(s).unwrap();
    if (0..d.node_count()).any(|t| t != si && arc_connectivity(d.node_count(), &dense, si, t, k) < k) {
        return Ok(None);
    }
    let m1 = graphic_of(&arcs, k);
    let m2 = indegree_matroid(d, &arcs, s, k)?;
    let Some(best) = matroid_intersection_min_cost(&m1, &m2, cost, target)? else {
        return internal("connectivity holds but no common basis was found");
    };
    Ok(Some((best.elements.into_iter().collect(), best.cost)))
}

/// Rational costs scaled to a common denominator, as machine integers when
/// every partial sum fits.
fn scaled_costs(d: &Digraph, c: &Costs) -> Option<(HashMap<ArcId, i64>, BigInt)> {
    let lcm = d.arcs().iter().fold(BigInt::one(), |acc, a| acc.lcm(c[&a.id].denom()));
    let mut out = HashMap::new();
    let mut total = BigInt::zero();
    for a in d.arcs() {
        let x = c[&a.id].numer() * (&lcm / c[&a.id].denom());
        total += &x;
        out.insert(a.id, x.to_i64()?);
    }
    (total < BigInt::from(i64::MAX / 4)).then_some((out, lcm))
}

/// Minimum-cost `s`-rooted k-arborescence, `None` when none exists.
pub fn min_cost_rooted_k_arb(d: &Digraph, c: &Costs, s: NodeId, k: usize) -> Result<Option<MinCostArb>> {
    validate_costs(d, c)?;
    let solved = match scaled_costs(d, c) {
        Some((ints, lcm)) => min_cost_rooted_generic(d, s, k, &|id| ints[&id])?
            .map(|(arcs, w)| (arcs, Rational::new(BigInt::from(w), lcm))),
        None => min_cost_rooted_generic(d, s, k, &|id| c[&id].clone())?,
    };
    let Some((arcs, cost)) = solved else { return Ok(None) };
    let root_vector = root_vector(d, &arcs, k)?;
    Ok(Some(MinCostArb { arborescence: KArborescence { arcs, root: Some(s), k, root_vector }, cost }))
}

/// Minimum-cost k-arborescence with free root vector, via the extension with
/// |A|+k parallel arcs of cost `sum(c) + 1` from a new root.
pub fn min_cost_k_arb(d: &Digraph, c: &Costs, k: usize) -> Result<Option<MinCostArb>> {
    validate_costs(d, c)?;
    if d.node_count() == 0 {
        return invalid("empty digraph");
    }
    let beta = c.values().fold(Rational::zero(), |acc, x| acc + x) + Rational::one();
    let ext = build_cost_extension(d, c, d.arc_count() + k, &beta)?;
    let costs = ext.costs.as_ref().expect("cost extension");
    let Some(rooted) = min_cost_rooted_k_arb(&ext.digraph, costs, ext.root, k)? else {
        return Ok(None);
    };
    let arcs: ArcSet = rooted.arborescence.arcs.iter().copied().filter(|id| !ext.extension_arcs.contains(id)).collect();
    let used_ext = rooted.arborescence.arcs.len() - arcs.len();
    // each extra root arc costs more than all original arcs together, so
    // more than k of them means the digraph has no k-arborescence
    if used_ext > k {
        return Ok(None);
    }
    if used_ext < k {
        return internal(format!("optimum used {used_ext} extension arcs instead of {k}"));
    }
    let cost = rooted.cost - beta * Rational::from_integer(BigInt::from(k));
    let root_vector = root_vector(d, &arcs, k)?;
    Ok(Some(MinCostArb { arborescence: KArborescence { arcs, root: None, k, root_vector }, cost }))
}

/// Whether an `s`-rooted k-arborescence enters every member of `laminar`
/// (sets avoiding `s`) exactly k times. Every rooted k-arborescence enters
/// each member at least k times, so this holds iff the minimum of
/// "members entered" summed over arcs equals k times the family size.
pub fn exists_l_tight(d: &Digraph, s: NodeId, k: usize, laminar: &LaminarFamily) -> Result<bool> {
    if laminar.members().iter().any(|w| w.contains(&s)) {
        return invalid("laminar members must avoid the root");
    }
    let counts: HashMap<ArcId, i64> = d.arcs().iter().map(|a| (a.id, laminar.entered_count(a) as i64)).collect();
    Ok(match min_cost_rooted_generic(d, s, k, &|id| counts[&id])? {
        None => false,
        Some((_, w)) => w == (k * laminar.len()) as i64,
    })
}

/// Per-node matroids on the in-stars, for matroid-restricted arborescences.
pub struct InStarMatroids {
    pub matroids: BTreeMap<NodeId, Box<dyn Matroid>>,
}

impl InStarMatroids {
    pub fn validate(&self, d: &Digraph) -> Result<()> {
        for &v in d.nodes() {
            let Some(m) = self.matroids.get(&v) else {
                return invalid(format!("no matroid for node {v}"));
            };
            let star: Vec<ArcId> = d.arcs().iter().filter(|a| a.head == v).map(|a| a.id).collect();
            if m.ground_set() != star.as_slice() {
                return invalid(format!("matroid at node {v} is not on its in-star"));
            }
        }
        Ok(())
    }

    /// Sum of per-node ranks of the arcs in `set`.
    pub fn rank_sum(&self, d: &Digraph, set: &[ArcId]) -> usize {
        let mut by_head: BTreeMap<NodeId, Vec<ArcId>> = BTreeMap::new();
        for &id in set {
            if let Some(a) = d.arc(id) {
                by_head.entry(a.head).or_default().push(id);
            }
        }
        by_head.iter().map(|(v, ids)| self.matroids[v].rank(ids)).sum()
    }
}

/// Whether `d` has a k-arborescence whose in-star at each `v` is independent
/// in the given matroid.
pub fn exists_matroid_restricted_k_arb(d: &Digraph, family: InStarMatroids, k: usize) -> Result<bool> {
    family.validate(d)?;
    let m1 = graphic_of(d.arcs(), k);
    let parts: Vec<Box<dyn Matroid>> =
        family.matroids.into_values().map(|m| Box::new(k_shorten(m, k)) as Box<dyn Matroid>).collect();
    let m2 = direct_sum(parts)?;
    Ok(matroid_intersection_max(&m1, &m2)?.len() == k * (d.node_count() - 1))
}

/// Splits a rooted k-arborescence into k spanning arborescences.
///
/// Grows one arborescence at a time and accepts an arc only if the leftover
/// arcs keep `remaining - 1` arc-disjoint paths from `s` to every node.
pub fn decompose(d: &Digraph, f: &ArcSet, s: NodeId, k: usize) -> Result<Vec<ArcSet>> {
    if !is_rooted_k_arborescence(d, f, s, k)? {
        return invalid("arc set is not a rooted k-arborescence");
    }
    let n = d.node_count();
    let si = d.index_of(s).expect("checked");
    let mut left: Vec<Arc> = d.resolve(f)?;
    let mut out = Vec::new();
    for remaining in (1..=k).rev() {
        let mut reached = vec![false; n];
        reached[si] = true;
        let mut tree = ArcSet::new();
        while tree.len() < n - 1 {
            let pick = left.iter().position(|a| {
                let (t, h) = (d.index_of(a.tail).unwrap(), d.index_of(a.head).unwrap());
                if !reached[t] || reached[h] {
                    return false;
                }
                let rest: Vec<(usize, usize)> = left
                    .iter()
                    .filter(|b| b.id != a.id)
                    .map(|b| (d.index_of(b.tail).unwrap(), d.index_of(b.head).unwrap()))
                    .collect();
                (0..n).filter(|&x| x != si).all(|x| arc_connectivity(n, &rest, si, x, remaining - 1) >= remaining - 1)
            });
            let Some(i) = pick else {
                return internal("no safe arc while splitting a k-arborescence");
            };
            let a = left.remove(i);
            reached[d.index_of(a.head).unwrap()] = true;
            tree.insert(a.id);
        }
        out.push(tree);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_rational, NodeSet};
    use crate::matroid::{partition_oracle, UniformMatroid};

    fn costs(d: &Digraph, vals: &[&str]) -> Costs {
        d.arcs().iter().zip(vals).map(|(a, v)| (a.id, parse_rational(v).unwrap())).collect()
    }

    /// root 0; nodes 1, 2; arcs 0->1 (1), 0->1 (3), 0->2 (2), 1->2 (1/2), 2->1 (1), 0->2 (5)
    fn sample() -> (Digraph, Costs) {
        let mut d = Digraph::with_nodes(3);
        for (u, v) in [(0, 1), (0, 1), (0, 2), (1, 2), (2, 1), (0, 2)] {
            d.add_arc(u, v).unwrap();
        }
        let c = costs(&d, &["1", "3", "2", "1/2", "1", "5"]);
        (d, c)
    }

    #[test]
    fn rooted_optimum_k1() {
        let (d, c) = sample();
        let r = min_cost_rooted_k_arb(&d, &c, 0, 1).unwrap().unwrap();
        assert_eq!(r.cost, parse_rational("3/2").unwrap());
        assert_eq!(r.arborescence.arcs, ArcSet::from([0, 3]));
    }

    #[test]
    fn rooted_optimum_k2() {
        let (d, c) = sample();
        // in-degree 2 at nodes 1 and 2: cheapest pairs {0,4}|{0,1} at 1 and {2,3} at 2 -> 1+1+2+1/2
        let r = min_cost_rooted_k_arb(&d, &c, 0, 2).unwrap().unwrap();
        assert_eq!(r.cost, parse_rational("9/2").unwrap());
        assert!(is_rooted_k_arborescence(&d, &r.arborescence.arcs, 0, 2).unwrap());
        assert!(min_cost_rooted_k_arb(&d, &c, 0, 3).unwrap().is_some());
        assert!(min_cost_rooted_k_arb(&d, &c, 0, 4).unwrap().is_none());
        let parts = decompose(&d, &r.arborescence.arcs, 0, 2).unwrap();
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert!(is_rooted_k_arborescence(&d, p, 0, 1).unwrap());
        }
    }

    #[test]
    fn unrooted_optimum() {
        let (d, c) = sample();
        // node 0 has no entering arcs, so every arborescence is rooted there
        let r = min_cost_k_arb(&d, &c, 1).unwrap().unwrap();
        assert_eq!(r.cost, parse_rational("3/2").unwrap());
        assert_eq!(r.arborescence.root_vector.values().sum::<usize>(), 1);
        assert!(min_cost_k_arb(&d, &c, 4).unwrap().is_none());
    }

    #[test]
    fn negative_costs_rejected() {
        let (d, mut c) = sample();
        c.insert(0, parse_rational("-1").unwrap());
        assert!(min_cost_rooted_k_arb(&d, &c, 0, 1).is_err());
    }

    #[test]
    fn single_node_is_trivial() {
        let d = Digraph::with_nodes(1);
        let r = min_cost_rooted_k_arb(&d, &Costs::new(), 0, 2).unwrap().unwrap();
        assert!(r.arborescence.arcs.is_empty());
    }

    #[test]
    fn l_tight_existence() {
        let (d, _) = sample();
        let l = LaminarFamily::new(NodeSet::from([1, 2]), [NodeSet::from([1, 2])]).unwrap();
        // one arc from the root into {1,2} plus an inner arc
        assert!(exists_l_tight(&d, 0, 1, &l).unwrap());
        let d2 = d.without_arcs(&[3, 4]);
        assert!(!exists_l_tight(&d2, 0, 1, &l).unwrap());
        assert!(exists_l_tight(&d2, 0, 1, &LaminarFamily::empty(NodeSet::from([1, 2]))).unwrap());
        let bad = LaminarFamily::new(NodeSet::from([0, 1]), [NodeSet::from([0, 1])]).unwrap();
        assert!(exists_l_tight(&d, 0, 1, &bad).is_err());
    }

    #[test]
    fn matroid_restricted() {
        let (d, _) = sample();
        let star = |v: NodeId| -> Vec<ArcId> { d.arcs().iter().filter(|a| a.head == v).map(|a| a.id).collect() };
        let build = |caps1: Vec<usize>| {
            let mut m: BTreeMap<NodeId, Box<dyn Matroid>> = BTreeMap::new();
            m.insert(0, Box::new(UniformMatroid::new([], 1)));
            // node 1: block {arcs from root} and {arc from 2}
            m.insert(1, Box::new(partition_oracle(vec![vec![0, 1], vec![4]], caps1).unwrap()));
            m.insert(2, Box::new(UniformMatroid::new(star(2), 1)));
            InStarMatroids { matroids: m }
        };
        assert!(exists_matroid_restricted_k_arb(&d, build(vec![1, 1]), 1).unwrap());
        // node 1 may not take any arc and node 0 has none either: two roots needed
        assert!(!exists_matroid_restricted_k_arb(&d, build(vec![0, 0]), 1).unwrap());
    }
}
