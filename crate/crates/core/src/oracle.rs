//! Exhaustive reference computations for small instances.

use crate::error::{invalid, Error, Result};
use crate::graph::{
    is_k_arborescence, is_l_tight, is_rooted_k_arborescence, validate_costs, Arc, ArcId, ArcSet, Costs, Digraph,
    LaminarFamily, NodeId, Rational, RootVector,
};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    /// Largest admissible k(|V|-1).
    pub max_arb_arcs: usize,
    pub max_arcs: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { max_arb_arcs: 12, max_arcs: 18 }
    }
}

impl OracleBounds {
    fn check(&self, d: &Digraph, k: usize) -> Result<()> {
        let size = k * d.node_count().saturating_sub(1);
        if size > self.max_arb_arcs || d.arc_count() > self.max_arcs {
            return Err(Error::Bound(format!(
                "oracle limited to k(|V|-1) <= {} and |A| <= {} (got {} and {})",
                self.max_arb_arcs,
                self.max_arcs,
                size,
                d.arc_count()
            )));
        }
        Ok(())
    }
}

struct Search<'a> {
    arcs: Vec<Arc>,
    head_index: Vec<usize>,
    /// Arcs into each head among positions `i..`.
    remaining: Vec<Vec<usize>>,
    indeg: Vec<usize>,
    chosen: Vec<ArcId>,
    k: usize,
    target: usize,
    exact: bool,
    accept: &'a mut dyn FnMut(&ArcSet),
}

impl Search<'_> {
    fn new<'a>(d: &Digraph, arcs: Vec<Arc>, k: usize, exact: bool, accept: &'a mut dyn FnMut(&ArcSet)) -> Search<'a> {
        let head_index: Vec<usize> = arcs.iter().map(|a| d.index_of(a.head).unwrap()).collect();
        let n = d.node_count();
        let mut remaining = vec![vec![0; n]; arcs.len() + 1];
        for i in (0..arcs.len()).rev() {
            remaining[i] = remaining[i + 1].clone();
            remaining[i][head_index[i]] += 1;
        }
        Search {
            arcs,
            head_index,
            remaining,
            indeg: vec![0; n],
            chosen: Vec::new(),
            k,
            target: k * (n - 1),
            exact,
            accept,
        }
    }

    fn run(&mut self, i: usize, needy: &[usize]) {
        if self.chosen.len() == self.target {
            (self.accept)(&self.chosen.iter().copied().collect());
            return;
        }
        if i == self.arcs.len() || self.chosen.len() + (self.arcs.len() - i) < self.target {
            return;
        }
        if self.exact && needy.iter().any(|&v| self.indeg[v] + self.remaining[i][v] < self.k) {
            return;
        }
        let h = self.head_index[i];
        if self.indeg[h] < self.k {
            self.indeg[h] += 1;
            self.chosen.push(self.arcs[i].id);
            self.run(i + 1, needy);
            self.chosen.pop();
            self.indeg[h] -= 1;
        }
        self.run(i + 1, needy);
    }
}

/// All `s`-rooted k-arborescences, in lexicographic order of sorted id lists.
pub fn enumerate_rooted_k_arbs(d: &Digraph, s: NodeId, k: usize, bounds: OracleBounds) -> Result<Vec<ArcSet>> {
    d.require_node(s)?;
    bounds.check(d, k)?;
    let arcs: Vec<Arc> = d.arcs().iter().copied().filter(|a| a.head != s).collect();
    let si = d.index_of(s).unwrap();
    let needy: Vec<usize> = (0..d.node_count()).filter(|&v| v != si).collect();
    let mut found = Vec::new();
    let mut accept = |f: &ArcSet| {
        if is_rooted_k_arborescence(d, f, s, k).unwrap_or(false) {
            found.push(f.clone());
        }
    };
    Search::new(d, arcs, k, true, &mut accept).run(0, &needy);
    found.sort();
    Ok(found)
}

/// Same as `enumerate_rooted_k_arbs` by filtering every subset; for
/// cross-checking on tiny inputs.
pub fn enumerate_rooted_k_arbs_naive(d: &Digraph, s: NodeId, k: usize) -> Result<Vec<ArcSet>> {
    if d.arc_count() > 20 {
        return Err(Error::Bound("naive enumeration limited to 20 arcs".into()));
    }
    let ids: Vec<ArcId> = d.arcs().iter().map(|a| a.id).collect();
    let mut out = Vec::new();
    for m in 0u32..1 << ids.len() {
        let f: ArcSet = (0..ids.len()).filter(|i| m >> i & 1 == 1).map(|i| ids[i]).collect();
        if is_rooted_k_arborescence(d, &f, s, k)? {
            out.push(f);
        }
    }
    out.sort();
    Ok(out)
}

/// All k-arborescences with any root vector.
pub fn enumerate_k_arbs(d: &Digraph, k: usize, bounds: OracleBounds) -> Result<Vec<(ArcSet, RootVector)>> {
    bounds.check(d, k)?;
    if d.node_count() == 0 {
        return invalid("empty digraph");
    }
    let mut found = Vec::new();
    let mut accept = |f: &ArcSet| {
        if let Ok(Some(q)) = is_k_arborescence(d, f, k) {
            found.push((f.clone(), q));
        }
    };
    Search::new(d, d.arcs().to_vec(), k, false, &mut accept).run(0, &[]);
    found.sort();
    Ok(found)
}

/// All `s`-rooted k-arborescences tight on every member of `laminar`.
pub fn enumerate_l_tight(
    d: &Digraph,
    s: NodeId,
    k: usize,
    laminar: &LaminarFamily,
    bounds: OracleBounds,
) -> Result<Vec<ArcSet>> {
    let all = enumerate_rooted_k_arbs(d, s, k, bounds)?;
    let mut out = Vec::new();
    for f in all {
        if is_l_tight(d, &f, laminar, s, k)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Smallest set meeting every member, searched by increasing size and then
/// lexicographically. Fails when a member is empty.
pub fn min_hitting_set(family: &[ArcSet]) -> Result<ArcSet> {
    if family.iter().any(|f| f.is_empty()) {
        return invalid("the family contains the empty arborescence, which no arc set blocks");
    }
    let universe: Vec<ArcId> = family.iter().flatten().copied().collect::<ArcSet>().into_iter().collect();
    if universe.len() > 64 {
        return Err(Error::Bound("hitting-set search limited to 64 arcs".into()));
    }
    let masks: Vec<u64> = family
        .iter()
        .map(|f| f.iter().map(|id| 1u64 << universe.binary_search(id).unwrap()).fold(0, |a, b| a | b))
        .collect();
    for r in 0..=universe.len() {
        let mut pick: Vec<usize> = (0..r).collect();
        loop {
            let m = pick.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if masks.iter().all(|f| f & m != 0) {
                return Ok(pick.iter().map(|&i| universe[i]).collect());
            }
            // next r-combination in lexicographic order
            let Some(i) = (0..r).rev().find(|&i| pick[i] < universe.len() - r + i) else { break };
            pick[i] += 1;
            for j in i + 1..r {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    unreachable!("the whole universe hits every nonempty member")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteTransversal {
    pub size: usize,
    pub witness: ArcSet,
    /// Number of arborescences in the blocked family.
    pub family_size: usize,
    pub opt_cost: Option<Rational>,
}

fn cost_of(c: &Costs, f: &ArcSet) -> Rational {
    f.iter().fold(Rational::zero(), |acc, id| acc + &c[id])
}

fn block_optima(all: Vec<ArcSet>, c: &Costs) -> Result<BruteTransversal> {
    let Some(opt) = all.iter().map(|f| cost_of(c, f)).min() else {
        return Ok(BruteTransversal { size: 0, witness: ArcSet::new(), family_size: 0, opt_cost: None });
    };
    let optima: Vec<ArcSet> = all.into_iter().filter(|f| cost_of(c, f) == opt).collect();
    let witness = min_hitting_set(&optima)?;
    Ok(BruteTransversal { size: witness.len(), witness, family_size: optima.len(), opt_cost: Some(opt) })
}

/// Minimum transversal of the minimum-cost k-arborescences by enumeration.
pub fn brute_min_transversal(d: &Digraph, c: &Costs, k: usize, bounds: OracleBounds) -> Result<BruteTransversal> {
    validate_costs(d, c)?;
    block_optima(enumerate_k_arbs(d, k, bounds)?.into_iter().map(|(f, _)| f).collect(), c)
}

/// Minimum transversal of the minimum-cost `s`-rooted k-arborescences.
pub fn brute_min_transversal_rooted(
    d: &Digraph,
    c: &Costs,
    s: NodeId,
    k: usize,
    bounds: OracleBounds,
) -> Result<BruteTransversal> {
    validate_costs(d, c)?;
    block_optima(enumerate_rooted_k_arbs(d, s, k, bounds)?, c)
}

/// Minimum transversal of the `laminar`-tight `s`-rooted k-arborescences.
pub fn brute_min_transversal_l_tight(
    d: &Digraph,
    s: NodeId,
    k: usize,
    laminar: &LaminarFamily,
    bounds: OracleBounds,
) -> Result<BruteTransversal> {
    let family = enumerate_l_tight(d, s, k, laminar, bounds)?;
    if family.is_empty() {
        return Ok(BruteTransversal { size: 0, witness: ArcSet::new(), family_size: 0, opt_cost: None });
    }
    let witness = min_hitting_set(&family)?;
    Ok(BruteTransversal { size: witness.len(), witness, family_size: family.len(), opt_cost: None })
}

/// Optimal root vectors, by enumeration of all k-arborescences.
pub fn optimal_root_vectors(d: &Digraph, c: &Costs, k: usize, bounds: OracleBounds) -> Result<Vec<RootVector>> {
    validate_costs(d, c)?;
    let all = enumerate_k_arbs(d, k, bounds)?;
    let Some(opt) = all.iter().map(|(f, _)| cost_of(c, f)).min() else { return Ok(Vec::new()) };
    let mut qs: Vec<RootVector> = all.into_iter().filter(|(f, _)| cost_of(c, f) == opt).map(|(_, q)| q).collect();
    qs.sort();
    qs.dedup();
    Ok(qs)
}

/// Which conditions an instance meets, for the search below. The digraph
/// is taken with root `s` and the laminar family over the non-root nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationCheck {
    pub rooted_exists: bool,
    pub tight_exists: bool,
    /// `sum f_W(X) >= k(|X| - 1)` for every member and compatible subpartition.
    pub subpartition_ok: bool,
    /// `f_W(Z1) + f_W(Z2) >= k` for every member and disjoint nonempty pair.
    pub pair_ok: bool,
}

impl SeparationCheck {
    /// A rooted k-arborescence exists and both counting conditions hold,
    /// yet no tight one exists.
    pub fn separates(&self) -> bool {
        self.rooted_exists && !self.tight_exists && self.subpartition_ok && self.pair_ok
    }
}

pub fn separation_check(d: &Digraph, s: NodeId, k: usize, laminar: &LaminarFamily) -> Result<SeparationCheck> {
    use crate::blocking::{f_subpartition_condition, full_family, min_f_pair, DEFAULT_MAX_PAIR_SET};
    let d = d.filter_arcs(|a| a.head != s);
    let zero: Costs = d.arcs().iter().map(|a| (a.id, Rational::zero())).collect();
    let lam = laminar.with_singletons();
    let full = full_family(&d, &lam)?;
    let mut subpartition_ok = true;
    let mut pair_ok = true;
    for w in full.members() {
        subpartition_ok &= f_subpartition_condition(&d, &full, w, k)?;
        if w.len() >= 2 {
            pair_ok &= min_f_pair(&d, &full, w, DEFAULT_MAX_PAIR_SET)?.value >= k;
        }
    }
    Ok(SeparationCheck {
        rooted_exists: crate::arb::min_cost_rooted_k_arb(&d, &zero, s, k)?.is_some(),
        tight_exists: crate::arb::exists_l_tight(&d, s, k, &lam)?,
        subpartition_ok,
        pair_ok,
    })
}

/// Seeded sample space: node 0 is the root, nodes `1..=nodes` the rest.
/// Each ordered pair not entering the root gets an arc with a per-sample
/// probability, doubled with probability one half; up to three random
/// laminar sets over the non-root nodes.
#[derive(Clone, Debug)]
pub struct SeparationSpace {
    pub nodes: usize,
    pub k: usize,
    pub seeds: std::ops::Range<u64>,
}

#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub seed: u64,
    pub instance: crate::instance::Instance,
    pub check: SeparationCheck,
}

pub fn sample_separation_instance(nodes: usize, k: usize, seed: u64) -> crate::instance::Instance {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::with_nodes(nodes + 1);
    let p = rng.gen_range(0.2..0.7);
    for u in 0..=nodes {
        for v in 1..=nodes {
            if u != v && rng.gen_bool(p) {
                let copies = if rng.gen_bool(0.5) { 2 } else { 1 };
                for _ in 0..copies {
                    d.add_arc(u, v).expect("valid arc");
                }
            }
        }
    }
    let others: Vec<NodeId> = (1..=nodes).collect();
    let laminar = crate::generate::random_laminar(&mut rng, &others, 3);
    crate::instance::Instance { digraph: d, costs: None, k, root: Some(0), laminar, expectations: Vec::new() }
}

fn separation_of(inst: &crate::instance::Instance) -> Result<SeparationCheck> {
    let universe = inst.digraph.nodes().iter().copied().filter(|&v| v != 0).collect();
    separation_check(&inst.digraph, 0, inst.k, &inst.laminar_over(universe)?)
}

/// Deletes arcs (highest id first, repeatedly) while the instance still
/// separates, then renumbers the survivors.
pub fn shrink_separation(inst: &crate::instance::Instance) -> Result<crate::instance::Instance> {
    let mut cur = inst.clone();
    loop {
        let ids: Vec<ArcId> = cur.digraph.arcs().iter().rev().map(|a| a.id).collect();
        let mut shrunk = false;
        for id in ids {
            let mut next = cur.clone();
            next.digraph = cur.digraph.without_arcs(&[id]);
            if separation_of(&next)?.separates() {
                cur = next;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            break;
        }
    }
    let mut d = Digraph::with_nodes(cur.digraph.node_count());
    for a in cur.digraph.arcs() {
        d.add_arc(a.tail, a.head)?;
    }
    cur.digraph = d;
    Ok(cur)
}

/// First seed whose sample separates, shrunk to a minimal arc set.
pub fn find_separation_witness(space: &SeparationSpace) -> Result<Option<SeparationWitness>> {
    use rayon::prelude::*;
    let hit = space
        .seeds
        .clone()
        .into_par_iter()
        .map(|seed| {
            let inst = sample_separation_instance(space.nodes, space.k, seed);
            separation_of(&inst).map(|c| c.separates().then_some((seed, inst)))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    match hit {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(None)) => unreachable!("filtered above"),
        Some(Ok(Some((seed, inst)))) => {
            let instance = shrink_separation(&inst)?;
            let check = separation_of(&instance)?;
            Ok(Some(SeparationWitness { seed, instance, check }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn pruned_enumeration_matches_naive(
            arcs in proptest::collection::vec((0usize..4, 0usize..4), 0..11),
            k in 1usize..3,
        ) {
            let mut d = Digraph::with_nodes(4);
            for (u, v) in arcs {
                if u != v {
                    d.add_arc(u, v).unwrap();
                }
            }
            let fast = enumerate_rooted_k_arbs(&d, 0, k, OracleBounds::default()).unwrap();
            prop_assert_eq!(fast, enumerate_rooted_k_arbs_naive(&d, 0, k).unwrap());
        }
    }

    #[test]
    fn hitting_sets() {
        let fam = vec![ArcSet::from([1, 2]), ArcSet::from([2, 3]), ArcSet::from([3, 4])];
        assert_eq!(min_hitting_set(&fam).unwrap(), ArcSet::from([1, 3]));
        assert_eq!(min_hitting_set(&[]).unwrap(), ArcSet::new());
        assert!(min_hitting_set(&[ArcSet::new()]).is_err());
    }

    #[test]
    fn bounds_enforced() {
        let d = Digraph::with_nodes(8);
        assert!(matches!(enumerate_rooted_k_arbs(&d, 0, 2, OracleBounds::default()), Err(Error::Bound(_))));
    }

    #[test]
    fn triangle_counts() {
        // complete digraph on 3 nodes: 3 arborescences per root
        let mut d = Digraph::with_nodes(3);
        for u in 0..3 {
            for v in 0..3 {
                if u != v {
                    d.add_arc(u, v).unwrap();
                }
            }
        }
        assert_eq!(enumerate_rooted_k_arbs(&d, 0, 1, OracleBounds::default()).unwrap().len(), 3);
        assert_eq!(enumerate_k_arbs(&d, 1, OracleBounds::default()).unwrap().len(), 9);
        let c: Costs = d.arcs().iter().map(|a| (a.id, Rational::from_integer(1.into()))).collect();
        // all 9 are optimal; an independent brute force gives 4
        let b = brute_min_transversal(&d, &c, 1, OracleBounds::default()).unwrap();
        assert_eq!(b.family_size, 9);
        assert_eq!(b.size, 4);
        assert_eq!(optimal_root_vectors(&d, &c, 1, OracleBounds::default()).unwrap().len(), 3);
    }
}
