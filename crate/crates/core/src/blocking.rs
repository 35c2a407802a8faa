//! Minimum transversals of optimal and laminar-tight k-arborescence families.
//!
//! For a laminar family containing the whole node set and every singleton,
//! `f_W(Z)` counts arcs of `D[W]` entering `Z` except those leaving some
//! member of `L[W]` that meets `Z`. When no transversal of size below k
//! exists, the minimum size is the least `f_W(Z1) + f_W(Z2) - k + 1` over
//! members `W` and disjoint nonempty `Z1, Z2 ⊆ W`.

use crate::arb::{exists_l_tight, min_cost_k_arb, min_cost_rooted_generic, min_cost_rooted_k_arb};
use crate::error::{internal, invalid, Error, Result};
use crate::graph::{
    build_cost_extension, subpartitions, validate_costs, Arc, ArcId, ArcSet, Costs, Digraph, Extension, LaminarFamily,
    NodeId, NodeSet, Rational,
};
use crate::optstruct::{optimality_structure, OptimalityStructure};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

pub const DEFAULT_MAX_PAIR_SET: usize = 14;

fn check_member(laminar: &LaminarFamily, w: &NodeSet) -> Result<()> {
    if laminar.contains(w) {
        Ok(())
    } else {
        invalid(format!("{w:?} is not a member of the laminar family"))
    }
}

/// `f_W(Z)` with the counted arcs, straight from the definition.
pub fn f_w(d: &Digraph, laminar: &LaminarFamily, w: &NodeSet, z: &NodeSet) -> Result<(usize, ArcSet)> {
    check_member(laminar, w)?;
    if z.is_empty() || !z.is_subset(w) {
        return invalid("Z must be a nonempty subset of W");
    }
    let inner = laminar.restricted_to(w);
    let counted: ArcSet = d
        .induced(w)
        .filter(|a| a.enters(z))
        .filter(|a| !inner.members().iter().any(|m| !m.is_disjoint(z) && a.leaves(m)))
        .map(|a| a.id)
        .collect();
    Ok((counted.len(), counted))
}

/// Per-arc shadows of `D[W]` for fast evaluation of `f_W` on node masks.
///
/// The shadow of `uv` is the largest member of `L[W]` containing `u` but not
/// `v` (or `{u}`). The arc counts for `Z` iff `v ∈ Z` and the shadow misses `Z`.
#[derive(Clone, Debug)]
pub struct ShadowTable {
    pub nodes: Vec<NodeId>,
    arcs: Vec<(ArcId, u64, u64)>,
}

impl ShadowTable {
    pub fn mask_of(&self, set: &NodeSet) -> u64 {
        set.iter().map(|v| 1u64 << self.nodes.binary_search(v).expect("node of W")).fold(0, |a, b| a | b)
    }

    pub fn set_of(&self, mask: u64) -> NodeSet {
        (0..self.nodes.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.nodes[i]).collect()
    }

    pub fn value(&self, mask: u64) -> usize {
        self.arcs.iter().filter(|(_, h, sh)| h & mask != 0 && sh & mask == 0).count()
    }

    pub fn counted(&self, mask: u64) -> ArcSet {
        self.arcs.iter().filter(|(_, h, sh)| h & mask != 0 && sh & mask == 0).map(|(id, _, _)| *id).collect()
    }
}

pub fn f_w_shadow(d: &Digraph, laminar: &LaminarFamily, w: &NodeSet) -> Result<ShadowTable> {
    check_member(laminar, w)?;
    if w.len() > 64 {
        return Err(Error::Bound("shadow tables hold at most 64 nodes".into()));
    }
    let inner = laminar.restricted_to(w);
    let mut table = ShadowTable { nodes: w.iter().copied().collect(), arcs: Vec::new() };
    for a in d.induced(w) {
        // members are sorted by size, so the last match is the largest
        let shadow = inner.members().iter().rfind(|m| a.leaves(m)).cloned().unwrap_or_else(|| NodeSet::from([a.tail]));
        let head = table.mask_of(&NodeSet::from([a.head]));
        let sh = table.mask_of(&shadow);
        table.arcs.push((a.id, head, sh));
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPairWitness {
    pub w: NodeSet,
    pub z1: NodeSet,
    pub z2: NodeSet,
    pub e1: ArcSet,
    pub e2: ArcSet,
    pub value: usize,
}

/// Least `f_W(Z1) + f_W(Z2)` over disjoint nonempty `Z1, Z2 ⊆ W`, by exact
/// enumeration of all `3^|W|` placements. `Z1` holds the smallest node of
/// `Z1 ∪ Z2`; ties keep the first pair found.
pub fn min_f_pair(d: &Digraph, laminar: &LaminarFamily, w: &NodeSet, max_set: usize) -> Result<FPairWitness> {
    if w.len() < 2 {
        return invalid("pair search needs |W| >= 2");
    }
    if w.len() > max_set {
        return Err(Error::Bound(format!("|W| = {} exceeds the pair-search bound {max_set}", w.len())));
    }
    let table = f_w_shadow(d, laminar, w)?;
    let n = w.len();
    let full: u64 = (1 << n) - 1;
    let values: Vec<usize> = (0..=full).map(|m| table.value(m)).collect();
    let mut best: Option<(usize, u64, u64)> = None;
    for z1 in 1..=full {
        let low = z1 & z1.wrapping_neg();
        let avail = full & !z1 & !(low | (low - 1));
        let mut z2 = avail;
        while z2 != 0 {
            let v = values[z1 as usize] + values[z2 as usize];
            if best.is_none_or(|(b, _, _)| v < b) {
                best = Some((v, z1, z2));
            }
            z2 = (z2 - 1) & avail;
        }
    }
    let (value, z1, z2) = best.expect("|W| >= 2 admits a pair");
    Ok(FPairWitness {
        w: w.clone(),
        z1: table.set_of(z1),
        z2: table.set_of(z2),
        e1: table.counted(z1),
        e2: table.counted(z2),
        value,
    })
}

/// Every member of `L[W]`-compatible subpartitions of `W` (blocks are unions
/// of maximal proper members of `L[W]`) meets `sum f_W(X) >= k(|X| - 1)`.
pub fn f_subpartition_condition(d: &Digraph, laminar: &LaminarFamily, w: &NodeSet, k: usize) -> Result<bool> {
    let table = f_w_shadow(d, laminar, w)?;
    let children: Vec<u64> = laminar.children(w).iter().map(|c| table.mask_of(c)).collect();
    if children.len() > 10 {
        return Err(Error::Bound("too many children for the subpartition sweep".into()));
    }
    Ok(subpartitions(children.len()).iter().filter(|x| x.len() >= 2).all(|blocks| {
        let total: usize = blocks
            .iter()
            .map(|b| {
                let m = (0..children.len()).filter(|i| b >> i & 1 == 1).fold(0, |acc, i| acc | children[i]);
                table.value(m)
            })
            .sum();
        total >= k * (blocks.len() - 1)
    }))
}

/// `laminar` (sets avoiding `s`) plus the whole node set and every singleton.
pub fn full_family(d: &Digraph, laminar: &LaminarFamily) -> Result<LaminarFamily> {
    Ok(laminar.over(d.node_set())?.normalized())
}

/// Whether deleting `h` leaves no laminar-tight rooted k-arborescence.
pub fn is_transversal(d: &Digraph, s: NodeId, k: usize, laminar: &LaminarFamily, h: &ArcSet) -> Result<bool> {
    d.resolve(h)?;
    Ok(!exists_l_tight(&d.without_arcs(h), s, k, laminar)?)
}

/// Arcs lying in at least one laminar-tight rooted k-arborescence.
pub fn useful_arcs(d: &Digraph, s: NodeId, k: usize, laminar: &LaminarFamily) -> Result<ArcSet> {
    let big = d.arc_count() as i64 + 1;
    let counts: HashMap<ArcId, i64> = d.arcs().iter().map(|a| (a.id, laminar.entered_count(a) as i64)).collect();
    let tight = big * (k * laminar.len()) as i64;
    let ids: Vec<ArcId> = d.arcs().iter().map(|a| a.id).collect();
    let flags: Vec<Result<bool>> = ids
        .par_iter()
        .map(|&e| {
            let w = min_cost_rooted_generic(d, s, k, &|id| big * counts[&id] - i64::from(id == e))?;
            Ok(w.is_some_and(|(_, w)| w == tight - 1))
        })
        .collect();
    let mut out = ArcSet::new();
    for (id, f) in ids.into_iter().zip(flags) {
        if f? {
            out.insert(id);
        }
    }
    Ok(out)
}

fn combinations(items: &[ArcId], r: usize) -> Vec<ArcSet> {
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..r).collect();
    if r > items.len() {
        return out;
    }
    loop {
        out.push(pick.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..r).rev().find(|&i| pick[i] < items.len() - r + i) else { break };
        pick[i] += 1;
        for j in i + 1..r {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

/// Smallest transversal with at most `max_size` arcs, searched by size and
/// then lexicographically over arcs that lie in some tight arborescence and
/// are not `protected`.
pub fn small_transversal(
    d: &Digraph,
    s: NodeId,
    k: usize,
    laminar: &LaminarFamily,
    max_size: usize,
    protected: &ArcSet,
) -> Result<Option<ArcSet>> {
    if is_transversal(d, s, k, laminar, &ArcSet::new())? {
        return Ok(Some(ArcSet::new()));
    }
    let cands: Vec<ArcId> = useful_arcs(d, s, k, laminar)?.difference(protected).copied().collect();
    for r in 1..=max_size.min(cands.len()) {
        let combos = combinations(&cands, r);
        let hit = combos
            .par_iter()
            .map(|h| is_transversal(d, s, k, laminar, h).map(|t| t.then(|| h.clone())))
            .find_first(|res| !matches!(res, Ok(None)));
        if let Some(res) = hit {
            return res;
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    EmptyFamily,
    MandatoryArc,
    SmallSearch,
    FPairFormula,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::EmptyFamily => "emptyFamily",
            Provenance::MandatoryArc => "mandatoryArc",
            Provenance::SmallSearch => "smallSearch",
            Provenance::FPairFormula => "fPairFormula",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransversalResult {
    pub arcs: ArcSet,
    pub size: usize,
    pub provenance: Provenance,
    pub witness: Option<FPairWitness>,
}

impl TransversalResult {
    fn new(arcs: ArcSet, provenance: Provenance, witness: Option<FPairWitness>) -> Self {
        TransversalResult { size: arcs.len(), arcs, provenance, witness }
    }
}

#[derive(Clone, Debug)]
pub struct BlockingOptions {
    /// Largest member size for the exact pair search.
    pub max_pair_set: usize,
    /// Arcs never placed in a transversal.
    pub protected: ArcSet,
}

impl Default for BlockingOptions {
    fn default() -> Self {
        BlockingOptions { max_pair_set: DEFAULT_MAX_PAIR_SET, protected: ArcSet::new() }
    }
}

/// Pair formula over all members of the full family; the minimiser comes
/// first in member order.
pub fn pair_formula(
    d: &Digraph,
    laminar_full: &LaminarFamily,
    k: usize,
    max_pair_set: usize,
) -> Result<(FPairWitness, ArcSet)> {
    let mut best: Option<FPairWitness> = None;
    for w in laminar_full.members().iter().filter(|w| w.len() >= 2) {
        let p = min_f_pair(d, laminar_full, w, max_pair_set)?;
        if best.as_ref().is_none_or(|b| p.value < b.value) {
            best = Some(p);
        }
    }
    let Some(best) = best else {
        return invalid("no member with two or more nodes");
    };
    let union: Vec<ArcId> = best.e1.union(&best.e2).copied().collect();
    if best.value < k {
        return internal(format!("pair value {} below k = {k} although a tight arborescence exists", best.value));
    }
    let h: ArcSet = union[..union.len() + 1 - k].iter().copied().collect();
    Ok((best, h))
}

fn require_blockable(d: &Digraph) -> Result<()> {
    if d.node_count() < 2 {
        return invalid("a single-node digraph has only the empty arborescence, which cannot be blocked");
    }
    Ok(())
}

/// Minimum transversal of the `s`-rooted k-arborescences that are tight on
/// `laminar` (sets avoiding `s`).
pub fn minimum_transversal_l_tight(
    d: &Digraph,
    s: NodeId,
    k: usize,
    laminar: &LaminarFamily,
    opts: &BlockingOptions,
) -> Result<TransversalResult> {
    d.require_node(s)?;
    require_blockable(d)?;
    let d = d.filter_arcs(|a| a.head != s);
    let lam = laminar.with_singletons();
    if !exists_l_tight(&d, s, k, &lam)? {
        return Ok(TransversalResult::new(ArcSet::new(), Provenance::EmptyFamily, None));
    }
    if let Some(h) = small_transversal(&d, s, k, &lam, k - 1, &opts.protected)? {
        return Ok(TransversalResult::new(h, Provenance::SmallSearch, None));
    }
    let full = full_family(&d, &lam)?;
    let (witness, h) = pair_formula(&d, &full, k, opts.max_pair_set)?;
    if !h.is_disjoint(&opts.protected) {
        return internal("pair formula picked a protected arc");
    }
    if !is_transversal(&d, s, k, &lam, &h)? {
        return internal("pair formula produced a set that is not a transversal");
    }
    Ok(TransversalResult::new(h, Provenance::FPairFormula, Some(witness)))
}

#[derive(Clone, Debug)]
pub struct RootedSolution {
    pub transversal: TransversalResult,
    pub structure: Option<OptimalityStructure>,
}

/// Minimum transversal of the minimum-cost `s`-rooted k-arborescences.
pub fn minimum_transversal_rooted(
    d: &Digraph,
    c: &Costs,
    s: NodeId,
    k: usize,
    opts: &BlockingOptions,
) -> Result<RootedSolution> {
    validate_costs(d, c)?;
    d.require_node(s)?;
    require_blockable(d)?;
    let d = d.filter_arcs(|a| a.head != s);
    if min_cost_rooted_k_arb(&d, c, s, k)?.is_none() {
        let t = TransversalResult::new(ArcSet::new(), Provenance::EmptyFamily, None);
        return Ok(RootedSolution { transversal: t, structure: None });
    }
    let st = optimality_structure(&d, c, s, k)?;
    if let Some(&a) = st.mandatory.iter().find(|a| !opts.protected.contains(a)) {
        let t = TransversalResult::new(ArcSet::from([a]), Provenance::MandatoryArc, None);
        return Ok(RootedSolution { transversal: t, structure: Some(st) });
    }
    if !st.mandatory.is_empty() {
        return internal("every mandatory arc is protected");
    }
    let reduced = d.without_arcs(&st.forbidden);
    let t = minimum_transversal_l_tight(&reduced, s, k, &st.laminar, opts)?;
    Ok(RootedSolution { transversal: t, structure: Some(st) })
}

#[derive(Clone, Debug)]
pub struct UnrootedSolution {
    pub transversal: TransversalResult,
    pub opt_cost: Option<Rational>,
    pub extension: Extension,
    pub structure: Option<OptimalityStructure>,
}

/// Minimum transversal of the minimum-cost k-arborescences (free root
/// vector), solved on the extension with |A|+k arcs of cost `sum(c)+1` from
/// a new root to every node. Extension arcs are never deleted.
pub fn minimum_transversal(d: &Digraph, c: &Costs, k: usize, opts: &BlockingOptions) -> Result<UnrootedSolution> {
    validate_costs(d, c)?;
    require_blockable(d)?;
    let beta = c.values().fold(Rational::zero(), |acc, x| acc + x) + Rational::one();
    let ext = build_cost_extension(d, c, d.arc_count() + k, &beta)?;
    // optima of the extension leave the root by more than k arcs exactly
    // when the original digraph has no k-arborescence
    if min_cost_k_arb(d, c, k)?.is_none() {
        return Ok(UnrootedSolution {
            transversal: TransversalResult::new(ArcSet::new(), Provenance::EmptyFamily, None),
            opt_cost: None,
            extension: ext,
            structure: None,
        });
    }
    let mut inner = opts.clone();
    inner.protected.extend(ext.extension_arcs.iter().copied());
    let costs = ext.costs.as_ref().expect("cost extension");
    let sol = minimum_transversal_rooted(&ext.digraph, costs, ext.root, k, &inner)?;
    if !sol.transversal.arcs.iter().all(|id| d.has_arc(*id)) {
        return internal("transversal uses an extension arc");
    }
    let opt_cost = sol.structure.as_ref().map(|st| &st.opt_cost - beta * Rational::from_integer(BigInt::from(k)));
    Ok(UnrootedSolution { transversal: sol.transversal, opt_cost, extension: ext, structure: sol.structure })
}

/// Resolved arcs of a transversal, for reporting.
pub fn transversal_arcs(d: &Digraph, t: &TransversalResult) -> Result<Vec<Arc>> {
    d.resolve(&t.arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_rational;
    use crate::oracle::{brute_min_transversal_l_tight, OracleBounds};
    use proptest::prelude::*;

    fn lam(universe: &[NodeId], sets: &[&[NodeId]]) -> LaminarFamily {
        LaminarFamily::new(universe.iter().copied().collect(), sets.iter().map(|s| s.iter().copied().collect()))
            .unwrap()
    }

    #[test]
    fn f_value_excludes_arcs_leaving_members_that_meet_z() {
        // W = {0,1,2,3}, L[W] ∋ {0,1}; arc 1->2 leaves {0,1}
        let mut d = Digraph::with_nodes(4);
        d.add_arc(1, 2).unwrap();
        d.add_arc(3, 2).unwrap();
        d.add_arc(0, 1).unwrap();
        let l = lam(&[0, 1, 2, 3], &[&[0, 1]]).normalized();
        let w = NodeSet::from([0, 1, 2, 3]);
        // Z = {2}: both arcs enter; {0,1} misses Z so nothing excluded
        assert_eq!(f_w(&d, &l, &w, &NodeSet::from([2])).unwrap().0, 2);
        // Z = {0,2}: 1->2 leaves {0,1} which meets Z
        assert_eq!(f_w(&d, &l, &w, &NodeSet::from([0, 2])).unwrap().0, 1);
        assert!(f_w(&d, &l, &w, &NodeSet::from([7])).is_err());
        let t = f_w_shadow(&d, &l, &w).unwrap();
        for m in 1u64..16 {
            let z = t.set_of(m);
            assert_eq!(t.value(m), f_w(&d, &l, &w, &z).unwrap().0);
        }
    }

    #[test]
    fn pair_search_bounds() {
        let d = Digraph::with_nodes(3);
        let l = lam(&[0, 1, 2], &[]).normalized();
        assert!(min_f_pair(&d, &l, &NodeSet::from([0]), 14).is_err());
        assert!(matches!(min_f_pair(&d, &l, &NodeSet::from([0, 1, 2]), 2), Err(Error::Bound(_))));
        assert_eq!(min_f_pair(&d, &l, &NodeSet::from([0, 1, 2]), 14).unwrap().value, 0);
    }

    #[test]
    fn single_arc_family() {
        // root 0 -> 1 only: the arc itself blocks
        let mut d = Digraph::with_nodes(2);
        d.add_arc(0, 1).unwrap();
        let l = lam(&[1], &[]);
        let r = minimum_transversal_l_tight(&d, 0, 1, &l, &BlockingOptions::default()).unwrap();
        assert_eq!(r.arcs, ArcSet::from([0]));
        assert_eq!(r.provenance, Provenance::FPairFormula);
    }

    #[test]
    fn mandatory_arc_shortcut() {
        let mut d = Digraph::with_nodes(3);
        d.add_arc(0, 1).unwrap();
        d.add_arc(1, 2).unwrap();
        d.add_arc(0, 2).unwrap();
        let c: Costs =
            [(0, parse_rational("1").unwrap()), (1, parse_rational("1").unwrap()), (2, parse_rational("5").unwrap())]
                .into();
        let r = minimum_transversal_rooted(&d, &c, 0, 1, &BlockingOptions::default()).unwrap();
        assert_eq!(r.transversal.size, 1);
        assert_eq!(r.transversal.provenance, Provenance::MandatoryArc);
        let cut = d.without_arcs(&r.transversal.arcs);
        let after = min_cost_rooted_k_arb(&cut, &c, 0, 1).unwrap().unwrap();
        assert!(after.cost > parse_rational("2").unwrap());
    }

    #[test]
    fn unreachable_family_is_empty() {
        let d = Digraph::with_nodes(3);
        let c = Costs::new();
        let r = minimum_transversal_rooted(&d, &c, 0, 1, &BlockingOptions::default()).unwrap();
        assert_eq!(r.transversal.provenance, Provenance::EmptyFamily);
        assert!(minimum_transversal(&Digraph::with_nodes(1), &c, 1, &BlockingOptions::default()).is_err());
    }

    #[test]
    fn f_value_worked_example() {
        // W = {a,b,c} = {0,1,2}; arcs a->c, b->c, c->a; {a,b} in L
        let mut d = Digraph::with_nodes(3);
        d.add_arc(0, 2).unwrap();
        d.add_arc(1, 2).unwrap();
        d.add_arc(2, 0).unwrap();
        let l = lam(&[0, 1, 2], &[&[0, 1]]).normalized();
        let w = NodeSet::from([0, 1, 2]);
        assert_eq!(f_w(&d, &l, &w, &NodeSet::from([2])).unwrap(), (2, ArcSet::from([0, 1])));
        assert_eq!(f_w(&d, &l, &w, &NodeSet::from([1, 2])).unwrap().0, 0);
    }

    fn random_instance(arcs: &[(usize, usize)], n: usize) -> Digraph {
        let mut d = Digraph::with_nodes(n);
        for &(u, v) in arcs {
            if u % n != v % n {
                d.add_arc(u % n, v % n).unwrap();
            }
        }
        d
    }

    const FAMILIES: [&[&[NodeId]]; 4] = [&[], &[&[0, 1]], &[&[0, 1], &[0, 1, 2]], &[&[1, 2], &[3, 4]]];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn l_tight_transversal_matches_oracle(
            arcs in proptest::collection::vec((0usize..4, 1usize..4), 4..11),
            k in 1usize..3,
            member in 0usize..4,
        ) {
            let mut d = Digraph::with_nodes(4);
            for (u, v) in arcs {
                if u != v {
                    d.add_arc(u, v).unwrap();
                }
            }
            let sets: [&[NodeId]; 4] = [&[], &[1, 2], &[2, 3], &[1, 2, 3]];
            let l = lam(&[1, 2, 3], &[sets[member]].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>());
            let bounds = OracleBounds::default();
            let want = brute_min_transversal_l_tight(&d, 0, k, &l.with_singletons(), bounds).unwrap();
            let got = minimum_transversal_l_tight(&d, 0, k, &l, &BlockingOptions::default()).unwrap();
            prop_assert_eq!(got.size, want.size);
            if want.family_size == 0 {
                prop_assert_eq!(got.provenance, Provenance::EmptyFamily);
            } else {
                prop_assert!(is_transversal(&d, 0, k, &l.with_singletons(), &got.arcs).unwrap());
            }
        }

        #[test]
        fn shadow_matches_definition(
            arcs in proptest::collection::vec((0usize..5, 0usize..5), 0..14),
            fam in 0usize..4,
        ) {
            let d = random_instance(&arcs, 5);
            let l = lam(&[0, 1, 2, 3, 4], FAMILIES[fam]).normalized();
            for w in l.members() {
                let t = f_w_shadow(&d, &l, w).unwrap();
                for m in 1u64..(1 << w.len()) {
                    let z = t.set_of(m);
                    let (v, set) = f_w(&d, &l, w, &z).unwrap();
                    prop_assert_eq!(t.value(m), v);
                    prop_assert_eq!(t.counted(m), set);
                }
            }
        }

        #[test]
        fn pair_search_matches_double_loop(
            arcs in proptest::collection::vec((0usize..5, 0usize..5), 0..14),
            fam in 0usize..4,
        ) {
            let d = random_instance(&arcs, 5);
            let l = lam(&[0, 1, 2, 3, 4], FAMILIES[fam]).normalized();
            for w in l.members().iter().filter(|w| w.len() >= 2) {
                let nodes: Vec<NodeId> = w.iter().copied().collect();
                let subsets: Vec<NodeSet> = (1u32..(1 << nodes.len()))
                    .map(|m| (0..nodes.len()).filter(|i| m >> i & 1 == 1).map(|i| nodes[i]).collect())
                    .collect();
                let mut best = usize::MAX;
                for a in &subsets {
                    for b in subsets.iter().filter(|b| a.is_disjoint(b)) {
                        best = best.min(f_w(&d, &l, w, a).unwrap().0 + f_w(&d, &l, w, b).unwrap().0);
                    }
                }
                let got = min_f_pair(&d, &l, w, 14).unwrap();
                prop_assert_eq!(got.value, best);
                prop_assert!(got.z1.is_disjoint(&got.z2));
                prop_assert_eq!(got.e1.len() + got.e2.len(), got.value);
                prop_assert!(got.e1.is_disjoint(&got.e2));
            }
        }
    }
}
