//! Digraphs with stable arc ids, laminar families, extensions, contractions and
//! the k-arborescence validity checks.

use crate::error::{invalid, Error, Result};
use crate::flow::arc_connectivity;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type NodeId = usize;
pub type ArcId = usize;
pub type NodeSet = BTreeSet<NodeId>;
pub type ArcSet = BTreeSet<ArcId>;
pub type Rational = BigRational;
pub type Costs = BTreeMap<ArcId, Rational>;
pub type RootVector = BTreeMap<NodeId, usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub id: ArcId,
    pub tail: NodeId,
    pub head: NodeId,
}

impl Arc {
    pub fn enters(&self, set: &NodeSet) -> bool {
        set.contains(&self.head) && !set.contains(&self.tail)
    }

    pub fn leaves(&self, set: &NodeSet) -> bool {
        set.contains(&self.tail) && !set.contains(&self.head)
    }

    pub fn inside(&self, set: &NodeSet) -> bool {
        set.contains(&self.tail) && set.contains(&self.head)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}:{}->{}", self.id, self.tail, self.head)
    }
}

/// Directed multigraph without loops. Parallel arcs are distinct ids and ids
/// survive deletions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    nodes: Vec<NodeId>,
    arcs: Vec<Arc>,
}

impl Digraph {
    pub fn new(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let set: NodeSet = nodes.into_iter().collect();
        Digraph { nodes: set.into_iter().collect(), arcs: Vec::new() }
    }

    pub fn with_nodes(n: usize) -> Self {
        Self::new(0..n)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes.iter().copied().collect()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn has_node(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    /// Dense position of a node in `nodes()`.
    pub fn index_of(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }

    pub fn fresh_node(&self) -> NodeId {
        self.nodes.last().map_or(0, |v| v + 1)
    }

    pub fn add_node(&mut self, v: NodeId) {
        if let Err(pos) = self.nodes.binary_search(&v) {
            self.nodes.insert(pos, v);
        }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc_ids(&self) -> ArcSet {
        self.arcs.iter().map(|a| a.id).collect()
    }

    pub fn arc(&self, id: ArcId) -> Option<Arc> {
        self.arcs.binary_search_by_key(&id, |a| a.id).ok().map(|i| self.arcs[i])
    }

    pub fn has_arc(&self, id: ArcId) -> bool {
        self.arcs.binary_search_by_key(&id, |a| a.id).is_ok()
    }

    pub fn next_arc_id(&self) -> ArcId {
        self.arcs.last().map_or(0, |a| a.id + 1)
    }

    pub fn add_arc(&mut self, tail: NodeId, head: NodeId) -> Result<ArcId> {
        let id = self.next_arc_id();
        self.add_arc_with_id(id, tail, head)?;
        Ok(id)
    }

    pub fn add_arc_with_id(&mut self, id: ArcId, tail: NodeId, head: NodeId) -> Result<()> {
        if tail == head {
            return invalid(format!("arc {id} is a loop at node {tail}"));
        }
        if !self.has_node(tail) || !self.has_node(head) {
            return invalid(format!("arc {id} uses an unknown node ({tail} -> {head})"));
        }
        match self.arcs.binary_search_by_key(&id, |a| a.id) {
            Ok(_) => invalid(format!("duplicate arc id {id}")),
            Err(pos) => {
                self.arcs.insert(pos, Arc { id, tail, head });
                Ok(())
            }
        }
    }

    pub fn without_arcs<'a>(&self, ids: impl IntoIterator<Item = &'a ArcId>) -> Digraph {
        let drop: ArcSet = ids.into_iter().copied().collect();
        self.filter_arcs(|a| !drop.contains(&a.id))
    }

    pub fn filter_arcs(&self, keep: impl Fn(&Arc) -> bool) -> Digraph {
        Digraph { nodes: self.nodes.clone(), arcs: self.arcs.iter().copied().filter(|a| keep(a)).collect() }
    }

    pub fn entering<'a>(&'a self, set: &'a NodeSet) -> impl Iterator<Item = Arc> + 'a {
        self.arcs.iter().copied().filter(move |a| a.enters(set))
    }

    pub fn induced<'a>(&'a self, set: &'a NodeSet) -> impl Iterator<Item = Arc> + 'a {
        self.arcs.iter().copied().filter(move |a| a.inside(set))
    }

    /// Resolves arc ids, failing on ids not in the digraph.
    pub fn resolve<'a>(&self, ids: impl IntoIterator<Item = &'a ArcId>) -> Result<Vec<Arc>> {
        ids.into_iter()
            .map(|&id| self.arc(id).ok_or_else(|| Error::Invalid(format!("arc id {id} not in digraph"))))
            .collect()
    }

    pub fn require_node(&self, v: NodeId) -> Result<()> {
        if self.has_node(v) {
            Ok(())
        } else {
            invalid(format!("node {v} not in digraph"))
        }
    }
}

pub fn validate_costs(d: &Digraph, c: &Costs) -> Result<()> {
    for a in d.arcs() {
        match c.get(&a.id) {
            None => return invalid(format!("arc {} has no cost", a.id)),
            Some(x) if x.is_negative() => return invalid(format!("arc {} has negative cost", a.id)),
            _ => {}
        }
    }
    Ok(())
}

pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.parse().ok()?, q.parse().ok()?),
        None => (s.parse().ok()?, num_bigint::BigInt::one()),
    };
    if q == num_bigint::BigInt::zero() {
        return None;
    }
    Some(Rational::new(p, q))
}

/// Family of pairwise nested-or-disjoint nonempty node sets over a universe.
/// Members are kept sorted by size, so every set precedes its supersets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarFamily {
    universe: NodeSet,
    members: Vec<NodeSet>,
}

pub fn is_laminar(sets: &[NodeSet]) -> bool {
    sets.iter()
        .enumerate()
        .all(|(i, x)| sets[i + 1..].iter().all(|y| x.is_disjoint(y) || x.is_subset(y) || y.is_subset(x)))
}

impl LaminarFamily {
    pub fn new(universe: NodeSet, members: impl IntoIterator<Item = NodeSet>) -> Result<Self> {
        let mut ms: Vec<NodeSet> = members.into_iter().collect();
        ms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        ms.dedup();
        for m in &ms {
            if m.is_empty() {
                return invalid("laminar family member is empty");
            }
            if !m.is_subset(&universe) {
                return invalid(format!("laminar member {m:?} is not inside the universe {universe:?}"));
            }
        }
        if !is_laminar(&ms) {
            return invalid("family is not laminar");
        }
        Ok(LaminarFamily { universe, members: ms })
    }

    pub fn empty(universe: NodeSet) -> Self {
        LaminarFamily { universe, members: Vec::new() }
    }

    pub fn universe(&self) -> &NodeSet {
        &self.universe
    }

    pub fn members(&self) -> &[NodeSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &NodeSet) -> bool {
        self.members.iter().any(|m| m == w)
    }

    fn extended(&self, extra: impl IntoIterator<Item = NodeSet>) -> Self {
        let ms = self.members.iter().cloned().chain(extra);
        LaminarFamily::new(self.universe.clone(), ms).expect("adding singletons or the universe keeps laminarity")
    }

    pub fn with_singletons(&self) -> Self {
        self.extended(self.universe.iter().map(|&v| NodeSet::from([v])))
    }

    /// Adds the universe and every singleton.
    pub fn normalized(&self) -> Self {
        let mut extra: Vec<NodeSet> = self.universe.iter().map(|&v| NodeSet::from([v])).collect();
        if !self.universe.is_empty() {
            extra.push(self.universe.clone());
        }
        self.extended(extra)
    }

    /// Same members over a larger universe.
    pub fn over(&self, universe: NodeSet) -> Result<Self> {
        LaminarFamily::new(universe, self.members.iter().cloned())
    }

    /// `L[W]`: members contained in `w`, with `w` as universe.
    pub fn restricted_to(&self, w: &NodeSet) -> Self {
        LaminarFamily {
            universe: w.clone(),
            members: self.members.iter().filter(|m| m.is_subset(w)).cloned().collect(),
        }
    }

    /// Maximal members strictly inside `w`.
    pub fn children(&self, w: &NodeSet) -> Vec<NodeSet> {
        let inner: Vec<&NodeSet> = self.members.iter().filter(|m| m.len() < w.len() && m.is_subset(w)).collect();
        inner
            .iter()
            .filter(|m| !inner.iter().any(|p| p.len() > m.len() && m.is_subset(p)))
            .map(|m| (*m).clone())
            .collect()
    }

    /// Number of members entered by `arc`.
    pub fn entered_count(&self, arc: &Arc) -> usize {
        self.members.iter().filter(|m| arc.enters(m)).count()
    }
}

/// Every family of disjoint nonempty blocks over items `0..n`, as bit masks.
/// Includes the empty family.
pub fn subpartitions(n: usize) -> Vec<Vec<u64>> {
    fn grow(i: usize, n: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        grow(i + 1, n, cur, out);
        for b in 0..cur.len() {
            cur[b] |= 1 << i;
            grow(i + 1, n, cur, out);
            cur[b] &= !(1 << i);
        }
        cur.push(1 << i);
        grow(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    grow(0, n, &mut Vec::new(), &mut out);
    out
}

/// Arc-disjoint union of k spanning arborescences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KArborescence {
    pub arcs: ArcSet,
    pub root: Option<NodeId>,
    pub k: usize,
    pub root_vector: RootVector,
}

/// `q(v) = k - in-degree of v in f`, saturating at zero.
pub fn root_vector(d: &Digraph, f: &ArcSet, k: usize) -> Result<RootVector> {
    let mut indeg: BTreeMap<NodeId, usize> = d.nodes().iter().map(|&v| (v, 0)).collect();
    for a in d.resolve(f)? {
        *indeg.get_mut(&a.head).expect("head is a node") += 1;
    }
    Ok(indeg.into_iter().map(|(v, x)| (v, k.saturating_sub(x))).collect())
}

fn dense_arcs(d: &Digraph, arcs: &[Arc]) -> Vec<(usize, usize)> {
    arcs.iter()
        .map(|a| (d.index_of(a.tail).expect("tail is a node"), d.index_of(a.head).expect("head is a node")))
        .collect()
}

/// Whether `f` is an `s`-rooted k-arborescence of `d`.
pub fn is_rooted_k_arborescence(d: &Digraph, f: &ArcSet, s: NodeId, k: usize) -> Result<bool> {
    d.require_node(s)?;
    let arcs = d.resolve(f)?;
    if arcs.len() != k * (d.node_count() - 1) {
        return Ok(false);
    }
    let mut indeg: BTreeMap<NodeId, usize> = BTreeMap::new();
    for a in &arcs {
        *indeg.entry(a.head).or_default() += 1;
    }
    if indeg.contains_key(&s) || d.nodes().iter().any(|v| *v != s && indeg.get(v) != Some(&k)) {
        return Ok(false);
    }
    let dense = dense_arcs(d, &arcs);
    let si = d.index_of(s).expect("checked");
    Ok((0..d.node_count()).filter(|&t| t != si).all(|t| arc_connectivity(d.node_count(), &dense, si, t, k) >= k))
}

/// Root vector of `f` when it is a k-arborescence of `d` (any root vector).
pub fn is_k_arborescence(d: &Digraph, f: &ArcSet, k: usize) -> Result<Option<RootVector>> {
    let arcs = d.resolve(f)?;
    if d.node_count() == 0 || arcs.len() != k * (d.node_count() - 1) {
        return Ok(None);
    }
    let mut indeg: BTreeMap<NodeId, usize> = BTreeMap::new();
    for a in &arcs {
        *indeg.entry(a.head).or_default() += 1;
    }
    if indeg.values().any(|&x| x > k) {
        return Ok(None);
    }
    // Attach a super-root with q(v) arcs into every v and test rootedness.
    let q = root_vector(d, f, k)?;
    let n = d.node_count();
    let mut dense = dense_arcs(d, &arcs);
    for (i, v) in d.nodes().iter().enumerate() {
        dense.extend(std::iter::repeat_n((n, i), q[v]));
    }
    let ok = (0..n).all(|t| arc_connectivity(n + 1, &dense, n, t, k) >= k);
    Ok(ok.then_some(q))
}

/// Whether `f` is an `s`-rooted k-arborescence in which every member of
/// `laminar` is entered exactly k times (members containing `s` must span a
/// k-arborescence of their own).
pub fn is_l_tight(d: &Digraph, f: &ArcSet, laminar: &LaminarFamily, s: NodeId, k: usize) -> Result<bool> {
    if !is_rooted_k_arborescence(d, f, s, k)? {
        return Ok(false);
    }
    let arcs = d.resolve(f)?;
    for w in laminar.members() {
        if w.contains(&s) {
            let sub = Digraph {
                nodes: w.iter().copied().collect(),
                arcs: arcs.iter().copied().filter(|a| a.inside(w)).collect(),
            };
            if !is_rooted_k_arborescence(&sub, &sub.arc_ids(), s, k)? {
                return Ok(false);
            }
        } else if arcs.iter().filter(|a| a.enters(w)).count() != k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A digraph with a new root joined to every original node by parallel arcs.
#[derive(Clone, Debug)]
pub struct Extension {
    pub digraph: Digraph,
    pub root: NodeId,
    pub extension_arcs: ArcSet,
    pub costs: Option<Costs>,
}

/// Adds a fresh root with `alpha` parallel arcs to every node.
pub fn build_extension(d: &Digraph, alpha: usize) -> Result<Extension> {
    if alpha == 0 {
        return invalid("extension multiplicity must be at least 1");
    }
    let mut g = d.clone();
    let root = d.fresh_node();
    g.add_node(root);
    let mut extension_arcs = ArcSet::new();
    for &v in d.nodes() {
        for _ in 0..alpha {
            extension_arcs.insert(g.add_arc(root, v)?);
        }
    }
    Ok(Extension { digraph: g, root, extension_arcs, costs: None })
}

/// Extension whose new arcs all cost `beta`.
pub fn build_cost_extension(d: &Digraph, c: &Costs, alpha: usize, beta: &Rational) -> Result<Extension> {
    validate_costs(d, c)?;
    let mut ext = build_extension(d, alpha)?;
    let mut costs: Costs = d.arcs().iter().map(|a| (a.id, c[&a.id].clone())).collect();
    costs.extend(ext.extension_arcs.iter().map(|&id| (id, beta.clone())));
    ext.costs = Some(costs);
    Ok(ext)
}

/// `D_W`: every node outside `w` merged into one fresh root, loops dropped.
/// Arcs keep their ids.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub digraph: Digraph,
    pub root: NodeId,
}

pub fn contract_to_root(d: &Digraph, w: &NodeSet) -> Result<Contraction> {
    if w.is_empty() {
        return invalid("cannot contract onto an empty set");
    }
    if w.len() == d.node_count() || !w.iter().all(|&v| d.has_node(v)) {
        return invalid("contracted set must be a proper subset of the nodes");
    }
    let root = d.fresh_node();
    let mut g = Digraph::new(w.iter().copied().chain([root]));
    for a in d.arcs() {
        let tail = if w.contains(&a.tail) { a.tail } else { root };
        let head = if w.contains(&a.head) { a.head } else { root };
        if tail != head {
            g.arcs.push(Arc { id: a.id, tail, head });
        }
    }
    Ok(Contraction { digraph: g, root })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> Digraph {
        let mut d = Digraph::with_nodes(3);
        d.add_arc(0, 1).unwrap();
        d.add_arc(0, 2).unwrap();
        d.add_arc(1, 2).unwrap();
        d.add_arc(2, 1).unwrap();
        d.add_arc(0, 1).unwrap();
        d
    }

    #[test]
    fn arc_ids_are_stable_under_deletion() {
        let d = d3();
        let e = d.without_arcs(&[1]);
        assert_eq!(e.arc(2), d.arc(2));
        assert!(e.arc(1).is_none());
        assert_eq!(e.next_arc_id(), 5);
    }

    #[test]
    fn loops_and_unknown_nodes_rejected() {
        let mut d = Digraph::with_nodes(2);
        assert!(d.add_arc(1, 1).is_err());
        assert!(d.add_arc(0, 7).is_err());
    }

    #[test]
    fn rooted_checks() {
        let d = d3();
        assert!(is_rooted_k_arborescence(&d, &ArcSet::from([0, 2]), 0, 1).unwrap());
        assert!(is_rooted_k_arborescence(&d, &ArcSet::from([0, 1]), 0, 1).unwrap());
        assert!(!is_rooted_k_arborescence(&d, &ArcSet::from([2, 3]), 0, 1).unwrap());
        // {0->1, 0->2, 1->2, 2->1}: in-degree 2 at 1 and 2, 2 disjoint paths to each
        assert!(is_rooted_k_arborescence(&d, &ArcSet::from([0, 1, 2, 3]), 0, 2).unwrap());
        assert!(is_rooted_k_arborescence(&d, &ArcSet::from([0, 4, 1, 2]), 0, 2).unwrap());
        assert!(is_rooted_k_arborescence(&d, &ArcSet::from([9]), 0, 1).is_err());
    }

    #[test]
    fn unrooted_check_reports_root_vector() {
        let d = d3();
        let q = is_k_arborescence(&d, &ArcSet::from([2]), 1).unwrap();
        assert!(q.is_none());
        let q = is_k_arborescence(&d, &ArcSet::from([3, 2]), 1).unwrap();
        assert!(q.is_none(), "a 2-cycle is not a spanning arborescence");
        let q = is_k_arborescence(&d, &ArcSet::from([0, 2]), 1).unwrap().unwrap();
        assert_eq!(q, RootVector::from([(0, 1), (1, 0), (2, 0)]));
        assert_eq!(q.values().sum::<usize>(), 1);
    }

    #[test]
    fn laminar_family_basics() {
        let u = NodeSet::from([0, 1, 2, 3]);
        assert!(LaminarFamily::new(u.clone(), [NodeSet::from([0, 1]), NodeSet::from([1, 2])]).is_err());
        let l = LaminarFamily::new(u.clone(), [NodeSet::from([0, 1, 2]), NodeSet::from([0, 1])]).unwrap();
        let n = l.normalized();
        assert_eq!(n.len(), 2 + 4 + 1);
        assert_eq!(n.children(&u), vec![NodeSet::from([3]), NodeSet::from([0, 1, 2])]);
        assert_eq!(n.children(&NodeSet::from([0, 1, 2])), vec![NodeSet::from([2]), NodeSet::from([0, 1])]);
        assert_eq!(n.restricted_to(&NodeSet::from([0, 1])).len(), 3);
    }

    #[test]
    fn extension_and_contraction() {
        let d = d3();
        let ext = build_extension(&d, 2).unwrap();
        assert_eq!(ext.root, 3);
        assert_eq!(ext.extension_arcs.len(), 6);
        assert_eq!(ext.digraph.arc_count(), 11);
        let c = contract_to_root(&ext.digraph, &NodeSet::from([1, 2])).unwrap();
        assert_eq!(c.root, 4);
        // arcs 0,1,4 and the four copies into 1,2 become root arcs; 2,3 stay inside
        let from_root = c.digraph.arcs().iter().filter(|a| a.tail == c.root).count();
        assert_eq!(from_root, 3 + 4);
        assert_eq!(c.digraph.arc(2).unwrap(), Arc { id: 2, tail: 1, head: 2 });
        assert!(contract_to_root(&ext.digraph, &NodeSet::new()).is_err());
    }

    #[test]
    fn subpartition_counts_are_bell_numbers() {
        // subpartitions of n items = partitions of n + 1 items
        let counts: Vec<usize> = (0..6).map(|n| subpartitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn rational_text_form() {
        let x = parse_rational("6/4").unwrap();
        assert_eq!(format_rational(&x), "3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5/1");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
