//! Matroids of laminar-tight k-arborescences on the in-stars of laminar
//! members, the set functions behind them, and root-vector checks.
//!
//! For a member `W`, the bases of `M_W` are the k-subsets of arcs entering
//! `W` that extend to an `L[W]`-tight rooted k-arborescence of the digraph
//! obtained by contracting everything outside `W` into a root.

use crate::arb::{exists_matroid_restricted_k_arb, min_cost_rooted_generic, min_cost_rooted_k_arb, InStarMatroids};
use crate::error::{invalid, Error, Result};
use crate::graph::{
    build_extension, contract_to_root, subpartitions, validate_costs, ArcId, ArcSet, Costs, Digraph, LaminarFamily,
    NodeId, NodeSet, RootVector,
};
use crate::matroid::{Element, Matroid, RankFn};
use crate::oracle::{optimal_root_vectors, OracleBounds};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc as Shared, Mutex};

/// Largest number of children for the recursive rank formula.
pub const MAX_RECURSIVE_CHILDREN: usize = 8;

pub struct TightMatroidContext {
    pub extended: Digraph,
    pub root: NodeId,
    pub laminar: LaminarFamily,
    pub k: usize,
    cache: Mutex<HashMap<(NodeSet, Vec<ArcId>), usize>>,
}

impl TightMatroidContext {
    /// Extends `d` by `|A| + k` parallel arcs from a new root to every node
    /// and normalizes `laminar` (whole node set and singletons added).
    pub fn new(d: &Digraph, laminar: &LaminarFamily, k: usize) -> Result<Self> {
        Self::with_alpha(d, laminar, k, d.arc_count() + k)
    }

    /// Same with a chosen multiplicity of root arcs. Fails when no tight
    /// rooted k-arborescence exists.
    pub fn with_alpha(d: &Digraph, laminar: &LaminarFamily, k: usize, alpha: usize) -> Result<Self> {
        if k == 0 {
            return invalid("k must be positive");
        }
        let ext = build_extension(d, alpha)?;
        let ctx = TightMatroidContext {
            extended: ext.digraph,
            root: ext.root,
            laminar: laminar.over(d.node_set())?.normalized(),
            k,
            cache: Mutex::new(HashMap::new()),
        };
        if !crate::arb::exists_l_tight(&ctx.extended, ctx.root, k, &ctx.laminar)? {
            return invalid("no laminar-tight k-arborescence in the extension");
        }
        Ok(ctx)
    }

    /// The context after deleting arcs. The tight-existence check is not
    /// repeated; rank queries fail on members that lose it.
    pub fn without_arcs(&self, ids: &ArcSet) -> TightMatroidContext {
        TightMatroidContext {
            extended: self.extended.without_arcs(ids),
            root: self.root,
            laminar: self.laminar.clone(),
            k: self.k,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn check_member(&self, w: &NodeSet) -> Result<()> {
        if self.laminar.contains(w) {
            Ok(())
        } else {
            invalid(format!("{w:?} is not a laminar member"))
        }
    }

    /// Arcs of the extension entering `w`, sorted by id.
    pub fn in_star(&self, w: &NodeSet) -> Vec<ArcId> {
        self.extended.entering(w).map(|a| a.id).collect()
    }

    fn check_in_star(&self, w: &NodeSet, e: &[ArcId]) -> Result<Vec<ArcId>> {
        self.check_member(w)?;
        let star = self.in_star(w);
        let mut set: Vec<ArcId> = e.to_vec();
        set.sort_unstable();
        set.dedup();
        if let Some(x) = set.iter().find(|x| star.binary_search(x).is_err()) {
            return invalid(format!("arc {x} does not enter {w:?}"));
        }
        Ok(set)
    }

    /// Minimum of the two-level objective on the contraction onto `w`:
    /// (members of `L[w]` entered, scaled) minus arcs of `e` used.
    fn tight_optimum(&self, w: &NodeSet, e: &[ArcId]) -> Result<Option<usize>> {
        let c = contract_to_root(&self.extended, w)?;
        let inner = self.laminar.restricted_to(w);
        let big = c.digraph.arc_count() as i64 + 1;
        let weights: HashMap<ArcId, i64> = c
            .digraph
            .arcs()
            .iter()
            .map(|a| (a.id, big * inner.entered_count(a) as i64 - i64::from(e.binary_search(&a.id).is_ok())))
            .collect();
        let Some((_, cost)) = min_cost_rooted_generic(&c.digraph, c.root, self.k, &|id| weights[&id])? else {
            return Ok(None);
        };
        let tight = big * (self.k * inner.len()) as i64;
        // every member is entered at least k times and the secondary term
        // lies in (-big, 0], so the optimum is tight exactly when cost <= tight
        Ok((cost <= tight).then(|| (tight - cost) as usize))
    }

    pub fn has_tight_arborescence(&self, w: &NodeSet) -> Result<bool> {
        self.check_member(w)?;
        Ok(self.tight_optimum(w, &[])?.is_some())
    }

    /// Rank of `e` in `M_w`, by one minimum-cost rooted k-arborescence call.
    pub fn rank(&self, w: &NodeSet, e: &[ArcId]) -> Result<usize> {
        let set = self.check_in_star(w, e)?;
        let key = (w.clone(), set);
        if let Some(&r) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(r);
        }
        let r =
            self.tight_optimum(w, &key.1)?.ok_or_else(|| Error::Invalid(format!("no tight arborescence for {w:?}")))?;
        self.cache.lock().expect("cache lock").insert(key, r);
        Ok(r)
    }

    /// Rank of `e` in `M_w` through the recursion over compatible
    /// subpartitions of `w` (cross-check only; exponential).
    pub fn rank_recursive(&self, w: &NodeSet, e: &[ArcId]) -> Result<usize> {
        let set = self.check_in_star(w, e)?;
        if w.len() == 1 {
            return Ok(set.len().min(self.k));
        }
        let children = self.laminar.children(w);
        if children.len() > MAX_RECURSIVE_CHILDREN {
            return Err(Error::Bound(format!(
                "{} children exceed the recursive bound {MAX_RECURSIVE_CHILDREN}; use the direct rank",
                children.len()
            )));
        }
        let pool: Vec<crate::graph::Arc> =
            self.extended.arcs().iter().filter(|a| a.inside(w) || set.binary_search(&a.id).is_ok()).copied().collect();
        let k = self.k as i64;
        let mut memo: HashMap<u64, i64> = HashMap::new();
        let mut best = k;
        for blocks in subpartitions(children.len()) {
            let mut total = -k * (blocks.len() as i64 - 1);
            for &b in &blocks {
                if let Some(v) = memo.get(&b) {
                    total += v;
                    continue;
                }
                let x: NodeSet =
                    (0..children.len()).filter(|i| b >> i & 1 == 1).flat_map(|i| children[i].iter().copied()).collect();
                let mut v = 0i64;
                for (_, y) in children.iter().enumerate().filter(|(i, _)| b >> i & 1 == 1) {
                    let into_y: Vec<ArcId> =
                        pool.iter().filter(|a| a.enters(&x) && y.contains(&a.head)).map(|a| a.id).collect();
                    v += self.rank_recursive(y, &into_y)? as i64;
                }
                memo.insert(b, v);
                total += v;
            }
            best = best.min(total);
        }
        Ok(best.max(0) as usize)
    }
}

/// Replaces arc `a = uv` by `u -> x`, `x -> v` and `k - 1` copies of `v -> x`
/// for a new node `x`, and grows every member containing `v` by `x`.
/// Returns the new digraph, family and node.
pub fn mandatory_arc_transform(
    d: &Digraph,
    laminar: &LaminarFamily,
    s: NodeId,
    a: ArcId,
    k: usize,
) -> Result<(Digraph, LaminarFamily, NodeId)> {
    let arc = d.arc(a).ok_or_else(|| Error::Invalid(format!("unknown arc {a}")))?;
    if arc.tail == s || arc.head == s {
        return invalid("the transformed arc must avoid the root");
    }
    if !laminar.contains(&NodeSet::from([arc.head])) {
        return invalid("the head of the transformed arc must be a singleton member");
    }
    if k == 0 {
        return invalid("k must be positive");
    }
    let mut g = d.without_arcs(&[a]);
    let x = d.fresh_node();
    g.add_node(x);
    g.add_arc(arc.tail, x)?;
    g.add_arc(x, arc.head)?;
    for _ in 1..k {
        g.add_arc(arc.head, x)?;
    }
    let mut universe = laminar.universe().clone();
    universe.insert(x);
    let members = laminar.members().iter().map(|w| {
        let mut w = w.clone();
        if w.contains(&arc.head) {
            w.insert(x);
        }
        w
    });
    Ok((g, LaminarFamily::new(universe, members)?, x))
}

/// Root vectors of minimum-cost k-arborescences, by enumeration.
pub fn root_vectors_of_optima(d: &Digraph, c: &Costs, k: usize, bounds: OracleBounds) -> Result<Vec<RootVector>> {
    optimal_root_vectors(d, c, k, bounds)
}

fn compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(parts - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Root vectors of minimum-cost k-arborescences, by optimization: a vector
/// `q` qualifies when a root joined to each `v` by `q(v)` free arcs admits
/// a rooted k-arborescence of the optimal cost.
pub fn root_vectors_by_optimization(d: &Digraph, c: &Costs, k: usize) -> Result<Vec<RootVector>> {
    validate_costs(d, c)?;
    let Some(opt) = crate::arb::min_cost_k_arb(d, c, k)? else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for q in compositions(d.node_count(), k) {
        let mut g = d.clone();
        let root = d.fresh_node();
        g.add_node(root);
        let mut costs = c.clone();
        for (&v, &m) in d.nodes().iter().zip(&q) {
            for _ in 0..m {
                costs.insert(g.add_arc(root, v)?, Default::default());
            }
        }
        if let Some(best) = min_cost_rooted_k_arb(&g, &costs, root, k)? {
            if best.cost == opt.cost {
                out.push(d.nodes().iter().copied().zip(q).collect());
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Integer exchange property of a set of vectors over the same keys: for
/// `q != q'` and `v` with `q(v) > q'(v)` there is `u` with `q(u) < q'(u)`
/// and `q - v + u` in the set.
pub fn exchange_property_holds(vectors: &[RootVector]) -> bool {
    let set: BTreeSet<&RootVector> = vectors.iter().collect();
    vectors.iter().all(|q| {
        vectors.iter().filter(|p| *p != q).all(|p| {
            q.keys().filter(|v| q[v] > p[v]).all(|v| {
                q.keys().filter(|u| q[u] < p[u]).any(|u| {
                    let mut moved = q.clone();
                    *moved.get_mut(v).expect("key") -= 1;
                    *moved.get_mut(u).expect("key") += 1;
                    set.contains(&moved)
                })
            })
        })
    })
}

/// Set functions on the arcs leaving `s`, built from matroids of rank k on
/// the in-stars of the other nodes.
pub struct PFunction {
    pub digraph: Digraph,
    pub root: NodeId,
    pub k: usize,
    matroids: BTreeMap<NodeId, Shared<dyn Matroid>>,
    out_star: Vec<ArcId>,
    others: Vec<NodeId>,
    cache: Mutex<HashMap<u64, i64>>,
}

/// Largest node count and out-star size for the exhaustive sweeps.
pub const MAX_P_NODES: usize = 8;
pub const MAX_P_ARCS: usize = 12;

impl PFunction {
    /// Arcs entering `s` are dropped. Each matroid must live on the in-star
    /// of its node and have rank k.
    pub fn new(d: &Digraph, s: NodeId, k: usize, matroids: BTreeMap<NodeId, Shared<dyn Matroid>>) -> Result<Self> {
        d.require_node(s)?;
        let digraph = d.filter_arcs(|a| a.head != s);
        let others: Vec<NodeId> = digraph.nodes().iter().copied().filter(|&v| v != s).collect();
        for &v in &others {
            let Some(m) = matroids.get(&v) else { return invalid(format!("no matroid for node {v}")) };
            let star: Vec<ArcId> = digraph.arcs().iter().filter(|a| a.head == v).map(|a| a.id).collect();
            if m.ground_set() != star.as_slice() {
                return invalid(format!("matroid at node {v} is not on its in-star"));
            }
            if m.rank(&star) != k {
                return invalid(format!("matroid at node {v} does not have rank {k}"));
            }
        }
        let out_star: Vec<ArcId> = digraph.arcs().iter().filter(|a| a.tail == s).map(|a| a.id).collect();
        if others.len() > MAX_P_NODES || out_star.len() > MAX_P_ARCS {
            return Err(Error::Bound("instance too large for the set-function sweeps".into()));
        }
        Ok(PFunction { digraph, root: s, k, matroids, out_star, others, cache: Mutex::new(HashMap::new()) })
    }

    pub fn out_star(&self) -> &[ArcId] {
        &self.out_star
    }

    fn mask(&self, e: &ArcSet) -> Result<u64> {
        let mut m = 0;
        for id in e {
            match self.out_star.binary_search(id) {
                Ok(i) => m |= 1 << i,
                Err(_) => return invalid(format!("arc {id} does not leave the root")),
            }
        }
        Ok(m)
    }

    fn set_of(&self, mask: u64) -> ArcSet {
        (0..self.out_star.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.out_star[i]).collect()
    }

    fn nodes_of(&self, mask: u64) -> NodeSet {
        (0..self.others.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.others[i]).collect()
    }

    /// Direct-sum rank of arcs, summed over heads.
    pub fn rank_sum(&self, arcs: impl IntoIterator<Item = ArcId>) -> usize {
        let mut by_head: BTreeMap<NodeId, Vec<Element>> = BTreeMap::new();
        for id in arcs {
            let a = self.digraph.arc(id).expect("arc of the digraph");
            by_head.entry(a.head).or_default().push(id);
        }
        by_head.iter().map(|(v, ids)| self.matroids[v].rank(ids)).sum()
    }

    /// `k - rank_sum(arcs entering X, arcs in `skip` and, if `inside_only`,
    /// arcs from the root excluded)` for every node mask `X` over `V - s`.
    fn deficits(&self, keep: impl Fn(ArcId) -> bool) -> Vec<i64> {
        (0..1u64 << self.others.len())
            .map(|m| {
                let x = self.nodes_of(m);
                let arcs = self.digraph.entering(&x).map(|a| a.id).filter(|&id| keep(id));
                self.k as i64 - self.rank_sum(arcs) as i64
            })
            .collect()
    }

    /// Best sum of `g` over subpartitions of the node mask `full`.
    fn best_subpartition(g: &[i64], full: u64, better: impl Fn(i64, i64) -> bool) -> i64 {
        let mut best = vec![0i64; (full + 1) as usize];
        for m in 1..=full {
            if m & !full != 0 {
                continue;
            }
            let low = m & m.wrapping_neg();
            let mut b = best[(m & !low) as usize];
            let rest = m & !low;
            let mut sub = rest;
            loop {
                let block = sub | low;
                let v = g[block as usize] + best[(m & !block) as usize];
                if better(v, b) {
                    b = v;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            best[m as usize] = b;
        }
        best[full as usize]
    }

    /// `max_X k - rank_sum(arcs of D - E entering X)` over nonempty `X ⊆ V - s`.
    pub fn p_value(&self, e: &ArcSet) -> Result<i64> {
        let m = self.mask(e)?;
        if let Some(&v) = self.cache.lock().expect("cache lock").get(&m) {
            return Ok(v);
        }
        let g = self.deficits(|id| !e.contains(&id));
        let v = g[1..].iter().copied().max().unwrap_or(i64::MIN);
        self.cache.lock().expect("cache lock").insert(m, v);
        Ok(v)
    }

    /// Truncation as the best subpartition sum of the deficits.
    pub fn p_truncation(&self, e: &ArcSet) -> Result<i64> {
        self.mask(e)?;
        let g = self.deficits(|id| !e.contains(&id));
        Ok(Self::best_subpartition(&g, (1 << self.others.len()) - 1, |a, b| a > b))
    }

    /// Truncation from its definition: best sum of `p` over partitions of `e`.
    pub fn p_truncation_by_partitions(&self, e: &ArcSet) -> Result<i64> {
        let full = self.mask(e)?;
        let mut values = vec![0i64; (full + 1) as usize];
        let mut sub = full;
        while sub != 0 {
            values[sub as usize] = self.p_value(&self.set_of(sub))?;
            sub = (sub - 1) & full;
        }
        Ok(Self::best_subpartition(&values, full, |a, b| a > b))
    }

    /// Every nonempty `X ⊆ V - s` has `rank_sum(arcs entering X) >= k`.
    pub fn condition_a(&self) -> bool {
        self.deficits(|_| true)[1..].iter().all(|&g| g <= 0)
    }

    /// Every subpartition of `V - s` has deficit sum at most k, counting only
    /// arcs inside `V - s`.
    pub fn condition_b(&self) -> bool {
        let root_arcs: ArcSet = self.out_star.iter().copied().collect();
        let g = self.deficits(|id| !root_arcs.contains(&id));
        Self::best_subpartition(&g, (1 << self.others.len()) - 1, |a, b| a > b) <= self.k as i64
    }

    /// Rank of `e` in the matroid of root out-stars, by the subpartition formula.
    pub fn rank_s(&self, e: &ArcSet) -> Result<usize> {
        self.mask(e)?;
        let root_arcs: ArcSet = self.out_star.iter().copied().collect();
        let k = self.k as i64;
        // rank_sum - k per block, minimised, plus k for the empty family
        let g: Vec<i64> =
            self.deficits(|id| !root_arcs.contains(&id) || e.contains(&id)).into_iter().map(|d| -d).collect();
        let v = Self::best_subpartition(&g, (1 << self.others.len()) - 1, |a, b| a < b) + k;
        Ok(v.max(0) as usize)
    }

    /// k-subsets of the root out-star that extend to a matroid-restricted
    /// rooted k-arborescence.
    pub fn bases(&self) -> Result<Vec<ArcSet>> {
        let n = self.out_star.len();
        let mut out = Vec::new();
        for m in 0u64..1 << n {
            if m.count_ones() as usize != self.k {
                continue;
            }
            let chosen = self.set_of(m);
            let g = self.digraph.filter_arcs(|a| a.tail != self.root || chosen.contains(&a.id));
            let mut family: BTreeMap<NodeId, Box<dyn Matroid>> = BTreeMap::new();
            for &v in g.nodes() {
                let star: Vec<ArcId> = g.arcs().iter().filter(|a| a.head == v).map(|a| a.id).collect();
                let inner = self.matroids.get(&v).cloned();
                family.insert(
                    v,
                    Box::new(RankFn::new(star, move |set: &[Element]| match &inner {
                        Some(m) => m.rank(set),
                        None => 0,
                    })),
                );
            }
            if exists_matroid_restricted_k_arb(&g, InStarMatroids { matroids: family }, self.k)? {
                out.push(chosen);
            }
        }
        Ok(out)
    }
}
