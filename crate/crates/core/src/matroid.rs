//! Matroids presented by rank queries, and matroid intersection.
//!
//! Elements are plain integers (arc ids in practice). Sets are passed as
//! slices without duplicates.

use crate::error::{invalid, Error, Result};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

pub type Element = usize;

pub trait Matroid: Send + Sync {
    /// Sorted ground set.
    fn ground_set(&self) -> &[Element];

    fn rank(&self, set: &[Element]) -> usize;

    fn is_independent(&self, set: &[Element]) -> bool {
        self.rank(set) == set.len()
    }

    /// Rank query that rejects elements outside the ground set.
    fn checked_rank(&self, set: &[Element]) -> Result<usize> {
        if let Some(x) = set.iter().find(|x| self.ground_set().binary_search(x).is_err()) {
            return invalid(format!("element {x} is outside the ground set"));
        }
        Ok(self.rank(set))
    }

    /// For each candidate `x` outside the independent set `indep`: `None`
    /// when `indep + x` is independent, otherwise the elements `y` of `indep`
    /// with `indep - y + x` independent (the fundamental circuit minus `x`).
    fn exchanges(&self, indep: &[Element], candidates: &[Element]) -> Vec<Option<Vec<Element>>> {
        let mut with: Vec<Element> = indep.to_vec();
        with.push(0);
        candidates
            .iter()
            .map(|&x| {
                *with.last_mut().expect("nonempty") = x;
                if self.is_independent(&with) {
                    return None;
                }
                let circuit = (0..indep.len())
                    .filter(|&i| {
                        let mut swapped = with.clone();
                        swapped.swap_remove(i);
                        self.is_independent(&swapped)
                    })
                    .map(|i| indep[i])
                    .collect();
                Some(circuit)
            })
            .collect()
    }
}

fn sorted_ground(elems: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let set: BTreeSet<Element> = elems.into_iter().collect();
    set.into_iter().collect()
}

pub fn uniform_rank(set: &[Element], k: usize) -> usize {
    set.len().min(k)
}

#[derive(Clone, Debug)]
pub struct UniformMatroid {
    ground: Vec<Element>,
    k: usize,
}

impl UniformMatroid {
    pub fn new(ground: impl IntoIterator<Item = Element>, k: usize) -> Self {
        UniformMatroid { ground: sorted_ground(ground), k }
    }
}

impl Matroid for UniformMatroid {
    fn ground_set(&self) -> &[Element] {
        &self.ground
    }
    fn rank(&self, set: &[Element]) -> usize {
        uniform_rank(set, self.k)
    }
}

/// Rank `sum_b min(|X ∩ B_b|, cap_b)` over disjoint blocks.
#[derive(Clone, Debug)]
pub struct PartitionMatroid {
    ground: Vec<Element>,
    block_of: HashMap<Element, usize>,
    caps: Vec<usize>,
}

pub fn partition_oracle(blocks: Vec<Vec<Element>>, caps: Vec<usize>) -> Result<PartitionMatroid> {
    if blocks.len() != caps.len() {
        return invalid("partition matroid needs one capacity per block");
    }
    let mut block_of = HashMap::new();
    for (b, block) in blocks.iter().enumerate() {
        for &x in block {
            if block_of.insert(x, b).is_some() {
                return invalid(format!("element {x} appears in two blocks"));
            }
        }
    }
    Ok(PartitionMatroid { ground: sorted_ground(block_of.keys().copied()), block_of, caps })
}

impl Matroid for PartitionMatroid {
    fn ground_set(&self) -> &[Element] {
        &self.ground
    }

    fn rank(&self, set: &[Element]) -> usize {
        let mut used = vec![0usize; self.caps.len()];
        for x in set {
            if let Some(&b) = self.block_of.get(x) {
                used[b] += 1;
            }
        }
        used.iter().zip(&self.caps).map(|(u, c)| (*u).min(*c)).sum()
    }

    fn exchanges(&self, indep: &[Element], candidates: &[Element]) -> Vec<Option<Vec<Element>>> {
        let mut used = vec![0usize; self.caps.len()];
        for x in indep {
            used[self.block_of[x]] += 1;
        }
        candidates
            .iter()
            .map(|x| match self.block_of.get(x) {
                Some(&b) if used[b] < self.caps[b] => None,
                Some(&b) => Some(indep.iter().copied().filter(|y| self.block_of[y] == b).collect()),
                None => Some(Vec::new()),
            })
            .collect()
    }
}

/// Direct sum of matroids on disjoint ground sets.
pub struct DirectSum {
    ground: Vec<Element>,
    part_of: HashMap<Element, usize>,
    parts: Vec<Box<dyn Matroid>>,
}

pub fn direct_sum(parts: Vec<Box<dyn Matroid>>) -> Result<DirectSum> {
    let mut part_of = HashMap::new();
    for (i, m) in parts.iter().enumerate() {
        for &x in m.ground_set() {
            if part_of.insert(x, i).is_some() {
                return invalid(format!("element {x} is in two summands"));
            }
        }
    }
    Ok(DirectSum { ground: sorted_ground(part_of.keys().copied()), part_of, parts })
}

impl DirectSum {
    fn split(&self, set: &[Element]) -> Vec<Vec<Element>> {
        let mut by_part = vec![Vec::new(); self.parts.len()];
        for x in set {
            if let Some(&i) = self.part_of.get(x) {
                by_part[i].push(*x);
            }
        }
        by_part
    }
}

impl Matroid for DirectSum {
    fn ground_set(&self) -> &[Element] {
        &self.ground
    }

    fn rank(&self, set: &[Element]) -> usize {
        self.split(set).iter().zip(&self.parts).map(|(s, m)| m.rank(s)).sum()
    }

    fn exchanges(&self, indep: &[Element], candidates: &[Element]) -> Vec<Option<Vec<Element>>> {
        let by_part = self.split(indep);
        candidates
            .iter()
            .map(|x| match self.part_of.get(x) {
                Some(&i) => self.parts[i].exchanges(&by_part[i], &[*x]).pop().expect("one answer"),
                None => Some(Vec::new()),
            })
            .collect()
    }
}

/// Truncation to rank `min(r, k)`.
pub struct KShortening {
    inner: Box<dyn Matroid>,
    k: usize,
}

pub fn k_shorten(inner: Box<dyn Matroid>, k: usize) -> KShortening {
    KShortening { inner, k }
}

impl Matroid for KShortening {
    fn ground_set(&self) -> &[Element] {
        self.inner.ground_set()
    }
    fn rank(&self, set: &[Element]) -> usize {
        self.inner.rank(set).min(self.k)
    }
}

/// Matroid given by an arbitrary rank function.
pub struct RankFn<F> {
    ground: Vec<Element>,
    rank: F,
}

impl<F: Fn(&[Element]) -> usize + Send + Sync> RankFn<F> {
    pub fn new(ground: impl IntoIterator<Item = Element>, rank: F) -> Self {
        RankFn { ground: sorted_ground(ground), rank }
    }
}

impl<F: Fn(&[Element]) -> usize + Send + Sync> Matroid for RankFn<F> {
    fn ground_set(&self) -> &[Element] {
        &self.ground
    }
    fn rank(&self, set: &[Element]) -> usize {
        (self.rank)(set)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Edge endpoints re-indexed densely.
#[derive(Clone, Debug)]
struct EdgeTable {
    ground: Vec<Element>,
    ends: HashMap<Element, (usize, usize)>,
    nodes: usize,
}

impl EdgeTable {
    fn new(edges: &BTreeMap<Element, (usize, usize)>) -> Self {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut ends = HashMap::new();
        for (&e, &(u, v)) in edges {
            let n = index.len();
            let iu = *index.entry(u).or_insert(n);
            let n = index.len();
            let iv = *index.entry(v).or_insert(n);
            ends.insert(e, (iu, iv));
        }
        EdgeTable { ground: edges.keys().copied().collect(), ends, nodes: index.len() }
    }
}

pub fn graphic_rank(edges: &[(usize, usize)]) -> usize {
    let table: BTreeMap<Element, (usize, usize)> = edges.iter().copied().enumerate().collect();
    let ids: Vec<Element> = (0..edges.len()).collect();
    GraphicMatroid::new(table).rank(&ids)
}

pub fn k_fold_graphic_rank(edges: &[(usize, usize)], k: usize) -> usize {
    let table: BTreeMap<Element, (usize, usize)> = edges.iter().copied().enumerate().collect();
    let ids: Vec<Element> = (0..edges.len()).collect();
    KFoldGraphic::new(table, k).rank(&ids)
}

#[derive(Clone, Debug)]
pub struct GraphicMatroid {
    table: EdgeTable,
}

impl GraphicMatroid {
    pub fn new(edges: BTreeMap<Element, (usize, usize)>) -> Self {
        GraphicMatroid { table: EdgeTable::new(&edges) }
    }
}

impl Matroid for GraphicMatroid {
    fn ground_set(&self) -> &[Element] {
        &self.table.ground
    }
    fn rank(&self, set: &[Element]) -> usize {
        let mut uf = UnionFind::new(self.table.nodes);
        set.iter().filter_map(|e| self.table.ends.get(e)).filter(|&&(u, v)| uf.union(u, v)).count()
    }
}

/// Union of k copies of a graphic matroid: edge sets that split into k forests.
#[derive(Clone, Debug)]
pub struct KFoldGraphic {
    table: EdgeTable,
    k: usize,
}

impl KFoldGraphic {
    pub fn new(edges: BTreeMap<Element, (usize, usize)>, k: usize) -> Self {
        KFoldGraphic { table: EdgeTable::new(&edges), k }
    }

    fn packing(&self) -> ForestPacking<'_> {
        ForestPacking {
            table: &self.table,
            forest_of: HashMap::new(),
            adj: vec![vec![Vec::new(); self.table.nodes]; self.k],
        }
    }
}

/// k forests packed greedily with matroid-partition augmenting paths.
struct ForestPacking<'a> {
    table: &'a EdgeTable,
    forest_of: HashMap<Element, usize>,
    adj: Vec<Vec<Vec<(usize, Element)>>>,
}

enum Augment {
    Path(Vec<(Element, usize)>),
    Blocked(Vec<Element>),
}

impl ForestPacking<'_> {
    /// Edges of forest `i` on its path between `u` and `v`, or `None` when
    /// they are in different components.
    fn tree_path(&self, i: usize, u: usize, v: usize) -> Option<Vec<Element>> {
        let adj = &self.adj[i];
        let mut pred: Vec<Option<(usize, Element)>> = vec![None; adj.len()];
        let mut seen = vec![false; adj.len()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                let mut path = Vec::new();
                let mut y = v;
                while let Some((p, e)) = pred[y] {
                    path.push(e);
                    y = p;
                }
                return Some(path);
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    pred[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Shortest augmenting path for `start`, as (edge, destination forest)
    /// moves; otherwise every edge reachable from `start`.
    fn search(&self, start: Element) -> Augment {
        let mut label: HashMap<Element, (Element, usize)> = HashMap::new();
        let mut seen: BTreeSet<Element> = BTreeSet::from([start]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let (u, v) = self.table.ends[&f];
            let own = self.forest_of.get(&f).copied();
            for i in (0..self.adj.len()).filter(|&i| Some(i) != own) {
                match self.tree_path(i, u, v) {
                    None => {
                        let mut moves = vec![(f, i)];
                        let mut cur = f;
                        while cur != start {
                            let (parent, forest) = label[&cur];
                            moves.push((parent, forest));
                            cur = parent;
                        }
                        return Augment::Path(moves);
                    }
                    Some(path) => {
                        for g in path {
                            if seen.insert(g) {
                                label.insert(g, (f, i));
                                order.push(g);
                                queue.push_back(g);
                            }
                        }
                    }
                }
            }
        }
        Augment::Blocked(order)
    }

    fn apply(&mut self, moves: &[(Element, usize)]) {
        for &(e, _) in moves {
            if let Some(old) = self.forest_of.remove(&e) {
                let (u, v) = self.table.ends[&e];
                self.adj[old][u].retain(|&(_, x)| x != e);
                self.adj[old][v].retain(|&(_, x)| x != e);
            }
        }
        for &(e, i) in moves {
            let (u, v) = self.table.ends[&e];
            self.forest_of.insert(e, i);
            self.adj[i][u].push((v, e));
            self.adj[i][v].push((u, e));
        }
    }

    fn insert(&mut self, e: Element) -> bool {
        match self.search(e) {
            Augment::Path(moves) => {
                self.apply(&moves);
                true
            }
            Augment::Blocked(_) => false,
        }
    }
}

impl Matroid for KFoldGraphic {
    fn ground_set(&self) -> &[Element] {
        &self.table.ground
    }

    fn rank(&self, set: &[Element]) -> usize {
        let mut p = self.packing();
        set.iter().filter(|e| self.table.ends.contains_key(e)).filter(|&&e| p.insert(e)).count()
    }

    fn exchanges(&self, indep: &[Element], candidates: &[Element]) -> Vec<Option<Vec<Element>>> {
        let mut p = self.packing();
        for &e in indep {
            let placed = p.insert(e);
            debug_assert!(placed, "exchanges called with a dependent set");
        }
        candidates
            .iter()
            .map(|&x| match p.search(x) {
                Augment::Path(_) => None,
                // Everything reachable from x lies on its circuit and vice versa.
                Augment::Blocked(reach) => Some(reach.into_iter().filter(|&y| y != x).collect()),
            })
            .collect()
    }
}

/// Ordered, exactly comparable weights for intersection.
pub trait Weight: Clone + Ord + Debug + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {}
impl<T: Clone + Ord + Debug + Zero + Add<Output = T> + Sub<Output = T> + Neg<Output = T>> Weight for T {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonIndependentSet<T> {
    pub elements: Vec<Element>,
    pub cost: T,
}

struct ExchangeGraph {
    succ: Vec<Vec<usize>>,
    sources: Vec<bool>,
    sinks: Vec<bool>,
}

fn exchange_graph(m1: &dyn Matroid, m2: &dyn Matroid, ground: &[Element], inside: &[bool]) -> ExchangeGraph {
    let n = ground.len();
    let pos: HashMap<Element, usize> = ground.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let indep: Vec<Element> = (0..n).filter(|&i| inside[i]).map(|i| ground[i]).collect();
    let outside: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
    let cands: Vec<Element> = outside.iter().map(|&i| ground[i]).collect();
    let ex1 = m1.exchanges(&indep, &cands);
    let ex2 = m2.exchanges(&indep, &cands);
    let mut g = ExchangeGraph { succ: vec![Vec::new(); n], sources: vec![false; n], sinks: vec![false; n] };
    for (j, &x) in outside.iter().enumerate() {
        match &ex1[j] {
            None => g.sources[x] = true,
            Some(ys) => ys.iter().for_each(|y| g.succ[pos[y]].push(x)),
        }
        match &ex2[j] {
            None => g.sinks[x] = true,
            Some(ys) => g.succ[x].extend(ys.iter().map(|y| pos[y])),
        }
    }
    for s in &mut g.succ {
        s.sort_unstable();
    }
    g
}

fn check_grounds(m1: &dyn Matroid, m2: &dyn Matroid) -> Result<Vec<Element>> {
    if m1.ground_set() != m2.ground_set() {
        return invalid("matroids have different ground sets");
    }
    Ok(m1.ground_set().to_vec())
}

/// Maximum-cardinality common independent set (shortest augmenting paths).
pub fn matroid_intersection_max(m1: &dyn Matroid, m2: &dyn Matroid) -> Result<Vec<Element>> {
    let ground = check_grounds(m1, m2)?;
    let n = ground.len();
    let mut inside = vec![false; n];
    loop {
        let g = exchange_graph(m1, m2, &ground, &inside);
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = g.sources.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| g.sources[i]).collect();
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if g.sinks[u] {
                end = Some(u);
                break;
            }
            for &v in &g.succ[u] {
                if !seen[v] {
                    seen[v] = true;
                    pred[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        let Some(mut v) = end else { break };
        loop {
            inside[v] = !inside[v];
            match pred[v] {
                Some(u) => v = u,
                None => break,
            }
        }
    }
    Ok((0..n).filter(|&i| inside[i]).map(|i| ground[i]).collect())
}

/// Minimum-weight common independent set of exactly `target` elements, or
/// `None` when no common independent set is that large.
///
/// Successive shortest augmenting paths: each step takes a path of least
/// length, then fewest arcs, so every intermediate set is of least weight
/// among common independent sets of its size.
pub fn matroid_intersection_min_cost<T: Weight>(
    m1: &dyn Matroid,
    m2: &dyn Matroid,
    weight: &dyn Fn(Element) -> T,
    target: usize,
) -> Result<Option<CommonIndependentSet<T>>> {
    let ground = check_grounds(m1, m2)?;
    let n = ground.len();
    let w: Vec<T> = ground.iter().map(|&x| weight(x)).collect();
    let mut inside = vec![false; n];
    for _ in 0..target {
        let g = exchange_graph(m1, m2, &ground, &inside);
        let len = |i: usize, inside: &[bool]| if inside[i] { -w[i].clone() } else { w[i].clone() };
        let mut dist: Vec<Option<(T, usize)>> = (0..n).map(|i| g.sources[i].then(|| (len(i, &inside), 0))).collect();
        let mut pred: Vec<Option<usize>> = vec![None; n];
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                let Some((du, hu)) = dist[u].clone() else { continue };
                for &v in &g.succ[u] {
                    let cand = (du.clone() + len(v, &inside), hu + 1);
                    if dist[v].as_ref().is_none_or(|d| cand < *d) {
                        dist[v] = Some(cand);
                        pred[v] = Some(u);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let end = (0..n).filter(|&i| g.sinks[i]).filter_map(|i| dist[i].clone().map(|d| (d, i))).min();
        let Some((_, mut v)) = end else { return Ok(None) };
        let mut steps = 0;
        loop {
            inside[v] = !inside[v];
            steps += 1;
            if steps > n {
                return Err(Error::Internal("cycle in augmenting path".into()));
            }
            match pred[v] {
                Some(u) => v = u,
                None => break,
            }
        }
    }
    let elements: Vec<Element> = (0..n).filter(|&i| inside[i]).map(|i| ground[i]).collect();
    let cost = (0..n).filter(|&i| inside[i]).fold(T::zero(), |acc, i| acc + w[i].clone());
    Ok(Some(CommonIndependentSet { elements, cost }))
}
