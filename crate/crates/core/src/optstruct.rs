//! Optimality structure of min-cost rooted k-arborescences: forbidden arcs,
//! mandatory arcs and a laminar family read off an uncrossed optimal dual.
//!
//! The primal is solved by cutting planes over the cut constraints
//! `x(δ^in(Z)) >= k`. Parallel arcs of equal cost share one LP column with
//! upper bound equal to their multiplicity; the column's bound multiplier is
//! copied to every arc of the class.

use crate::arb::min_cost_rooted_k_arb;
use crate::error::{internal, invalid, Result};
use crate::flow::max_flow;
use crate::graph::{validate_costs, ArcId, ArcSet, Costs, Digraph, LaminarFamily, NodeId, NodeSet, Rational};
use crate::lp::{solve_from_upper, LinearProgram, LpSolution, Row};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
struct ArcClass {
    tail: NodeId,
    head: NodeId,
    cost: Rational,
    arcs: Vec<ArcId>,
}

#[derive(Clone, Debug)]
pub struct PrimalLp {
    pub root: NodeId,
    pub k: usize,
    /// Optimal LP point, one value in [0, 1] per arc.
    pub x: BTreeMap<ArcId, Rational>,
    /// Cut constraints active in the final relaxation.
    pub cuts: Vec<NodeSet>,
    pub objective: Rational,
    pub rounds: usize,
    classes: Vec<ArcClass>,
    solution: LpSolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSolution {
    /// Positive multipliers of cut constraints.
    pub y: BTreeMap<NodeSet, Rational>,
    /// Positive multipliers of `x_a <= 1`.
    pub z: BTreeMap<ArcId, Rational>,
    pub objective: Rational,
}

#[derive(Clone, Debug)]
pub struct OptimalityStructure {
    pub root: NodeId,
    pub k: usize,
    pub opt_cost: Rational,
    /// Arcs in no optimal k-arborescence (strict dual slack, or entering the root).
    pub forbidden: ArcSet,
    /// Arcs in every optimal k-arborescence (positive bound multiplier).
    pub mandatory: ArcSet,
    /// Support of the uncrossed dual plus all singletons of `V - s`.
    pub laminar: LaminarFamily,
    pub primal: PrimalLp,
    pub dual: DualSolution,
}

fn classes_of(d: &Digraph, c: &Costs, s: NodeId) -> Vec<ArcClass> {
    let mut by_key: BTreeMap<(NodeId, NodeId, Rational), Vec<ArcId>> = BTreeMap::new();
    for a in d.arcs().iter().filter(|a| a.head != s) {
        by_key.entry((a.tail, a.head, c[&a.id].clone())).or_default().push(a.id);
    }
    let mut classes: Vec<ArcClass> =
        by_key.into_iter().map(|((tail, head, cost), arcs)| ArcClass { tail, head, cost, arcs }).collect();
    classes.sort_by_key(|cl| cl.arcs[0]);
    classes
}

fn build_lp(classes: &[ArcClass], cuts: &[NodeSet], k: usize) -> LinearProgram {
    let kk = Rational::from_integer(BigInt::from(k));
    LinearProgram {
        costs: classes.iter().map(|cl| cl.cost.clone()).collect(),
        upper: classes.iter().map(|cl| Rational::from_integer(BigInt::from(cl.arcs.len()))).collect(),
        rows: cuts
            .iter()
            .map(|z| Row {
                coefs: classes
                    .iter()
                    .enumerate()
                    .filter(|(_, cl)| z.contains(&cl.head) && !z.contains(&cl.tail))
                    .map(|(j, _)| (j, Rational::one()))
                    .collect(),
                rhs: kk.clone(),
            })
            .collect(),
    }
}

/// Violated cuts: for each `v`, the sink-minimal minimum `s`-`v` cut when
/// its capacity is below k.
fn separate(d: &Digraph, classes: &[ArcClass], x: &[Rational], s: NodeId, k: usize) -> Vec<NodeSet> {
    let n = d.node_count();
    let caps: Vec<(usize, usize, Rational)> = classes
        .iter()
        .zip(x)
        .filter(|(_, v)| v.is_positive())
        .map(|(cl, v)| (d.index_of(cl.tail).unwrap(), d.index_of(cl.head).unwrap(), v.clone()))
        .collect();
    let si = d.index_of(s).unwrap();
    let kk = Rational::from_integer(BigInt::from(k));
    let mut found: Vec<NodeSet> = Vec::new();
    for t in (0..n).filter(|&t| t != si) {
        let r = max_flow(n, &caps, si, t, None);
        if r.value < kk {
            let z: NodeSet = (0..n).filter(|&i| r.sink_side[i]).map(|i| d.nodes()[i]).collect();
            if !found.contains(&z) {
                found.push(z);
            }
        }
    }
    found
}

/// Optimal solution of the cut LP relaxation of min-cost rooted k-arborescence.
pub fn solve_primal_lp(d: &Digraph, c: &Costs, s: NodeId, k: usize) -> Result<PrimalLp> {
    validate_costs(d, c)?;
    d.require_node(s)?;
    if k == 0 {
        return invalid("k must be positive");
    }
    let classes = classes_of(d, c, s);
    let full: Vec<Rational> = classes.iter().map(|cl| Rational::from_integer(BigInt::from(cl.arcs.len()))).collect();
    if !separate(d, &classes, &full, s, k).is_empty() {
        return invalid(format!("no {s}-rooted {k}-arborescence exists"));
    }
    let mut cuts: Vec<NodeSet> = d.nodes().iter().filter(|&&v| v != s).map(|&v| NodeSet::from([v])).collect();
    let mut rounds = 0;
    let solution = loop {
        rounds += 1;
        let sol = solve_from_upper(&build_lp(&classes, &cuts, k))?;
        let fresh: Vec<NodeSet> =
            separate(d, &classes, &sol.x, s, k).into_iter().filter(|z| !cuts.contains(z)).collect();
        if fresh.is_empty() {
            break sol;
        }
        cuts.extend(fresh);
    };
    // Spread each class value over its arcs in id order, keeping integral
    // class values integral per arc.
    let mut x = BTreeMap::new();
    for a in d.arcs().iter().filter(|a| a.head == s) {
        x.insert(a.id, Rational::zero());
    }
    for (cl, v) in classes.iter().zip(&solution.x) {
        let mut left = v.clone();
        for &id in &cl.arcs {
            let take = left.clone().min(Rational::one()).max(Rational::zero());
            left -= &take;
            x.insert(id, take);
        }
    }
    Ok(PrimalLp { root: s, k, x, cuts, objective: solution.objective.clone(), rounds, classes, solution })
}

/// Dual multipliers of the final relaxation.
pub fn extract_dual(p: &PrimalLp) -> DualSolution {
    let y: BTreeMap<NodeSet, Rational> = p
        .cuts
        .iter()
        .zip(&p.solution.row_duals)
        .filter(|(_, v)| v.is_positive())
        .map(|(z, v)| (z.clone(), v.clone()))
        .collect();
    let z: BTreeMap<ArcId, Rational> = p
        .classes
        .iter()
        .zip(&p.solution.bound_duals)
        .filter(|(_, v)| v.is_positive())
        .flat_map(|(cl, v)| cl.arcs.iter().map(move |&id| (id, v.clone())))
        .collect();
    DualSolution { objective: dual_objective(&y, &z, p.k), y, z }
}

fn dual_objective(y: &BTreeMap<NodeSet, Rational>, z: &BTreeMap<ArcId, Rational>, k: usize) -> Rational {
    let sy = y.values().fold(Rational::zero(), |acc, v| acc + v);
    let sz = z.values().fold(Rational::zero(), |acc, v| acc + v);
    sy * Rational::from_integer(BigInt::from(k)) - sz
}

/// `c_a - sum of y over sets entered by a + z_a`, per arc not entering `s`.
pub fn dual_slacks(d: &Digraph, c: &Costs, s: NodeId, dual: &DualSolution) -> BTreeMap<ArcId, Rational> {
    d.arcs()
        .iter()
        .filter(|a| a.head != s)
        .map(|a| {
            let entered = dual.y.iter().filter(|(z, _)| a.enters(z)).fold(Rational::zero(), |acc, (_, v)| acc + v);
            let za = dual.z.get(&a.id).cloned().unwrap_or_else(Rational::zero);
            (a.id, &c[&a.id] - entered + za)
        })
        .collect()
}

pub fn is_dual_feasible(d: &Digraph, c: &Costs, s: NodeId, dual: &DualSolution) -> bool {
    dual.y.keys().all(|z| !z.is_empty() && !z.contains(&s) && z.iter().all(|&v| d.has_node(v)))
        && dual.y.values().chain(dual.z.values()).all(|v| !v.is_negative())
        && dual_slacks(d, c, s, dual).values().all(|v| !v.is_negative())
}

fn crossing(a: &NodeSet, b: &NodeSet) -> bool {
    !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a)
}

/// Moves `min(y1, y2)` from two crossing sets onto their intersection and
/// union until the support is laminar. Feasibility and objective are kept
/// because each arc enters the new pair at most as often as the old one.
pub fn uncross(dual: &DualSolution) -> Result<DualSolution> {
    let mut y = dual.y.clone();
    for _ in 0..1_000_000 {
        let keys: Vec<&NodeSet> = y.keys().collect();
        let pair = keys
            .iter()
            .enumerate()
            .find_map(|(i, a)| keys[i + 1..].iter().find(|b| crossing(a, b)).map(|b| ((*a).clone(), (*b).clone())));
        let Some((a, b)) = pair else {
            return Ok(DualSolution { y, z: dual.z.clone(), objective: dual.objective.clone() });
        };
        let eps = y[&a].clone().min(y[&b].clone());
        for set in [&a, &b] {
            let v = y.remove(set).unwrap() - &eps;
            if v.is_positive() {
                y.insert(set.clone(), v);
            }
        }
        for set in [&a & &b, &a | &b] {
            *y.entry(set).or_insert_with(Rational::zero) += &eps;
        }
    }
    internal("uncrossing did not terminate")
}

/// Forbidden arcs, mandatory arcs and a laminar family characterising the
/// optimal `s`-rooted k-arborescences of `d`.
pub fn optimality_structure(d: &Digraph, c: &Costs, s: NodeId, k: usize) -> Result<OptimalityStructure> {
    let primal = solve_primal_lp(d, c, s, k)?;
    let dual = extract_dual(&primal);
    if dual.objective != primal.objective {
        return internal(format!("duality gap: primal {} vs dual {}", primal.objective, dual.objective));
    }
    if !is_dual_feasible(d, c, s, &dual) {
        return internal("extracted dual is infeasible");
    }
    let dual = uncross(&dual)?;
    if !is_dual_feasible(d, c, s, &dual) || dual_objective(&dual.y, &dual.z, k) != primal.objective {
        return internal("uncrossing broke optimality");
    }
    let Some(best) = min_cost_rooted_k_arb(d, c, s, k)? else {
        return internal("LP feasible but no integral optimum");
    };
    if best.cost != primal.objective {
        return internal(format!("LP optimum {} differs from integral optimum {}", primal.objective, best.cost));
    }
    let slacks = dual_slacks(d, c, s, &dual);
    let forbidden: ArcSet =
        d.arcs().iter().filter(|a| a.head == s || slacks[&a.id].is_positive()).map(|a| a.id).collect();
    let mandatory: ArcSet = dual.z.keys().copied().collect();
    let universe: NodeSet = d.nodes().iter().copied().filter(|&v| v != s).collect();
    let support: BTreeSet<NodeSet> = dual.y.keys().cloned().collect();
    let laminar = LaminarFamily::new(universe, support)?.with_singletons();
    Ok(OptimalityStructure {
        root: s,
        k,
        opt_cost: primal.objective.clone(),
        forbidden,
        mandatory,
        laminar,
        primal,
        dual,
    })
}
