//! Acceptance harness: one PASS/FAIL line per criterion, exit status 1 when
//! any criterion fails.

use karb::arb::{exists_l_tight, min_cost_rooted_k_arb};
use karb::blocking::{
    f_subpartition_condition, f_w, full_family, is_transversal, min_f_pair, minimum_transversal, pair_formula,
    BlockingOptions, DEFAULT_MAX_PAIR_SET,
};
use karb::cli::{cmd_solve, resolve, Flags};
use karb::generate::{suite, SuiteConfig};
use karb::graph::{is_l_tight, ArcId, ArcSet, Costs, Digraph, LaminarFamily, NodeSet, Rational};
use karb::instance::Instance;
use karb::optstruct::{is_dual_feasible, optimality_structure};
use karb::oracle::{
    brute_min_transversal, brute_min_transversal_l_tight, enumerate_k_arbs, enumerate_l_tight, enumerate_rooted_k_arbs,
    find_separation_witness, separation_check, OracleBounds, SeparationSpace,
};
use karb::tightmat::{
    exchange_property_holds, mandatory_arc_transform, root_vectors_by_optimization, root_vectors_of_optima,
    TightMatroidContext,
};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

const SEED: u64 = 20240601;
const SUITE_SIZE: usize = 300;
/// The suite reaches k(|V|-1) = 14.
const BOUNDS: OracleBounds = OracleBounds { max_arb_arcs: 14, max_arcs: 18 };
const MATROID_CONTEXTS: usize = 50;
const MAX_GROUND: usize = 8;

type Outcome = Result<String, String>;

fn at(i: usize, inst: &Instance, e: impl std::fmt::Display) -> String {
    format!("instance {i}: {e}\n{}", inst.format())
}

trait Located<T> {
    fn at(self, i: usize, inst: &Instance) -> Result<T, String>;
}

impl<T, E: std::fmt::Display> Located<T> for Result<T, E> {
    fn at(self, i: usize, inst: &Instance) -> Result<T, String> {
        self.map_err(|e| at(i, inst, e))
    }
}

fn cost(c: &Costs, f: &ArcSet) -> Rational {
    f.iter().fold(Rational::zero(), |acc, id| acc + &c[id])
}

fn optima(all: Vec<ArcSet>, c: &Costs) -> Vec<ArcSet> {
    let Some(best) = all.iter().map(|f| cost(c, f)).min() else { return Vec::new() };
    all.into_iter().filter(|f| cost(c, f) == best).collect()
}

/// The digraph without arcs into root 0 and the instance family over the
/// other nodes, singletons added.
fn rooted_setup(inst: &Instance) -> karb::Result<(Digraph, LaminarFamily)> {
    let d = inst.digraph.filter_arcs(|a| a.head != 0);
    let universe: NodeSet = d.nodes().iter().copied().filter(|&v| v != 0).collect();
    Ok((d, inst.laminar_over(universe)?.with_singletons()))
}

fn masks(ground: &[ArcId]) -> impl Iterator<Item = (u32, Vec<ArcId>)> + '_ {
    (0u32..1 << ground.len())
        .map(move |m| (m, (0..ground.len()).filter(|i| m >> i & 1 == 1).map(|i| ground[i]).collect()))
}

fn criterion_1(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    let mut feasible = 0;
    let mut by_route: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, inst) in instances.iter().enumerate() {
        let c = inst.costs_or_zero();
        let brute = brute_min_transversal(&inst.digraph, &c, inst.k, BOUNDS).at(i, inst)?;
        let got = minimum_transversal(&inst.digraph, &c, inst.k, &BlockingOptions::default()).at(i, inst)?;
        if got.transversal.size != brute.size {
            return Err(at(i, inst, format!("pipeline {} vs oracle {}", got.transversal.size, brute.size)));
        }
        if brute.family_size > 0 {
            feasible += 1;
            *by_route.entry(got.transversal.provenance.as_str()).or_default() += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 600.0 {
        return Err(format!("took {secs:.0}s"));
    }
    let routes: Vec<String> = by_route.iter().map(|(r, n)| format!("{r} {n}")).collect();
    Ok(format!("{feasible}/{feasible} feasible instances agree ({}) in {secs:.1}s", routes.join(", ")))
}

fn criterion_2(instances: &[Instance]) -> Outcome {
    let mut checked = 0;
    let mut arborescences = 0;
    for (i, inst) in instances.iter().enumerate() {
        let c = inst.costs_or_zero();
        let (d, _) = rooted_setup(inst).at(i, inst)?;
        if min_cost_rooted_k_arb(&d, &c, 0, inst.k).at(i, inst)?.is_none() {
            continue;
        }
        let st = optimality_structure(&d, &c, 0, inst.k).at(i, inst)?;
        let all = enumerate_rooted_k_arbs(&d, 0, inst.k, BOUNDS).at(i, inst)?;
        let best = all.iter().map(|f| cost(&c, f)).min().ok_or_else(|| at(i, inst, "oracle found no arborescence"))?;
        for f in &all {
            let structural = st.mandatory.is_subset(f)
                && f.is_disjoint(&st.forbidden)
                && is_l_tight(&d, f, &st.laminar, 0, inst.k).at(i, inst)?;
            if structural != (cost(&c, f) == best) {
                return Err(at(i, inst, format!("arc set {f:?}: structure says {structural}, cost {}", cost(&c, f))));
            }
        }
        let k = Rational::from_integer(inst.k.into());
        let dual = st.dual.y.values().fold(Rational::zero(), |acc, y| acc + y) * k
            - st.dual.z.values().fold(Rational::zero(), |acc, z| acc + z);
        if dual != best || st.primal.objective != best || !is_dual_feasible(&d, &c, 0, &st.dual) {
            return Err(at(i, inst, format!("primal {} dual {dual} optimum {best}", st.primal.objective)));
        }
        checked += 1;
        arborescences += all.len();
    }
    Ok(format!("{checked} rooted instances, {arborescences} arborescences classified, zero duality gap on all"))
}

/// Formula value and witness set for the family blocked at `root` of `d`
/// (arcs into the root already removed), checked against the oracle.
fn formula_matches(
    d: &Digraph,
    root: usize,
    lam: &LaminarFamily,
    k: usize,
    family: &[ArcSet],
    allowed: impl Fn(ArcId) -> bool,
) -> Result<bool, String> {
    let full = full_family(d, lam).map_err(|e| e.to_string())?;
    let (w, h) = pair_formula(d, &full, k, DEFAULT_MAX_PAIR_SET).map_err(|e| e.to_string())?;
    let oracle = karb::oracle::min_hitting_set(family).map_err(|e| e.to_string())?.len();
    let blocks = family.iter().all(|f| !f.is_disjoint(&h));
    Ok(w.value + 1 - k == oracle
        && h.len() == w.e1.union(&w.e2).count() + 1 - k
        && h.iter().all(|&a| allowed(a))
        && blocks
        && is_transversal(d, root, k, lam, &h).map_err(|e| e.to_string())?)
}

fn criterion_3(instances: &[Instance]) -> Outcome {
    let (mut unrooted, mut rooted, mut tight, mut skipped) = (0, 0, 0, 0);
    for (i, inst) in instances.iter().enumerate() {
        let c = inst.costs_or_zero();
        let k = inst.k;

        let all = enumerate_k_arbs(&inst.digraph, k, BOUNDS).at(i, inst)?;
        let family = optima(all.into_iter().map(|(f, _)| f).collect(), &c);
        if !family.is_empty() && karb::oracle::min_hitting_set(&family).at(i, inst)?.len() >= k {
            let sol = minimum_transversal(&inst.digraph, &c, k, &BlockingOptions::default()).at(i, inst)?;
            let st = sol.structure.as_ref().ok_or_else(|| at(i, inst, "no structure"))?;
            if st.mandatory.is_empty() {
                let ext = &sol.extension;
                let d = ext.digraph.filter_arcs(|a| a.head != ext.root).without_arcs(&st.forbidden);
                let original = |a| inst.digraph.has_arc(a);
                if !formula_matches(&d, ext.root, &st.laminar, k, &family, original).at(i, inst)? {
                    return Err(at(i, inst, "unrooted formula disagrees"));
                }
                unrooted += 1;
            } else {
                skipped += 1;
            }
        }

        let (d, lam) = rooted_setup(inst).at(i, inst)?;
        let family = optima(enumerate_rooted_k_arbs(&d, 0, k, BOUNDS).at(i, inst)?, &c);
        if !family.is_empty() && karb::oracle::min_hitting_set(&family).at(i, inst)?.len() >= k {
            let st = optimality_structure(&d, &c, 0, k).at(i, inst)?;
            if st.mandatory.is_empty() {
                let reduced = d.without_arcs(&st.forbidden);
                if !formula_matches(&reduced, 0, &st.laminar, k, &family, |_| true).at(i, inst)? {
                    return Err(at(i, inst, "rooted formula disagrees"));
                }
                rooted += 1;
            } else {
                skipped += 1;
            }
        }

        let family = enumerate_l_tight(&d, 0, k, &lam, BOUNDS).at(i, inst)?;
        if !family.is_empty() && brute_min_transversal_l_tight(&d, 0, k, &lam, BOUNDS).at(i, inst)?.size >= k {
            if !formula_matches(&d, 0, &lam, k, &family, |_| true).at(i, inst)? {
                return Err(at(i, inst, "laminar-tight formula disagrees"));
            }
            tight += 1;
        }
    }
    Ok(format!(
        "formula equals oracle and its set blocks: {unrooted} unrooted, {rooted} rooted, {tight} laminar-tight \
         ({skipped} with mandatory arcs left to the shortcut)"
    ))
}

fn contexts(instances: &[Instance]) -> Vec<(usize, TightMatroidContext)> {
    instances
        .iter()
        .enumerate()
        .filter_map(|(i, inst)| {
            let lam = inst.laminar_over(inst.digraph.node_set()).ok()?;
            [1, inst.k]
                .into_iter()
                .find_map(|alpha| TightMatroidContext::with_alpha(&inst.digraph, &lam, inst.k, alpha).ok())
                .map(|ctx| (i, ctx))
        })
        .take(MATROID_CONTEXTS)
        .collect()
}

fn ground(ctx: &TightMatroidContext, w: &NodeSet) -> Vec<ArcId> {
    ctx.in_star(w).into_iter().take(MAX_GROUND).collect()
}

fn criterion_4(instances: &[Instance]) -> Outcome {
    let ctxs = contexts(instances);
    if ctxs.len() < MATROID_CONTEXTS {
        return Err(format!("only {} contexts", ctxs.len()));
    }
    let (mut members, mut whole, mut recursive, mut deletions, mut lost) = (0, 0, 0, 0, 0);
    for (i, ctx) in &ctxs {
        let err = |e: String| format!("instance {i}: {e}");
        for w in ctx.laminar.members() {
            let g = ground(ctx, w);
            whole += usize::from(g.len() == ctx.in_star(w).len());
            let rank: Vec<usize> =
                masks(&g).map(|(_, e)| ctx.rank(w, &e)).collect::<karb::Result<_>>().map_err(|e| err(e.to_string()))?;
            let full = (1u32 << g.len()) - 1;
            if rank[0] != 0 {
                return Err(err(format!("{w:?}: rank of the empty set is {}", rank[0])));
            }
            for a in 0..=full {
                for j in (0..g.len()).filter(|j| a >> j & 1 == 0) {
                    let step = rank[(a | 1 << j) as usize] as i64 - rank[a as usize] as i64;
                    if !(0..=1).contains(&step) {
                        return Err(err(format!("{w:?}: adding arc {} changes rank by {step}", g[j])));
                    }
                }
                for b in 0..=full {
                    if rank[a as usize] + rank[b as usize] < rank[(a | b) as usize] + rank[(a & b) as usize] {
                        return Err(err(format!("{w:?}: submodularity fails on masks {a:#b}, {b:#b}")));
                    }
                }
            }
            for (m, e) in masks(&g).filter(|(_, e)| e.len() <= 4) {
                if ctx.rank_recursive(w, &e).map_err(|e| err(e.to_string()))? != rank[m as usize] {
                    return Err(err(format!("{w:?}: recursive rank differs on {e:?}")));
                }
                recursive += 1;
            }
            for (j, &a) in g.iter().enumerate() {
                let smaller = ctx.without_arcs(&ArcSet::from([a]));
                if !smaller.has_tight_arborescence(w).map_err(|e| err(e.to_string()))? {
                    lost += 1;
                    continue;
                }
                for (m, e) in masks(&g).filter(|(m, _)| m >> j & 1 == 1) {
                    let rest: Vec<ArcId> = e.into_iter().filter(|&x| x != a).collect();
                    let r = smaller.rank(w, &rest).map_err(|e| err(e.to_string()))?;
                    if r + 1 < rank[m as usize] || r > rank[m as usize] {
                        return Err(err(format!("{w:?}: deleting arc {a} moves rank {} to {r}", rank[m as usize])));
                    }
                    deletions += 1;
                }
            }
            members += 1;
        }
    }
    Ok(format!(
        "{} contexts, {members} members ({whole} with the whole in-star), {recursive} recursive comparisons, \
         {deletions} deletion bounds ({lost} deletions lose every tight arborescence)",
        ctxs.len()
    ))
}

fn criterion_5(instances: &[Instance]) -> Outcome {
    let mut pairs = 0;
    for (i, inst) in instances.iter().enumerate() {
        let (d, lam) = rooted_setup(inst).at(i, inst)?;
        if !exists_l_tight(&d, 0, inst.k, &lam).at(i, inst)? {
            continue;
        }
        let full = full_family(&d, &lam).at(i, inst)?;
        for w in full.members().iter().filter(|w| w.len() >= 2) {
            let p = min_f_pair(&d, &full, w, DEFAULT_MAX_PAIR_SET).at(i, inst)?;
            if p.value < inst.k {
                return Err(at(i, inst, format!("{w:?}: pair value {} below k", p.value)));
            }
            pairs += 1;
        }
    }

    let mut triples = 0usize;
    for (i, ctx) in contexts(instances) {
        for w in ctx.laminar.members().iter().filter(|w| w.len() <= 6) {
            let g = ground(&ctx, w);
            let nodes: Vec<usize> = w.iter().copied().collect();
            for zm in 1u32..1 << nodes.len() {
                let z: NodeSet = (0..nodes.len()).filter(|j| zm >> j & 1 == 1).map(|j| nodes[j]).collect();
                let f = f_w(&ctx.extended, &ctx.laminar, w, &z).map_err(|e| e.to_string())?.0;
                for (_, e) in masks(&g) {
                    let entering = e.iter().filter(|&&a| z.contains(&ctx.extended.arc(a).expect("arc").head)).count();
                    let r = ctx.rank(w, &e).map_err(|e| e.to_string())?;
                    if r > f + entering {
                        return Err(format!("instance {i}: {w:?}, Z {z:?}, E {e:?}: rank {r} > {f} + {entering}"));
                    }
                    triples += 1;
                }
            }
        }
    }

    let mut transformed = 0;
    for (i, inst) in instances.iter().enumerate().filter(|(_, x)| x.digraph.node_count() <= 4 && x.k <= 2) {
        let (d, lam) = rooted_setup(inst).at(i, inst)?;
        let before = enumerate_l_tight(&d, 0, inst.k, &lam, BOUNDS).at(i, inst)?;
        for a in d.arcs().iter().filter(|a| a.tail != 0) {
            let (g, l2, _) = mandatory_arc_transform(&d, &lam, 0, a.id, inst.k).at(i, inst)?;
            let after = enumerate_l_tight(&g, 0, inst.k, &l2, BOUNDS).at(i, inst)?;
            let through = before.iter().filter(|f| f.contains(&a.id)).count();
            if through != after.len() {
                return Err(at(i, inst, format!("arc {}: {through} before, {} after", a.id, after.len())));
            }
            transformed += 1;
        }
    }
    Ok(format!("{pairs} pair minima >= k, {triples} rank bounds, {transformed} transform counts match"))
}

fn criterion_6(instances: &[Instance]) -> Outcome {
    let (mut feasible, mut vectors) = (0, 0);
    for (i, inst) in instances.iter().enumerate() {
        let c = inst.costs_or_zero();
        let qs = root_vectors_of_optima(&inst.digraph, &c, inst.k, BOUNDS).at(i, inst)?;
        if qs.is_empty() {
            continue;
        }
        if let Some(q) = qs.iter().find(|q| q.values().sum::<usize>() != inst.k) {
            return Err(at(i, inst, format!("root vector {q:?} does not sum to k")));
        }
        if qs != root_vectors_by_optimization(&inst.digraph, &c, inst.k).at(i, inst)? {
            return Err(at(i, inst, "root vector routes disagree"));
        }
        if !exchange_property_holds(&qs) {
            return Err(at(i, inst, format!("exchange fails on {qs:?}")));
        }
        feasible += 1;
        vectors += qs.len();
    }
    Ok(format!("{feasible} feasible instances, {vectors} optimal root vectors, exchange holds on all"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn criterion_7() -> Outcome {
    let inst = Instance::from_file(&fixtures().join("separation_k2.txt")).map_err(|e| e.to_string())?;
    let (d, lam) = rooted_setup(&inst).map_err(|e| e.to_string())?;
    let check = separation_check(&d, 0, 2, &lam).map_err(|e| e.to_string())?;
    if !check.separates() {
        return Err(format!("fixture no longer separates: {check:?}"));
    }
    let full = full_family(&d, &lam).map_err(|e| e.to_string())?;
    for w in full.members() {
        if !f_subpartition_condition(&d, &full, w, 2).map_err(|e| e.to_string())? {
            return Err(format!("subpartition inequality fails on {w:?}"));
        }
    }
    let space = SeparationSpace { nodes: 4, k: 2, seeds: 12_000..12_200 };
    let found = find_separation_witness(&space).map_err(|e| e.to_string())?.ok_or("search found nothing")?;
    let pairs = |g: &Digraph| g.arcs().iter().map(|a| (a.tail, a.head)).collect::<Vec<_>>();
    if pairs(&found.instance.digraph) != pairs(&d) || found.instance.laminar != inst.laminar {
        return Err(format!("search from seed {} shrinks to a different instance", found.seed));
    }
    for nodes in [3, 4] {
        let control = SeparationSpace { nodes, k: 1, seeds: 0..60_000 };
        if let Some(w) = find_separation_witness(&control).map_err(|e| e.to_string())? {
            return Err(format!("k = 1 control separates at seed {}\n{}", w.seed, w.instance.format()));
        }
    }
    Ok(format!(
        "no tight 2-arborescence, subpartition and pair conditions hold, reproduced from seed {}; \
         k = 1 control finds nothing in 120000 samples",
        found.seed
    ))
}

fn criterion_8() -> Outcome {
    let mut runs = 0;
    for entry in std::fs::read_dir(fixtures()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let inst = Instance::from_file(&path).map_err(|e| e.to_string())?;
        for mode in [vec![], vec!["--rooted"], vec!["--l-tight"]] {
            let mut outputs = Vec::new();
            for jobs in ["1", "2", "1"] {
                let mut args = vec!["--jobs", jobs, "solve", path.to_str().unwrap(), "--dump-dual"];
                args.extend(&mode);
                let out = Command::new(env!("CARGO_BIN_EXE_karb")).args(&args).output().map_err(|e| e.to_string())?;
                if !out.status.success() {
                    return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
                }
                outputs.push(out.stdout);
            }
            let flags = Flags {
                rooted: mode.contains(&"--rooted"),
                l_tight: mode.contains(&"--l-tight"),
                dump_dual: true,
                ..Flags::default()
            };
            let in_process = |flags: &Flags| -> karb::Result<Vec<u8>> {
                Ok(karb::cli::render(&cmd_solve(&resolve(inst.clone(), flags)?, flags)?).into_bytes())
            };
            outputs.push(in_process(&flags).map_err(|e| e.to_string())?);
            outputs.push(in_process(&flags).map_err(|e| e.to_string())?);
            if outputs.windows(2).any(|p| p[0] != p[1]) {
                return Err(format!("{} {mode:?}: outputs differ", path.display()));
            }
            runs += outputs.len();
        }
    }
    Ok(format!("{runs} solve runs over the fixtures, byte-identical per mode"))
}

fn main() {
    let instances = suite(SEED, SUITE_SIZE, &SuiteConfig::default());
    let criteria: [(&str, Box<dyn Fn() -> Outcome + '_>); 8] = [
        ("oracle equivalence", Box::new(|| criterion_1(&instances))),
        ("optimality structure", Box::new(|| criterion_2(&instances))),
        ("pair formula", Box::new(|| criterion_3(&instances))),
        ("matroid layer", Box::new(|| criterion_4(&instances))),
        ("structural bounds", Box::new(|| criterion_5(&instances))),
        ("root vectors", Box::new(|| criterion_6(&instances))),
        ("separation fixture", Box::new(criterion_7)),
        ("determinism", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.1}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} [{secs:.1}s]", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
