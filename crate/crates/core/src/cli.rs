//! Command implementations behind the `karb` binary. Every command returns a
//! JSON value with sorted keys; rationals are `"p/q"` strings.

use crate::arb::{min_cost_k_arb, min_cost_rooted_k_arb};
use crate::blocking::{
    f_w, f_w_shadow, is_transversal, min_f_pair, minimum_transversal, minimum_transversal_l_tight,
    minimum_transversal_rooted, BlockingOptions, FPairWitness, TransversalResult, DEFAULT_MAX_PAIR_SET,
};
use crate::error::{invalid, Error, Result};
use crate::generate::{suite, SuiteConfig};
use crate::graph::{format_rational, ArcSet, Costs, Digraph, LaminarFamily, NodeId, NodeSet, Rational, RootVector};
use crate::instance::Instance;
use crate::optstruct::OptimalityStructure;
use crate::oracle::{
    brute_min_transversal, brute_min_transversal_l_tight, brute_min_transversal_rooted, BruteTransversal, OracleBounds,
};
use crate::tightmat::{exchange_property_holds, root_vectors_by_optimization, root_vectors_of_optima};
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    /// Minimum-cost k-arborescences with free root vector.
    Unrooted,
    /// Minimum-cost k-arborescences rooted at a node.
    Rooted(NodeId),
    /// Laminar-tight rooted k-arborescences.
    LTight(NodeId),
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Unrooted => "blocking-opt-karb",
            Problem::Rooted(_) => "blocking-opt-rooted-karb",
            Problem::LTight(_) => "blocking-L-tight",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub rooted: bool,
    pub root: Option<NodeId>,
    pub l_tight: bool,
    pub k: Option<usize>,
    pub max_pair_set: Option<usize>,
    pub dump_dual: bool,
    pub timings: bool,
}

/// Process exit code for an error: 2 for bad input, 3 for size bounds.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Invalid(_) | Error::Io(_) => 2,
        Error::Bound(_) => 3,
        Error::Internal(_) => 1,
    }
}

/// An instance with command-line overrides applied.
pub struct Resolved {
    pub instance: Instance,
    pub problem: Problem,
    pub k: usize,
    pub opts: BlockingOptions,
}

pub fn resolve(instance: Instance, flags: &Flags) -> Result<Resolved> {
    let k = flags.k.unwrap_or(instance.k);
    if k == 0 {
        return invalid("k must be positive");
    }
    let root = flags.root.or(instance.root);
    if let Some(r) = root {
        instance.digraph.require_node(r)?;
    }
    let problem = match (flags.l_tight, flags.rooted) {
        (true, true) => return invalid("--l-tight and --rooted are exclusive"),
        (true, false) => Problem::LTight(root.ok_or_else(|| Error::Invalid("--l-tight needs a root".into()))?),
        (false, true) => Problem::Rooted(root.ok_or_else(|| Error::Invalid("--rooted needs a root".into()))?),
        (false, false) => Problem::Unrooted,
    };
    let opts = BlockingOptions {
        max_pair_set: flags.max_pair_set.unwrap_or(DEFAULT_MAX_PAIR_SET),
        ..BlockingOptions::default()
    };
    Ok(Resolved { instance, problem, k, opts })
}

fn l_tight_family(r: &Resolved, s: NodeId) -> Result<LaminarFamily> {
    let universe: NodeSet = r.instance.digraph.nodes().iter().copied().filter(|&v| v != s).collect();
    if r.instance.laminar.iter().any(|w| w.contains(&s)) {
        return invalid("laminar records must avoid the root");
    }
    r.instance.laminar_over(universe)
}

fn set_json(set: &NodeSet) -> Value {
    json!(set.iter().collect::<Vec<_>>())
}

fn arcs_json(d: &Digraph, costs: Option<&Costs>, ids: &ArcSet) -> Value {
    Value::Array(
        ids.iter()
            .map(|id| {
                let a = d.arc(*id).expect("arc of the instance");
                json!({
                    "id": id,
                    "tail": a.tail,
                    "head": a.head,
                    "cost": costs.map(|c| format_rational(&c[id])),
                })
            })
            .collect(),
    )
}

fn witness_json(w: &FPairWitness) -> Value {
    json!({
        "W": set_json(&w.w),
        "Z1": set_json(&w.z1),
        "Z2": set_json(&w.z2),
        "E1": w.e1,
        "E2": w.e2,
        "value": w.value,
    })
}

fn arc_values<'a>(m: impl IntoIterator<Item = (&'a usize, &'a Rational)>) -> Value {
    m.into_iter().map(|(a, v)| json!({"arc": a, "value": format_rational(v)})).collect()
}

fn dual_json(st: &OptimalityStructure) -> Value {
    json!({
        "root": st.root,
        "x": arc_values(&st.primal.x),
        "y": st.dual.y.iter().map(|(set, v)| json!({"set": set_json(set), "value": format_rational(v)})).collect::<Vec<_>>(),
        "z": arc_values(&st.dual.z),
        "L": st.laminar.members().iter().map(set_json).collect::<Vec<_>>(),
        "A0": st.forbidden,
        "A1": st.mandatory,
    })
}

fn transversal_json(report: &mut serde_json::Map<String, Value>, inst: &Instance, t: &TransversalResult) {
    report.insert("transversal".into(), arcs_json(&inst.digraph, inst.costs.as_ref(), &t.arcs));
    report.insert("size".into(), json!(t.size));
    report.insert("provenance".into(), json!(t.provenance.as_str()));
    report.insert("witness".into(), t.witness.as_ref().map_or(Value::Null, witness_json));
}

pub fn cmd_solve(r: &Resolved, flags: &Flags) -> Result<Value> {
    let start = Instant::now();
    let inst = &r.instance;
    let mut report = serde_json::Map::new();
    report.insert("problem".into(), json!(r.problem.name()));
    report.insert("k".into(), json!(r.k));
    let (t, opt, structure) = match r.problem {
        Problem::Unrooted => {
            let sol = minimum_transversal(&inst.digraph, &inst.costs_or_zero(), r.k, &r.opts)?;
            (sol.transversal, sol.opt_cost, sol.structure)
        }
        Problem::Rooted(s) => {
            let sol = minimum_transversal_rooted(&inst.digraph, &inst.costs_or_zero(), s, r.k, &r.opts)?;
            let opt = sol.structure.as_ref().map(|st| st.opt_cost.clone());
            (sol.transversal, opt, sol.structure)
        }
        Problem::LTight(s) => {
            let lam = l_tight_family(r, s)?;
            (minimum_transversal_l_tight(&inst.digraph, s, r.k, &lam, &r.opts)?, None, None)
        }
    };
    if let Problem::Rooted(s) | Problem::LTight(s) = r.problem {
        report.insert("root".into(), json!(s));
    }
    report.insert("optCost".into(), opt.as_ref().map(format_rational).into());
    transversal_json(&mut report, inst, &t);
    if flags.dump_dual {
        report.insert("laminarDual".into(), structure.as_ref().map_or(Value::Null, dual_json));
    }
    if flags.timings {
        report.insert("timings".into(), json!({"totalMs": start.elapsed().as_millis() as u64}));
    }
    Ok(Value::Object(report))
}

/// Whether deleting `h` removes every member of the problem's family.
pub fn blocks(r: &Resolved, h: &ArcSet) -> Result<bool> {
    let d = &r.instance.digraph;
    d.resolve(h)?;
    let cut = d.without_arcs(h);
    let c = r.instance.costs_or_zero();
    Ok(match r.problem {
        Problem::Unrooted => match min_cost_k_arb(d, &c, r.k)? {
            None => true,
            Some(opt) => min_cost_k_arb(&cut, &c, r.k)?.is_none_or(|x| x.cost > opt.cost),
        },
        Problem::Rooted(s) => match min_cost_rooted_k_arb(d, &c, s, r.k)? {
            None => true,
            Some(opt) => min_cost_rooted_k_arb(&cut, &c, s, r.k)?.is_none_or(|x| x.cost > opt.cost),
        },
        Problem::LTight(s) => is_transversal(d, s, r.k, &l_tight_family(r, s)?.with_singletons(), h)?,
    })
}

pub fn brute(r: &Resolved, bounds: OracleBounds) -> Result<BruteTransversal> {
    let d = &r.instance.digraph;
    let c = r.instance.costs_or_zero();
    match r.problem {
        Problem::Unrooted => brute_min_transversal(d, &c, r.k, bounds),
        Problem::Rooted(s) => brute_min_transversal_rooted(d, &c, s, r.k, bounds),
        Problem::LTight(s) => {
            brute_min_transversal_l_tight(d, s, r.k, &l_tight_family(r, s)?.with_singletons(), bounds)
        }
    }
}

pub fn cmd_verify(r: &Resolved, candidate: &ArcSet, bounds: OracleBounds) -> Result<Value> {
    let ok = blocks(r, candidate)?;
    let (minimum, details) = match brute(r, bounds) {
        Ok(b) => (Some(ok && candidate.len() == b.size), json!({"oracleSize": b.size, "familySize": b.family_size})),
        Err(Error::Bound(msg)) => (None, json!({"oracleSkipped": msg})),
        Err(e) => return Err(e),
    };
    Ok(json!({
        "problem": r.problem.name(),
        "candidate": candidate,
        "isTransversal": ok,
        "isMinimum": minimum,
        "details": details,
    }))
}

fn vector_json(q: &RootVector) -> Value {
    json!(q.values().collect::<Vec<_>>())
}

pub fn cmd_oracle(r: &Resolved, bounds: OracleBounds) -> Result<Value> {
    let b = brute(r, bounds)?;
    let roots: Vec<RootVector> = match r.problem {
        Problem::Unrooted => root_vectors_of_optima(&r.instance.digraph, &r.instance.costs_or_zero(), r.k, bounds)?,
        Problem::Rooted(s) | Problem::LTight(s) if b.family_size > 0 => {
            vec![r.instance.digraph.nodes().iter().map(|&v| (v, if v == s { r.k } else { 0 })).collect()]
        }
        _ => Vec::new(),
    };
    Ok(json!({
        "problem": r.problem.name(),
        "k": r.k,
        "numOptima": b.family_size,
        "optCost": b.opt_cost.as_ref().map(format_rational),
        "minTransversalSize": b.size,
        "witness": b.witness,
        "rootVectors": roots.iter().map(vector_json).collect::<Vec<_>>(),
        "exchangeOk": exchange_property_holds(&roots),
    }))
}

#[derive(Default)]
struct Tally {
    checks: std::collections::BTreeMap<&'static str, (usize, usize)>,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, name: &'static str, ok: bool, context: impl FnOnce() -> String) {
        let e = self.checks.entry(name).or_default();
        if ok {
            e.0 += 1;
        } else {
            e.1 += 1;
            if self.failures.len() < 10 {
                self.failures.push(format!("{name}: {}", context()));
            }
        }
    }
}

/// Runs the pipelines against the oracle and the structural invariants on
/// `count` generated instances.
pub fn cmd_selftest(seed: u64, count: usize, bounds: OracleBounds) -> Result<Value> {
    let mut tally = Tally::default();
    let opts = BlockingOptions::default();
    for (i, inst) in suite(seed, count, &SuiteConfig::default()).into_iter().enumerate() {
        let d = &inst.digraph;
        let c = inst.costs_or_zero();
        let k = inst.k;
        let ctx = || format!("instance {i}\n{}", inst.format());

        let got = minimum_transversal(d, &c, k, &opts)?;
        let want = brute_min_transversal(d, &c, k, bounds)?;
        tally.record("unrooted-vs-oracle", got.transversal.size == want.size, ctx);

        let got = minimum_transversal_rooted(d, &c, 0, k, &opts)?;
        let want = brute_min_transversal_rooted(d, &c, 0, k, bounds)?;
        tally.record("rooted-vs-oracle", got.transversal.size == want.size, ctx);

        let universe: NodeSet = d.nodes().iter().copied().filter(|&v| v != 0).collect();
        let lam = LaminarFamily::new(universe, inst.laminar.iter().cloned())?;
        let got = minimum_transversal_l_tight(d, 0, k, &lam, &opts)?;
        let want = brute_min_transversal_l_tight(d, 0, k, &lam.with_singletons(), bounds)?;
        tally.record("l-tight-vs-oracle", got.size == want.size, ctx);

        let full = lam.over(d.node_set())?.normalized();
        for w in full.members() {
            let table = f_w_shadow(d, &full, w)?;
            let same = (1u64..1 << w.len())
                .all(|m| f_w(d, &full, w, &table.set_of(m)).map(|x| x.0).ok() == Some(table.value(m)));
            tally.record("shadow-vs-definition", same, ctx);
            if want.family_size > 0 && w.len() >= 2 {
                let pair = min_f_pair(d, &full, w, DEFAULT_MAX_PAIR_SET)?;
                tally.record("pair-value-at-least-k", pair.value >= k, ctx);
            }
        }

        let enumerated = root_vectors_of_optima(d, &c, k, bounds)?;
        tally.record("root-vectors-two-routes", enumerated == root_vectors_by_optimization(d, &c, k)?, ctx);
        tally.record("root-vector-exchange", exchange_property_holds(&enumerated), ctx);
    }
    let ok = tally.checks.values().all(|(_, bad)| *bad == 0);
    Ok(json!({
        "seed": seed,
        "instances": count,
        "checks": tally.checks.iter().map(|(k, (good, bad))| (k.to_string(), json!({"passed": good, "failed": bad}))).collect::<serde_json::Map<_, _>>(),
        "failures": tally.failures,
        "ok": ok,
    }))
}

/// Parses comma- or space-separated arc ids.
pub fn parse_arc_list(text: &str) -> Result<ArcSet> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Error::Invalid(format!("bad arc id {t:?}"))))
        .collect()
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
