//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! n 4
//! k 2
//! root 0
//! a 0 1 3/2
//! L 1 2
//! expect {"size": 1}
//! ```
//!
//! Arc ids follow the order of `a` lines. Costs are `p/q` or integers and
//! must be given on every arc or on none.

use crate::error::{Error, Result};
use crate::graph::{format_rational, parse_rational, Costs, Digraph, LaminarFamily, NodeId, NodeSet};
use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub struct Instance {
    pub digraph: Digraph,
    pub costs: Option<Costs>,
    pub k: usize,
    pub root: Option<NodeId>,
    pub laminar: Vec<NodeSet>,
    pub expectations: Vec<serde_json::Value>,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

fn number(line: usize, tok: &str, what: &str) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return err(line, format!("{what} must be a nonnegative integer, got {tok:?}"));
    }
    tok.parse().or_else(|_| err(line, format!("{what} is out of range")))
}

fn set_once<T>(slot: &mut Option<(usize, T)>, line: usize, value: T, what: &str) -> Result<()> {
    if let Some((prev, _)) = slot {
        return err(line, format!("duplicate {what} record (first on line {prev})"));
    }
    *slot = Some((line, value));
    Ok(())
}

impl Instance {
    pub fn parse(text: &str) -> Result<Instance> {
        let mut n: Option<(usize, usize)> = None;
        let mut k: Option<(usize, usize)> = None;
        let mut root: Option<(usize, NodeId)> = None;
        let mut arcs: Vec<(usize, NodeId, NodeId, Option<crate::graph::Rational>)> = Vec::new();
        let mut sets: Vec<(usize, NodeSet)> = Vec::new();
        let mut expectations = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (tag, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let toks: Vec<&str> = rest.split_whitespace().collect();
            match tag {
                "n" | "k" | "root" => {
                    let [tok] = toks[..] else { return err(line, format!("`{tag}` takes exactly one value")) };
                    let v = number(line, tok, tag)?;
                    match tag {
                        "n" => set_once(&mut n, line, v, "n")?,
                        "k" => set_once(&mut k, line, v, "k")?,
                        _ => set_once(&mut root, line, v, "root")?,
                    }
                }
                "a" => {
                    let (t, h, c) = match toks[..] {
                        [t, h] => (t, h, None),
                        [t, h, c] => (t, h, Some(c)),
                        _ => return err(line, "`a` takes a tail, a head and an optional cost"),
                    };
                    let cost = match c {
                        None => None,
                        Some(c) => match parse_rational(c) {
                            Some(x) if x >= crate::graph::Rational::default() => Some(x),
                            Some(_) => return err(line, "costs must be nonnegative"),
                            None => return err(line, format!("bad cost {c:?}")),
                        },
                    };
                    arcs.push((line, number(line, t, "tail")?, number(line, h, "head")?, cost));
                }
                "L" => {
                    if toks.is_empty() {
                        return err(line, "`L` needs at least one node");
                    }
                    let mut set = NodeSet::new();
                    for t in toks {
                        if !set.insert(number(line, t, "node")?) {
                            return err(line, format!("node {t} repeated"));
                        }
                    }
                    sets.push((line, set));
                }
                "expect" => match serde_json::from_str(rest.trim()) {
                    Ok(v) => expectations.push(v),
                    Err(e) => return err(line, format!("bad expectation: {e}")),
                },
                other => return err(line, format!("unknown record `{other}`")),
            }
        }
        let Some((_, n)) = n else { return err(0, "missing `n` record") };
        let k = match k {
            Some((line, 0)) => return err(line, "k must be positive"),
            Some((_, k)) => k,
            None => return err(0, "missing `k` record"),
        };
        if let Some((line, r)) = root {
            if r >= n {
                return err(line, format!("root {r} is not a node"));
            }
        }
        let mut digraph = Digraph::with_nodes(n);
        let mut costs = Costs::new();
        let with_costs = arcs.first().is_some_and(|a| a.3.is_some());
        for (line, t, h, c) in arcs {
            if t >= n || h >= n {
                return err(line, format!("arc endpoint outside 0..{n}"));
            }
            if t == h {
                return err(line, "loops are not allowed");
            }
            let id = digraph.add_arc(t, h).or_else(|e| err(line, e.to_string()))?;
            match (c, with_costs) {
                (Some(c), true) => {
                    costs.insert(id, c);
                }
                (None, false) => {}
                _ => return err(line, "costs must be given on every arc or on none"),
            }
        }
        for (line, set) in &sets {
            if let Some(v) = set.iter().find(|&&v| v >= n) {
                return err(*line, format!("node {v} is not a node"));
            }
        }
        let members: Vec<NodeSet> = sets.iter().map(|(_, s)| s.clone()).collect();
        if !crate::graph::is_laminar(&members) {
            let line = sets.last().map_or(0, |(l, _)| *l);
            return err(line, "laminar records are not laminar");
        }
        Ok(Instance {
            digraph,
            costs: with_costs.then_some(costs),
            k,
            root: root.map(|(_, r)| r),
            laminar: members,
            expectations,
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Instance> {
        Instance::parse(&std::fs::read_to_string(path)?)
    }

    /// Costs, or all zero when the file has none.
    pub fn costs_or_zero(&self) -> Costs {
        self.costs.clone().unwrap_or_else(|| self.digraph.arcs().iter().map(|a| (a.id, Default::default())).collect())
    }

    /// Laminar records over the given universe.
    pub fn laminar_over(&self, universe: NodeSet) -> Result<LaminarFamily> {
        LaminarFamily::new(universe, self.laminar.iter().cloned())
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.digraph.node_count());
        let _ = writeln!(out, "k {}", self.k);
        if let Some(r) = self.root {
            let _ = writeln!(out, "root {r}");
        }
        for a in self.digraph.arcs() {
            match &self.costs {
                Some(c) => {
                    let _ = writeln!(out, "a {} {} {}", a.tail, a.head, format_rational(&c[&a.id]));
                }
                None => {
                    let _ = writeln!(out, "a {} {}", a.tail, a.head);
                }
            }
        }
        for set in &self.laminar {
            let nodes: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "L {}", nodes.join(" "));
        }
        for e in &self.expectations {
            let _ = writeln!(out, "expect {e}");
        }
        out
    }
}
