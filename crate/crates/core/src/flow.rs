//! Edmonds-Karp max-flow over dense node indices, generic in the capacity type.

use num_traits::Zero;
use std::collections::VecDeque;
use std::ops::{Add, Sub};

pub trait Capacity: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> Capacity for T {}

#[derive(Clone, Debug)]
pub struct FlowResult<T> {
    pub value: T,
    /// Nodes that can still reach the sink in the residual network. When the
    /// flow is maximum this is the inclusion-minimal sink side of a min cut.
    pub sink_side: Vec<bool>,
}

struct Residual<T> {
    head: Vec<usize>,
    cap: Vec<T>,
    adj: Vec<Vec<usize>>,
}

impl<T: Capacity> Residual<T> {
    fn new(n: usize, arcs: &[(usize, usize, T)]) -> Self {
        let mut r = Residual {
            head: Vec::with_capacity(2 * arcs.len()),
            cap: Vec::with_capacity(2 * arcs.len()),
            adj: vec![Vec::new(); n],
        };
        for (u, v, c) in arcs {
            r.adj[*u].push(r.head.len());
            r.head.push(*v);
            r.cap.push(c.clone());
            r.adj[*v].push(r.head.len());
            r.head.push(*u);
            r.cap.push(T::zero());
        }
        r
    }

    fn augmenting_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if !seen[v] && self.cap[e] > T::zero() {
                    seen[v] = true;
                    pred[v] = Some(e);
                    if v == t {
                        let mut path = Vec::new();
                        let mut x = t;
                        while let Some(e) = pred[x] {
                            path.push(e);
                            x = self.head[e ^ 1];
                        }
                        return Some(path);
                    }
                    queue.push_back(v);
                }
            }
        }
        None
    }

    fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                // e leaves v; its twin enters v from head[e]
                let u = self.head[e];
                if !seen[u] && self.cap[e ^ 1] > T::zero() {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}

/// Maximum s-t flow. With `limit` set, stops once the value reaches it, in
/// which case `sink_side` is not a cut certificate.
pub fn max_flow<T: Capacity>(
    n: usize,
    arcs: &[(usize, usize, T)],
    s: usize,
    t: usize,
    limit: Option<&T>,
) -> FlowResult<T> {
    let mut r = Residual::new(n, arcs);
    let mut value = T::zero();
    if s != t {
        while limit.is_none_or(|l| value < *l) {
            let Some(path) = r.augmenting_path(s, t) else { break };
            let mut delta = r.cap[path[0]].clone();
            for &e in &path[1..] {
                if r.cap[e] < delta {
                    delta = r.cap[e].clone();
                }
            }
            for &e in &path {
                r.cap[e] = r.cap[e].clone() - delta.clone();
                r.cap[e ^ 1] = r.cap[e ^ 1].clone() + delta.clone();
            }
            value = value + delta;
        }
    }
    let sink_side = r.reaching(t);
    FlowResult { value, sink_side }
}

/// Number of arc-disjoint s-t paths, capped at `limit`.
pub fn arc_connectivity(n: usize, arcs: &[(usize, usize)], s: usize, t: usize, limit: usize) -> usize {
    let caps: Vec<(usize, usize, i64)> = arcs.iter().map(|&(u, v)| (u, v, 1)).collect();
    max_flow(n, &caps, s, t, Some(&(limit as i64))).value as usize
}
