//! Exact bounded-variable primal simplex with Bland's rule.
//!
//! Solves `min c x` subject to `A x >= b` and `0 <= x <= u`, starting from
//! the vertex `x = u`, which callers guarantee to be feasible.

use crate::error::{internal, invalid, Result};
use crate::graph::Rational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct Row {
    pub coefs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub costs: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub objective: Rational,
    /// Multiplier of each `>=` row.
    pub row_duals: Vec<Rational>,
    /// Multiplier of each upper bound `x_j <= u_j`.
    pub bound_duals: Vec<Rational>,
    pub pivots: usize,
}

struct Tableau {
    n: usize,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    basic: Vec<bool>,
    at_upper: Vec<bool>,
    value: Vec<Rational>,
    cost: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

impl Tableau {
    fn reduced_cost(&self, j: usize) -> Rational {
        self.rows.iter().zip(&self.basis).fold(self.cost[j].clone(), |acc, (row, &b)| acc - &self.cost[b] * &row[j])
    }

    /// Smallest-index improving nonbasic column.
    fn entering(&self) -> Option<(usize, Rational)> {
        (0..self.cost.len())
            .filter(|&j| !self.basic[j])
            .filter(|&j| self.upper[j].as_ref().is_none_or(|u| u.is_positive()))
            .map(|j| (j, self.reduced_cost(j)))
            .find(|(j, d)| if self.at_upper[*j] { d.is_positive() } else { d.is_negative() })
    }

    fn step(&mut self, j: usize) -> Result<()> {
        let dir = if self.at_upper[j] { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
        let mut best: Option<(Rational, Option<(usize, bool)>)> = self.upper[j].clone().map(|u| (u, None));
        for (i, row) in self.rows.iter().enumerate() {
            let delta = -(&row[j] * &dir);
            let b = self.basis[i];
            let limit = if delta.is_negative() {
                Some((self.value[b].clone() / -delta, false))
            } else if delta.is_positive() {
                self.upper[b].as_ref().map(|u| ((u - &self.value[b]) / delta, true))
            } else {
                None
            };
            if let Some((theta, to_upper)) = limit {
                let better = match &best {
                    None => true,
                    Some((t, None)) => theta < *t,
                    Some((t, Some((bi, _)))) => theta < *t || (theta == *t && b < self.basis[*bi]),
                };
                if better {
                    best = Some((theta, Some((i, to_upper))));
                }
            }
        }
        let Some((theta, leave)) = best else {
            return internal("linear program is unbounded");
        };
        let shift = &dir * &theta;
        for (i, row) in self.rows.iter().enumerate() {
            let b = self.basis[i];
            self.value[b] = &self.value[b] - &row[j] * &shift;
        }
        self.value[j] = &self.value[j] + &shift;
        match leave {
            None => {
                self.at_upper[j] = !self.at_upper[j];
                self.value[j] = if self.at_upper[j] { self.upper[j].clone().unwrap() } else { Rational::zero() };
            }
            Some((i, to_upper)) => {
                let out = self.basis[i];
                self.value[out] = if to_upper { self.upper[out].clone().unwrap() } else { Rational::zero() };
                self.at_upper[out] = to_upper;
                self.basic[out] = false;
                self.basic[j] = true;
                self.at_upper[j] = false;
                self.basis[i] = j;
                let pivot = self.rows[i][j].clone();
                for x in self.rows[i].iter_mut() {
                    *x = &*x / &pivot;
                }
                let prow = self.rows[i].clone();
                for (r, row) in self.rows.iter_mut().enumerate() {
                    if r == i || row[j].is_zero() {
                        continue;
                    }
                    let f = row[j].clone();
                    for (x, p) in row.iter_mut().zip(&prow) {
                        if !p.is_zero() {
                            *x = &*x - &f * p;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn solve_from_upper(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.costs.len();
    let m = lp.rows.len();
    if lp.upper.len() != n {
        return invalid("one upper bound per variable required");
    }
    if lp.costs.iter().chain(&lp.upper).any(|x| x.is_negative()) {
        return invalid("costs and upper bounds must be nonnegative");
    }
    let total = n + m;
    let mut t = Tableau {
        n,
        rows: Vec::with_capacity(m),
        basis: (n..total).collect(),
        basic: (0..total).map(|j| j >= n).collect(),
        at_upper: (0..total).map(|j| j < n).collect(),
        value: lp.upper.iter().cloned().chain(std::iter::repeat_n(Rational::zero(), m)).collect(),
        cost: lp.costs.iter().cloned().chain(std::iter::repeat_n(Rational::zero(), m)).collect(),
        upper: lp.upper.iter().cloned().map(Some).chain(std::iter::repeat_n(None, m)).collect(),
    };
    for (i, row) in lp.rows.iter().enumerate() {
        let mut dense = vec![Rational::zero(); total];
        let mut lhs = Rational::zero();
        for (j, a) in &row.coefs {
            if *j >= n {
                return invalid("row refers to an unknown variable");
            }
            dense[*j] = &dense[*j] - a;
            lhs += a * &lp.upper[*j];
        }
        dense[n + i] = Rational::from_integer(1.into());
        let slack = lhs - &row.rhs;
        if slack.is_negative() {
            return invalid("starting point x = u violates a constraint");
        }
        t.value[n + i] = slack;
        t.rows.push(dense);
    }
    let mut pivots = 0;
    while let Some((j, _)) = t.entering() {
        t.step(j)?;
        pivots += 1;
    }
    let x: Vec<Rational> = t.value[..n].to_vec();
    let objective = x.iter().zip(&lp.costs).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
    let row_duals = (0..m).map(|i| t.reduced_cost(t.n + i)).collect();
    let bound_duals = (0..n)
        .map(|j| if t.basic[j] { Rational::zero() } else { (-t.reduced_cost(j)).max(Rational::zero()) })
        .collect();
    Ok(LpSolution { x, objective, row_duals, bound_duals, pivots })
}
