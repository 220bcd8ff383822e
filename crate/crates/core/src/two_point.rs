//! Optimal orderings for two-point distributions.
//!
//! Some optimal ordering leaves every non-final variable's left endpoint at
//! or below its continuation value. Consequently one of the `n` orderings
//! "variable `i` last, the rest by decreasing right endpoint" is optimal,
//! and trying all of them costs `O(n^2)`.

use serde::{Deserialize, Serialize};

use crate::dist::{Dist, FiniteDist};
use crate::error::{Error, Result};
use crate::eval::{evaluate_order_unchecked, OrderingResult};
use crate::shape::sort_by_key_desc;

/// Tolerance for threshold comparisons in the structural checks.
pub const THRESHOLD_TOLERANCE: f64 = 1e-12;

/// `a` with probability `1 - p`, `b` with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPoint {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointInstance {
    vars: Vec<TwoPoint>,
    dists: Vec<FiniteDist>,
}

impl TwoPointInstance {
    pub fn new(vars: Vec<TwoPoint>) -> Result<Self> {
        let dists = vars
            .iter()
            .map(|v| FiniteDist::two_point(v.a, v.b, v.p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { vars, dists })
    }

    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(triples.iter().map(|&(a, b, p)| TwoPoint { a, b, p }).collect())
    }

    /// Reads a list of distributions with at most two atoms each. A single
    /// atom `x` becomes `a = b = x` with `p = 1`.
    pub fn from_dists(dists: &[Dist]) -> Result<Self> {
        let vars = dists
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let f = d.as_finite().ok_or_else(|| {
                    Error::InstanceShape(format!("variable {i} is not finite-support"))
                })?;
                match f.len() {
                    1 => Ok(TwoPoint { a: f.min_atom(), b: f.min_atom(), p: 1.0 }),
                    2 => Ok(TwoPoint {
                        a: f.atoms()[0],
                        b: f.atoms()[1],
                        p: f.masses()[1],
                    }),
                    k => Err(Error::InstanceShape(format!(
                        "variable {i} has {k} support points, expected at most 2"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars)
    }

    pub fn vars(&self) -> &[TwoPoint] {
        &self.vars
    }

    pub fn dists(&self) -> &[FiniteDist] {
        &self.dists
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// The sub-instance made of `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            vars: indices.iter().map(|&i| self.vars[i]).collect(),
            dists: indices.iter().map(|&i| self.dists[i].clone()).collect(),
        }
    }

    /// Indices by decreasing right endpoint, ties by index.
    pub fn by_right_endpoint(&self) -> Vec<usize> {
        let keys: Vec<f64> = self.vars.iter().map(|v| v.b).collect();
        let mut idx: Vec<usize> = (0..self.len()).collect();
        sort_by_key_desc(&mut idx, &keys);
        idx
    }
}

/// All left endpoints zero: probe by decreasing right endpoint. The result
/// matches the hindsight maximum.
pub fn solve_zero_left(inst: &TwoPointInstance) -> Result<OrderingResult> {
    if let Some((i, v)) = inst.vars.iter().enumerate().find(|(_, v)| v.a != 0.0) {
        return Err(Error::InstanceShape(format!(
            "variable {i} has left endpoint {} != 0",
            v.a
        )));
    }
    Ok(evaluate_order_unchecked(&inst.dists, &inst.by_right_endpoint()))
}

/// The `n` candidate orderings: candidate `i` probes variable `i` last and
/// the others by decreasing right endpoint.
pub fn candidate_orderings(inst: &TwoPointInstance) -> Vec<Vec<usize>> {
    let sorted = inst.by_right_endpoint();
    (0..inst.len())
        .map(|last| {
            let mut order: Vec<usize> = sorted.iter().copied().filter(|&j| j != last).collect();
            order.push(last);
            order
        })
        .collect()
}

/// Exact optimal ordering in `O(n^2)`; among tied candidates the one with
/// the smallest last-variable index wins.
pub fn solve(inst: &TwoPointInstance) -> OrderingResult {
    let mut best: Option<OrderingResult> = None;
    for order in candidate_orderings(inst) {
        let res = evaluate_order_unchecked(&inst.dists, &order);
        if best.as_ref().is_none_or(|b| res.value > b.value) {
            best = Some(res);
        }
    }
    best.unwrap_or_else(|| evaluate_order_unchecked(&inst.dists, &[]))
}

/// Left endpoint property: every non-final left endpoint is at most the
/// continuation value at its position.
pub fn check_lep(res: &OrderingResult, inst: &TwoPointInstance) -> bool {
    let n = res.len();
    (0..n.saturating_sub(1))
        .all(|pos| inst.vars[res.order[pos]].a <= res.continuation(pos) + THRESHOLD_TOLERANCE)
}

/// Left support property: every non-final variable has positive mass at or
/// below its continuation value.
pub fn check_lsp(res: &OrderingResult, dists: &[FiniteDist]) -> bool {
    let n = res.len();
    (0..n.saturating_sub(1))
        .all(|pos| dists[res.order[pos]].cdf(res.continuation(pos) + THRESHOLD_TOLERANCE) > 0.0)
}
