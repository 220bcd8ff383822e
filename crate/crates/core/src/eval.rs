//! Exact stopping values for a fixed ordering.
//!
//! For an ordering the optimal rule accepts the variable at position `j` iff
//! its realization is at least the value of the suffix after it. The suffix
//! values are computed right to left in one pass and kept as thresholds.

use std::borrow::Borrow;

use serde::{Deserialize, Serialize};

use crate::dist::{finite_only, Dist, FiniteDist, UniformDist};
use crate::error::{Error, Result};

/// Expectations needed by the backward recursion.
pub trait Reward {
    /// E[max(X, c)].
    fn expected_max(&self, c: f64) -> f64;

    /// E[(X - c)^+], computed directly rather than as `expected_max(c) - c`.
    fn expected_excess(&self, c: f64) -> f64;

    fn expectation(&self) -> f64;
}

impl Reward for FiniteDist {
    fn expected_max(&self, c: f64) -> f64 {
        self.iter().map(|(x, w)| w * x.max(c)).sum()
    }

    fn expected_excess(&self, c: f64) -> f64 {
        self.iter()
            .filter(|&(x, _)| x > c)
            .map(|(x, w)| w * (x - c))
            .sum()
    }

    fn expectation(&self) -> f64 {
        self.mean()
    }
}

impl Reward for UniformDist {
    fn expected_max(&self, c: f64) -> f64 {
        let (lo, hi) = (self.lo(), self.hi());
        if c >= hi {
            c
        } else if c <= lo {
            0.5 * (lo + hi)
        } else {
            let width = hi - lo;
            c * (c - lo) / width + 0.5 * (hi + c) * ((hi - c) / width)
        }
    }

    fn expected_excess(&self, c: f64) -> f64 {
        let (lo, hi) = (self.lo(), self.hi());
        if c >= hi {
            0.0
        } else if c <= lo {
            0.5 * (lo + hi) - c
        } else {
            (hi - c) * (hi - c) / (2.0 * (hi - lo))
        }
    }

    fn expectation(&self) -> f64 {
        self.mean()
    }
}

impl Reward for Dist {
    fn expected_max(&self, c: f64) -> f64 {
        match self {
            Dist::Finite(d) => d.expected_max(c),
            Dist::Uniform(u) => u.expected_max(c),
        }
    }

    fn expected_excess(&self, c: f64) -> f64 {
        match self {
            Dist::Finite(d) => d.expected_excess(c),
            Dist::Uniform(u) => u.expected_excess(c),
        }
    }

    fn expectation(&self) -> f64 {
        self.mean()
    }
}

impl<T: Reward + ?Sized> Reward for &T {
    fn expected_max(&self, c: f64) -> f64 {
        (**self).expected_max(c)
    }

    fn expected_excess(&self, c: f64) -> f64 {
        (**self).expected_excess(c)
    }

    fn expectation(&self) -> f64 {
        (**self).expectation()
    }
}

fn check_level(c: f64) -> Result<()> {
    if c >= 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "continuation value {c} must be finite and non-negative"
        )))
    }
}

/// E[max(X, c)] for `c >= 0`.
pub fn emax(d: &Dist, c: f64) -> Result<f64> {
    check_level(c)?;
    Ok(d.expected_max(c))
}

/// E[(X - c)^+] for `c >= 0`: the processing time at start time `c` of the
/// scheduling job associated with `X`.
pub fn excess(d: &Dist, c: f64) -> Result<f64> {
    check_level(c)?;
    Ok(d.expected_excess(c))
}

/// An ordering with its stopping value and acceptance thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingResult {
    /// `order[j]` is the variable probed at position `j`.
    pub order: Vec<usize>,
    pub value: f64,
    /// `thresholds[j]` is the value of the suffix starting at position `j`;
    /// `thresholds[n] = 0`. Position `j` accepts iff `X >= thresholds[j + 1]`.
    pub thresholds: Vec<f64>,
}

impl OrderingResult {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The value the player forgoes by rejecting at position `pos`.
    pub fn continuation(&self, pos: usize) -> f64 {
        self.thresholds[pos + 1]
    }
}

fn suffix_values<D: Reward>(seq: impl DoubleEndedIterator<Item = D> + ExactSizeIterator) -> Vec<f64> {
    let n = seq.len();
    let mut thresholds = vec![0.0; n + 1];
    for (j, d) in seq.enumerate().rev() {
        thresholds[j] = d.expected_max(thresholds[j + 1]);
    }
    thresholds
}

/// Values the sequence in the given order.
pub fn sequence_value<D: Reward>(seq: &[D]) -> OrderingResult {
    if seq.is_empty() {
        return OrderingResult {
            order: Vec::new(),
            value: 0.0,
            thresholds: Vec::new(),
        };
    }
    let thresholds = suffix_values(seq.iter());
    OrderingResult {
        order: (0..seq.len()).collect(),
        value: thresholds[0],
        thresholds,
    }
}

/// Stopping value of a sequence followed by a guaranteed fallback reward.
pub fn value_with_tail<D: Reward>(seq: impl DoubleEndedIterator<Item = D>, tail: f64) -> f64 {
    seq.rev().fold(tail, |cont, d| d.expected_max(cont))
}

/// Checks that `order` is a permutation of `0..n`.
pub fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidArgument(format!(
            "ordering has {} entries for {n} variables",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!(
                "ordering {order:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Values `dists` probed in `order`.
pub fn evaluate_order<D: Reward>(dists: &[D], order: &[usize]) -> Result<OrderingResult> {
    check_permutation(order, dists.len())?;
    Ok(evaluate_order_unchecked(dists, order))
}

pub(crate) fn evaluate_order_unchecked<D: Reward>(dists: &[D], order: &[usize]) -> OrderingResult {
    if order.is_empty() {
        return sequence_value::<D>(&[]);
    }
    let thresholds = suffix_values(order.iter().map(|&i| &dists[i]));
    OrderingResult {
        order: order.to_vec(),
        value: thresholds[0],
        thresholds,
    }
}

/// E[max_i X_i] over independent finite-support variables:
/// `sum_v v * (prod_i F_i(v) - prod_i F_i(v-))` over the union of atoms.
pub fn hindsight_max_finite<D: Borrow<FiniteDist>>(seq: &[D]) -> f64 {
    if seq.is_empty() {
        return 0.0;
    }
    let mut grid: Vec<f64> = seq
        .iter()
        .flat_map(|d| d.borrow().atoms().iter().copied())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    // cursor[i] indexes the first atom of variable i above the current grid point
    let mut cursor = vec![0usize; seq.len()];
    let mut cdf = vec![0.0f64; seq.len()];
    let mut prev_joint = 0.0;
    let mut total = 0.0;
    for &v in &grid {
        for (i, d) in seq.iter().enumerate() {
            let d = d.borrow();
            while cursor[i] < d.len() && d.atoms()[cursor[i]] <= v {
                cdf[i] += d.masses()[cursor[i]];
                cursor[i] += 1;
            }
        }
        let joint: f64 = cdf.iter().product();
        total += v * (joint - prev_joint);
        prev_joint = joint;
    }
    total
}

/// E[max_i X_i]; uniform variables are not supported.
pub fn hindsight_max(seq: &[Dist]) -> Result<f64> {
    Ok(hindsight_max_finite(&finite_only(seq)?))
}

/// The stopping value split into per-job processing times of the dual
/// scheduling problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcessProfile {
    /// `excess[j] = E[(X_j - c_j)^+]`.
    pub excess: Vec<f64>,
    /// `continuation[j] = c_j`, the value of the suffix after position `j`.
    pub continuation: Vec<f64>,
    /// Sum of the excess values; equals the stopping value.
    pub makespan: f64,
}

/// Decomposes the stopping value of `seq` as `sum_j E[(X_j - c_j)^+]`.
pub fn makespan_value<D: Reward>(seq: &[D]) -> ExcessProfile {
    let res = sequence_value(seq);
    let continuation: Vec<f64> = (0..seq.len()).map(|j| res.continuation(j)).collect();
    let excess: Vec<f64> = seq
        .iter()
        .zip(&continuation)
        .map(|(d, &c)| d.expected_excess(c))
        .collect();
    ExcessProfile {
        makespan: excess.iter().sum(),
        excess,
        continuation,
    }
}
