//! Structural rules: the ordered-partition shape of optimal orderings over
//! `{0, m, 1}` variables, and the widest-first rule for nested uniforms.

use serde::{Deserialize, Serialize};

use crate::dist::{FiniteDist, UniformDist};
use crate::error::{Error, Result};
use crate::eval::{evaluate_order_unchecked, OrderingResult};
use crate::shape::{positive_mean_key, sort_by_key_desc, ZeroMidOne};

pub const CLASSIFY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub position: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Variables that stop only at 1, in probe order.
    pub s_indices: Vec<usize>,
    /// Variables that stop at any positive value, in probe order.
    pub t_indices: Vec<usize>,
    pub satisfies_claim: bool,
    pub violations: Vec<Violation>,
}

/// Splits an ordering by its thresholds: position `i` is in S iff the
/// continuation value after it exceeds its middle atom. The last position
/// is always in T.
pub fn classify_st(res: &OrderingResult, dists: &[FiniteDist]) -> Result<StructureReport> {
    if res.is_empty() {
        return Err(Error::InvalidArgument("empty ordering".into()));
    }
    let n = res.len();
    let mut report = StructureReport {
        s_indices: Vec::new(),
        t_indices: Vec::new(),
        satisfies_claim: true,
        violations: Vec::new(),
    };
    let mut last_t_key: Option<f64> = None;
    for (pos, &var) in res.order.iter().enumerate() {
        let d = &dists[var];
        let m = ZeroMidOne::parse(d)?.mid_or_one();
        if pos + 1 < n && res.continuation(pos) > m + CLASSIFY_TOLERANCE {
            if !report.t_indices.is_empty() {
                report.violations.push(Violation {
                    position: pos,
                    reason: format!("variable {var} is in S but follows a T variable"),
                });
            }
            report.s_indices.push(var);
        } else {
            let key = positive_mean_key(d);
            if let Some(prev) = last_t_key {
                if key > prev + CLASSIFY_TOLERANCE {
                    report.violations.push(Violation {
                        position: pos,
                        reason: format!(
                            "variable {var} has E[X | X > 0] = {key} above the preceding T value {prev}"
                        ),
                    });
                }
            }
            last_t_key = Some(key);
            report.t_indices.push(var);
        }
    }
    report.satisfies_claim = report.violations.is_empty();
    Ok(report)
}

/// Indices from widest to narrowest support (ties by index), provided each
/// support contains the next.
pub fn nested_order(dists: &[UniformDist]) -> Result<Vec<usize>> {
    let widths: Vec<f64> = dists.iter().map(UniformDist::width).collect();
    let mut order: Vec<usize> = (0..dists.len()).collect();
    sort_by_key_desc(&mut order, &widths);
    if order.windows(2).all(|w| dists[w[0]].contains(&dists[w[1]])) {
        Ok(order)
    } else {
        Err(Error::NotNested)
    }
}

/// For nested uniform supports, probing widest first is optimal.
pub fn solve_nested_uniform(dists: &[UniformDist]) -> Result<OrderingResult> {
    if dists.is_empty() {
        return Err(Error::InvalidArgument("no variables to order".into()));
    }
    let order = nested_order(dists)?;
    Ok(evaluate_order_unchecked(dists, &order))
}
