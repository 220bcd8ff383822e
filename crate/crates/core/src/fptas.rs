//! Approximation scheme for three-point distributions with a common right
//! endpoint.
//!
//! For variables on `{0, m_i, 1}` some optimal ordering is an ordered
//! partition: a block S accepted only at 1, followed by a block T accepted
//! at any positive value and sorted by decreasing `E[X | X > 0]`. The search
//! grows partitions one variable at a time (in increasing `E` order,
//! prepending to S or to T) and after each round keeps one partition per
//! multiplicative bucket of `V(T)`: the one with the largest `V(S)`.
//!
//! Variables on `{a_i, m_i, 1}` are handled by guessing the last variable:
//! for each `i` the others have their left endpoint moved to 0, `E[X_i]` is
//! pinned as the final guaranteed reward, and the resulting ordering is
//! scored on the original distributions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::FiniteDist;
use crate::error::{Error, Result};
use crate::eval::{evaluate_order_unchecked, hindsight_max_finite, value_with_tail, Reward};
use crate::shape::{positive_mean_key, LeftMidOne, ZeroMidOne};

/// A candidate split of the variables processed so far. Both blocks are
/// stored in probe order, which is decreasing `E[X | X > 0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedPartition {
    pub s_indices: Vec<usize>,
    pub t_indices: Vec<usize>,
    /// V(S) with nothing after it.
    pub v_s: f64,
    /// V(T), including the pinned tail reward if the search has one.
    pub v_t: f64,
}

impl OrderedPartition {
    fn empty(tail: f64) -> Self {
        Self {
            s_indices: Vec::new(),
            t_indices: Vec::new(),
            v_s: 0.0,
            v_t: tail,
        }
    }

    /// The partition with `var` probed first in S.
    fn prepend_s(&self, var: usize, d: &FiniteDist) -> Self {
        let mut s_indices = Vec::with_capacity(self.s_indices.len() + 1);
        s_indices.push(var);
        s_indices.extend_from_slice(&self.s_indices);
        Self {
            s_indices,
            t_indices: self.t_indices.clone(),
            v_s: d.expected_max(self.v_s),
            v_t: self.v_t,
        }
    }

    /// The partition with `var` probed first in T.
    fn prepend_t(&self, var: usize, d: &FiniteDist) -> Self {
        let mut t_indices = Vec::with_capacity(self.t_indices.len() + 1);
        t_indices.push(var);
        t_indices.extend_from_slice(&self.t_indices);
        Self {
            s_indices: self.s_indices.clone(),
            t_indices,
            v_s: self.v_s,
            v_t: d.expected_max(self.v_t),
        }
    }

    /// V(S, T): S followed by T.
    pub fn combined_value(&self, dists: &[FiniteDist]) -> f64 {
        value_with_tail(self.s_indices.iter().map(|&i| &dists[i]), self.v_t)
    }

    pub fn ordering(&self) -> Vec<usize> {
        self.s_indices.iter().chain(&self.t_indices).copied().collect()
    }
}

/// Parameters of one partition search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FptasConfig {
    pub epsilon: f64,
    /// Scale parameter; the guarantees need `OPT / 2 <= max_param <= OPT`.
    pub max_param: f64,
    /// Number of variables the grid is sized for.
    pub n: usize,
    /// Reward guaranteed after the last searched variable. When set, every
    /// partition's T block ends with it and the empty-T bucket is unused.
    pub pinned_tail: Option<f64>,
}

impl FptasConfig {
    pub fn new(epsilon: f64, max_param: f64, n: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(max_param > 0.0) || !max_param.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale parameter {max_param} must be positive"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("grid needs n >= 1".into()));
        }
        Ok(Self {
            epsilon,
            max_param,
            n,
            pinned_tail: None,
        })
    }

    pub fn with_pinned_tail(mut self, tail: f64) -> Self {
        self.pinned_tail = Some(tail);
        self
    }

    /// Grid ratio `1 - epsilon / 2n`.
    pub fn rho(&self) -> f64 {
        1.0 - self.epsilon / (2.0 * self.n as f64)
    }

    /// Partitions whose V(T) falls to this level or below are dropped.
    pub fn floor(&self) -> f64 {
        self.epsilon / (2.0 * self.n as f64) * self.max_param
    }

    fn level(&self, top: f64, j: usize) -> f64 {
        self.rho().powi(j as i32) * top
    }

    /// `J = max { j : rho^j * top >= floor }`, or 0 when even `top` is
    /// below the floor.
    pub fn bucket_count(&self, top: f64) -> usize {
        let floor = self.floor();
        if !(top >= floor) {
            return 0;
        }
        let guess = ((floor / top).ln() / self.rho().ln()).floor();
        let mut j = if guess.is_finite() && guess > 0.0 { guess as usize } else { 0 };
        while self.level(top, j + 1) >= floor {
            j += 1;
        }
        while j > 0 && self.level(top, j) < floor {
            j -= 1;
        }
        j
    }

    /// The `j` in `1..=buckets` with `rho^j top < v <= rho^(j-1) top`.
    fn bucket_of(&self, v: f64, top: f64, buckets: usize) -> Option<usize> {
        if buckets == 0 || !(v > self.level(top, buckets)) {
            return None;
        }
        let guess = ((v / top).ln() / self.rho().ln()).ceil();
        let mut j = if guess.is_finite() && guess > 1.0 { guess as usize } else { 1 };
        j = j.min(buckets);
        while j > 1 && v > self.level(top, j - 1) {
            j -= 1;
        }
        while v <= self.level(top, j) {
            j += 1;
        }
        Some(j)
    }

    fn in_empty_bucket(&self, p: &OrderedPartition) -> bool {
        self.pinned_tail.is_none() && p.t_indices.is_empty()
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon {epsilon} outside (0, 1)")))
    }
}

/// `ceil(log_{1/rho}(4n / epsilon)) + 2`: the most partitions a trim can
/// return when `max_param >= OPT / 2`.
pub fn trim_size_bound(epsilon: f64, n: usize) -> usize {
    let rho = 1.0 - epsilon / (2.0 * n as f64);
    let buckets = ((4.0 * n as f64 / epsilon).ln() / (1.0 / rho).ln()).ceil();
    buckets as usize + 2
}

fn better_in_bucket(cand: &OrderedPartition, cur: &OrderedPartition) -> bool {
    cand.v_s > cur.v_s || (cand.v_s == cur.v_s && cand.s_indices < cur.s_indices)
}

/// Keeps the largest-V(S) partition of each V(T) bucket.
pub fn trim(partitions: &[OrderedPartition], cfg: &FptasConfig) -> Vec<OrderedPartition> {
    let top = partitions
        .iter()
        .filter(|p| !cfg.in_empty_bucket(p))
        .map(|p| p.v_t)
        .fold(0.0, f64::max);
    let buckets = cfg.bucket_count(top);

    let mut kept: BTreeMap<usize, &OrderedPartition> = BTreeMap::new();
    for p in partitions {
        let bucket = if cfg.in_empty_bucket(p) {
            Some(0)
        } else {
            cfg.bucket_of(p.v_t, top, buckets)
        };
        let Some(j) = bucket else { continue };
        kept.entry(j)
            .and_modify(|cur| {
                if better_in_bucket(p, cur) {
                    *cur = p;
                }
            })
            .or_insert(p);
    }
    kept.into_values().cloned().collect()
}

/// Partition lists produced by a search, round by round.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    /// The variables in processing order (increasing `E[X | X > 0]`).
    pub processing_order: Vec<usize>,
    /// List size after extension and before trimming, per round.
    pub before_trim: Vec<usize>,
    /// The list after each round, trimmed unless the search ran untrimmed.
    pub rounds: Vec<Vec<OrderedPartition>>,
}

impl SearchTrace {
    pub fn final_list(&self) -> &[OrderedPartition] {
        self.rounds.last().map_or(&[], Vec::as_slice)
    }
}

/// Runs the partition search over all of `dists`. With `trimmed = false`
/// every partition is kept (exponential; for cross-checking only).
pub fn search(dists: &[FiniteDist], cfg: &FptasConfig, trimmed: bool) -> SearchTrace {
    let keys: Vec<f64> = dists.iter().map(positive_mean_key).collect();
    let mut processing_order: Vec<usize> = (0..dists.len()).collect();
    processing_order.sort_by(|&i, &j| keys[i].total_cmp(&keys[j]));

    let mut list = vec![OrderedPartition::empty(cfg.pinned_tail.unwrap_or(0.0))];
    let mut before_trim = Vec::with_capacity(dists.len());
    let mut rounds = Vec::with_capacity(dists.len());
    for &var in &processing_order {
        let d = &dists[var];
        let grown: Vec<OrderedPartition> = list
            .iter()
            .flat_map(|p| [p.prepend_s(var, d), p.prepend_t(var, d)])
            .collect();
        before_trim.push(grown.len());
        list = if trimmed { trim(&grown, cfg) } else { grown };
        rounds.push(list.clone());
    }
    SearchTrace {
        processing_order,
        before_trim,
        rounds,
    }
}

/// Output of the approximation scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FptasResult {
    pub ordering: Vec<usize>,
    /// Stopping value of `ordering` on the original distributions.
    pub value: f64,
    /// List size after each trim of the run that produced `ordering`.
    pub partitions_kept: Vec<usize>,
    /// List size before each trim of that run.
    pub partitions_before_trim: Vec<usize>,
    pub s_indices: Vec<usize>,
    pub t_indices: Vec<usize>,
    /// For nonzero left endpoints: the variable pinned last.
    pub pinned_last: Option<usize>,
}

fn best_partition<'a>(list: &'a [OrderedPartition], dists: &[FiniteDist]) -> Option<&'a OrderedPartition> {
    let mut best: Option<(&OrderedPartition, f64)> = None;
    for p in list {
        let v = p.combined_value(dists);
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((p, v));
        }
    }
    best.map(|(p, _)| p)
}

fn validate_common(dists: &[FiniteDist], epsilon: f64) -> Result<()> {
    check_epsilon(epsilon)?;
    if dists.is_empty() {
        return Err(Error::InvalidArgument("no variables to order".into()));
    }
    for d in dists {
        ZeroMidOne::parse(d)?;
    }
    Ok(())
}

/// Ordering within `1 - epsilon` of optimal for variables on `{0, m_i, 1}`,
/// with the scale parameter set to half the hindsight maximum.
pub fn solve_common_endpoints(dists: &[FiniteDist], epsilon: f64) -> Result<FptasResult> {
    validate_common(dists, epsilon)?;
    let max_param = 0.5 * hindsight_max_finite(dists);
    if max_param <= 0.0 {
        // every variable is identically zero
        return Ok(trivial_result(dists));
    }
    solve_common_endpoints_with_scale(dists, epsilon, max_param)
}

/// As [`solve_common_endpoints`] with an explicit scale parameter.
pub fn solve_common_endpoints_with_scale(
    dists: &[FiniteDist],
    epsilon: f64,
    max_param: f64,
) -> Result<FptasResult> {
    validate_common(dists, epsilon)?;
    let cfg = FptasConfig::new(epsilon, max_param, dists.len())?;
    let trace = search(dists, &cfg, true);
    let best = best_partition(trace.final_list(), dists)
        .ok_or_else(|| Error::Invariant("partition search kept no partition".into()))?;
    let ordering = best.ordering();
    Ok(FptasResult {
        value: evaluate_order_unchecked(dists, &ordering).value,
        ordering,
        partitions_kept: trace.rounds.iter().map(Vec::len).collect(),
        partitions_before_trim: trace.before_trim.clone(),
        s_indices: best.s_indices.clone(),
        t_indices: best.t_indices.clone(),
        pinned_last: None,
    })
}

fn trivial_result(dists: &[FiniteDist]) -> FptasResult {
    let ordering: Vec<usize> = (0..dists.len()).collect();
    FptasResult {
        value: evaluate_order_unchecked(dists, &ordering).value,
        t_indices: ordering.clone(),
        ordering,
        partitions_kept: Vec::new(),
        partitions_before_trim: Vec::new(),
        s_indices: Vec::new(),
        pinned_last: None,
    }
}

fn pinned_run(dists: &[FiniteDist], last: usize, epsilon: f64) -> Result<FptasResult> {
    let others: Vec<usize> = (0..dists.len()).filter(|&j| j != last).collect();
    let primed: Vec<FiniteDist> = others
        .iter()
        .map(|&j| LeftMidOne::parse(&dists[j]).map(|s| s.with_zero_left()))
        .collect::<Result<_>>()?;
    let tail = dists[last].mean();

    let mut with_tail = primed.clone();
    with_tail.push(FiniteDist::point(tail)?);
    let max_param = 0.5 * hindsight_max_finite(&with_tail);

    let (local_s, local_t, kept, before) = if max_param > 0.0 && !primed.is_empty() {
        let cfg = FptasConfig::new(epsilon, max_param, dists.len())?.with_pinned_tail(tail);
        let trace = search(&primed, &cfg, true);
        let best = best_partition(trace.final_list(), &primed)
            .ok_or_else(|| Error::Invariant("partition search kept no partition".into()))?;
        (
            best.s_indices.clone(),
            best.t_indices.clone(),
            trace.rounds.iter().map(Vec::len).collect(),
            trace.before_trim.clone(),
        )
    } else {
        (Vec::new(), (0..others.len()).collect(), Vec::new(), Vec::new())
    };

    let s_indices: Vec<usize> = local_s.iter().map(|&k| others[k]).collect();
    let mut t_indices: Vec<usize> = local_t.iter().map(|&k| others[k]).collect();
    t_indices.push(last);
    let ordering: Vec<usize> = s_indices.iter().chain(&t_indices).copied().collect();
    Ok(FptasResult {
        value: evaluate_order_unchecked(dists, &ordering).value,
        ordering,
        partitions_kept: kept,
        partitions_before_trim: before,
        s_indices,
        t_indices,
        pinned_last: Some(last),
    })
}

/// Ordering within `1 - epsilon` of optimal for variables on
/// `{a_i, m_i, 1}`. Runs one pinned search per candidate last variable;
/// ties go to the smallest pinned index.
pub fn solve_general_left(dists: &[FiniteDist], epsilon: f64) -> Result<FptasResult> {
    check_epsilon(epsilon)?;
    if dists.is_empty() {
        return Err(Error::InvalidArgument("no variables to order".into()));
    }
    for d in dists {
        LeftMidOne::parse(d)?;
    }
    let runs: Vec<FptasResult> = (0..dists.len())
        .into_par_iter()
        .map(|last| pinned_run(dists, last, epsilon))
        .collect::<Result<_>>()?;
    let mut best: Option<FptasResult> = None;
    for run in runs {
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one candidate"))
}
