//! Exhaustive ground truth.
//!
//! Nothing here prunes: every permutation, or every ordered partition, is
//! valued from scratch with the backward recursion.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::FiniteDist;
use crate::error::{Error, Result};
use crate::eval::{evaluate_order_unchecked, OrderingResult, Reward};
use crate::rules::CLASSIFY_TOLERANCE;
use crate::shape::{positive_mean_key, sort_by_key_desc, ZeroMidOne};

pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;
pub const MAX_PERMUTATION_SIZE: usize = 10;
pub const MAX_PARTITION_SIZE: usize = 20;

/// Best value over all orderings and every ordering attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_value: f64,
    /// Orderings within the tie tolerance of `best_value`, lexicographic.
    pub best_orderings: Vec<Vec<usize>>,
    pub evaluated_count: u64,
}

impl OracleResult {
    pub fn best_ordering(&self) -> &[usize] {
        &self.best_orderings[0]
    }
}

struct Chunk {
    max: f64,
    near_best: Vec<(Vec<usize>, f64)>,
    count: u64,
}

fn scan_with_first<D: Reward>(seq: &[D], first: usize, tie_tol: f64) -> Chunk {
    let n = seq.len();
    let rest: Vec<usize> = (0..n).filter(|&i| i != first).collect();
    let mut chunk = Chunk {
        max: f64::NEG_INFINITY,
        near_best: Vec::new(),
        count: 0,
    };
    for tail in rest.into_iter().permutations(n - 1) {
        let mut order = Vec::with_capacity(n);
        order.push(first);
        order.extend(tail);
        let value = evaluate_order_unchecked(seq, &order).value;
        chunk.count += 1;
        if value > chunk.max {
            chunk.max = value;
            let floor = value - tie_tol;
            chunk.near_best.retain(|(_, v)| *v >= floor);
        }
        if value >= chunk.max - tie_tol {
            chunk.near_best.push((order, value));
        }
    }
    chunk
}

/// Enumerates all `n!` orderings (`1 <= n <= 10`).
///
/// Work is split by the first probed variable; each worker keeps every
/// ordering within `tie_tol` of its own maximum, which is a superset of the
/// orderings within `tie_tol` of the global maximum, so the result does not
/// depend on the thread count.
pub fn brute_force_order<D: Reward + Sync>(seq: &[D], tie_tol: f64) -> Result<OracleResult> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no variables to order".into()));
    }
    if n > MAX_PERMUTATION_SIZE {
        return Err(Error::SizeLimit {
            n,
            max: MAX_PERMUTATION_SIZE,
        });
    }
    if !(tie_tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tie tolerance {tie_tol} must be non-negative"
        )));
    }

    let chunks: Vec<Chunk> = (0..n)
        .into_par_iter()
        .map(|first| scan_with_first(seq, first, tie_tol))
        .collect();

    let best_value = chunks.iter().map(|c| c.max).fold(f64::NEG_INFINITY, f64::max);
    let floor = best_value - tie_tol;
    let evaluated_count = chunks.iter().map(|c| c.count).sum();
    // chunks come back in first-index order and each is lexicographic
    let best_orderings = chunks
        .into_iter()
        .flat_map(|c| c.near_best)
        .filter(|(_, v)| *v >= floor)
        .map(|(order, _)| order)
        .collect();
    Ok(OracleResult {
        best_value,
        best_orderings,
        evaluated_count,
    })
}

/// The best ordered partition over `{0, m, 1}` variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    /// Variables accepted only at the top value, probed first by index.
    pub s: Vec<usize>,
    /// The remaining variables, by decreasing E[X | X > 0].
    pub t: Vec<usize>,
    pub value: f64,
}

impl PartitionResult {
    pub fn ordering(&self) -> Vec<usize> {
        self.s.iter().chain(&self.t).copied().collect()
    }
}

/// Splits `mask` into an index-ordered S and an E-descending T.
pub fn partition_from_mask(mask: u64, keys: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let (mut t, s): (Vec<usize>, Vec<usize>) = (0..keys.len()).partition(|&i| mask >> i & 1 == 1);
    sort_by_key_desc(&mut t, keys);
    (s, t)
}

/// Whether the stopping rule of the ordering is the partition's own rule:
/// the first `s_len` positions face a continuation above their middle atom
/// and every later non-final position does not.
fn rule_matches_labels(res: &OrderingResult, s_len: usize, mids: &[f64]) -> bool {
    (0..res.len() - 1).all(|pos| {
        let rejects_mid = res.continuation(pos) > mids[res.order[pos]] + CLASSIFY_TOLERANCE;
        rejects_mid == (pos < s_len)
    })
}

/// Enumerates all `2^n - 1` ordered partitions with non-empty T
/// (`n <= 20`, supports within `{0, m_i, 1}`).
///
/// A partition whose stopping rule treats some variable as belonging to the
/// other block is really a different partition and is skipped, so the
/// reported `(s, t)` is the policy that attains `value`.
pub fn brute_force_partition(dists: &[FiniteDist]) -> Result<PartitionResult> {
    let n = dists.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no variables to partition".into()));
    }
    if n > MAX_PARTITION_SIZE {
        return Err(Error::SizeLimit {
            n,
            max: MAX_PARTITION_SIZE,
        });
    }
    let mids: Vec<f64> = dists
        .iter()
        .map(|d| ZeroMidOne::parse(d).map(|z| z.mid_or_one()))
        .collect::<Result<_>>()?;
    let keys: Vec<f64> = dists.iter().map(positive_mean_key).collect();

    let mut best: Option<PartitionResult> = None;
    for mask in 1u64..(1u64 << n) {
        let (s, t) = partition_from_mask(mask, &keys);
        let order: Vec<usize> = s.iter().chain(&t).copied().collect();
        let res = evaluate_order_unchecked(dists, &order);
        if !rule_matches_labels(&res, s.len(), &mids) {
            continue;
        }
        let value = res.value;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(PartitionResult { s, t, value });
        }
    }
    Ok(best.expect("at least one partition has non-empty T"))
}
