//! Three-point instances built from subset-product instances.
//!
//! Integer `a_i` becomes `X_i` on `{0, (B^2 - a_i)/(B^2 + 1), 1}` with
//! masses `1/a_i^2, (a_i - 1)/a_i^2, (a_i - 1)/a_i`. Every `X_i` then has
//! `E[X_i | X_i > 0] = B^2/(B^2 + 1)`, and the value of the partition policy
//! `(S, T)` depends only on `gamma_T = prod_{i in T} a_i`, peaking at
//! `gamma_T = B`.

use serde::{Deserialize, Serialize};

use crate::dist::FiniteDist;
use crate::error::{Error, Result};
use crate::oracle::{brute_force_partition, MAX_PARTITION_SIZE};
use crate::shape::ZeroMidOne;

#[derive(Debug, Clone, PartialEq)]
pub struct HardnessInstance {
    pub integers: Vec<u64>,
    pub target: u64,
    pub dists: Vec<FiniteDist>,
}

impl HardnessInstance {
    pub fn generate(integers: &[u64], target: u64) -> Result<Self> {
        if integers.is_empty() {
            return Err(Error::InvalidArgument("no integers given".into()));
        }
        if target == 0 {
            return Err(Error::InvalidArgument("target must be at least 1".into()));
        }
        let b2 = (target as u128) * (target as u128);
        let dists = integers
            .iter()
            .map(|&a| {
                if a < 2 {
                    return Err(Error::InvalidArgument(format!("integer {a} must be at least 2")));
                }
                if b2 <= a as u128 {
                    return Err(Error::InvalidArgument(format!(
                        "target^2 = {b2} must exceed every integer, got {a}"
                    )));
                }
                let af = a as f64;
                let a2 = (a as u128 * a as u128) as f64;
                let m = (b2 - a as u128) as f64 / (b2 + 1) as f64;
                FiniteDist::new(
                    vec![0.0, m, 1.0],
                    vec![1.0 / a2, (af - 1.0) / a2, (af - 1.0) / af],
                )
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            integers: integers.to_vec(),
            target,
            dists,
        })
    }

    pub fn len(&self) -> usize {
        self.integers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.integers.is_empty()
    }

    /// `gamma = prod a_i`.
    pub fn gamma(&self) -> f64 {
        self.integers.iter().map(|&a| a as f64).product()
    }

    /// `B^2 / (B^2 + 1)`, the common conditional mean.
    pub fn positive_mean(&self) -> f64 {
        let b2 = (self.target as f64).powi(2);
        b2 / (b2 + 1.0)
    }

    /// `f(gamma_T) = 1 - gamma_T/gamma + (gamma_T/gamma)(1 - 1/gamma_T^2) B^2/(B^2+1)`.
    pub fn value_function(&self, gamma_t: f64) -> Result<f64> {
        if !(gamma_t >= 1.0) {
            return Err(Error::InvalidArgument(format!("gamma_T = {gamma_t} must be at least 1")));
        }
        let r = gamma_t / self.gamma();
        Ok(1.0 - r + r * (1.0 - 1.0 / (gamma_t * gamma_t)) * self.positive_mean())
    }

    /// `1 - prod_S (1 - q_i) + prod_S (1 - q_i) (1 - prod_T (1 - p_j - q_j)) B^2/(B^2+1)`.
    pub fn closed_form_value(&self, s: &[usize], t: &[usize]) -> Result<f64> {
        let mut miss_s = 1.0;
        for &i in s {
            miss_s *= 1.0 - ZeroMidOne::parse(&self.dists[i])?.q;
        }
        let mut zero_t = 1.0;
        for &j in t {
            let z = ZeroMidOne::parse(&self.dists[j])?;
            zero_t *= 1.0 - z.p - z.q;
        }
        Ok(1.0 - miss_s + miss_s * (1.0 - zero_t) * self.positive_mean())
    }

    /// `prod_{i in t} a_i`, or `None` on overflow.
    pub fn product(&self, t: &[usize]) -> Option<u128> {
        t.iter()
            .try_fold(1u128, |acc, &i| acc.checked_mul(self.integers[i] as u128))
    }

    pub fn gamma_t(&self, t: &[usize]) -> f64 {
        t.iter().map(|&i| self.integers[i] as f64).product()
    }
}

/// Value of the fixed partition policy: S (probed first) stops only at 1,
/// T (probed after) stops at any positive value. The stopping value of the
/// same ordering can be larger when some `m_i` in S beats what follows it.
pub fn partition_policy_value(dists: &[FiniteDist], s: &[usize], t: &[usize]) -> Result<f64> {
    let mut v = 0.0;
    for &j in t.iter().rev() {
        let d = &dists[j];
        ZeroMidOne::parse(d)?;
        v = d.mean() + d.mass_at(0.0) * v;
    }
    for &i in s.iter().rev() {
        let q = ZeroMidOne::parse(&dists[i])?.q;
        v = q + (1.0 - q) * v;
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetDecision {
    /// Whether the optimal partition's T multiplies exactly to the target.
    pub answer: bool,
    pub gamma_t_opt: f64,
    /// T of the optimal partition, ascending.
    pub witness: Vec<usize>,
    pub value: f64,
}

/// Solves the partitioning problem exhaustively and reads the subset
/// product answer off the optimal T.
pub fn decide_subset_product(inst: &HardnessInstance) -> Result<SubsetDecision> {
    if inst.len() > MAX_PARTITION_SIZE {
        return Err(Error::SizeLimit {
            n: inst.len(),
            max: MAX_PARTITION_SIZE,
        });
    }
    let best = brute_force_partition(&inst.dists)?;
    let mut witness = best.t.clone();
    witness.sort_unstable();
    Ok(SubsetDecision {
        answer: inst.product(&witness) == Some(inst.target as u128),
        gamma_t_opt: inst.gamma_t(&witness),
        witness,
        value: best.value,
    })
}
