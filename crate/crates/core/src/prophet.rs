//! Prophet ratio for two-point instances and the constructive 1.25
//! certificate.
//!
//! With `i*` the variable of largest left endpoint, the certificate keeps
//! `U` (right endpoints at least `b*`), `W` (right endpoints in `[a*, b*)`)
//! and `i*` itself, and compares the orderings `(U, W, i*)` and
//! `(U, i*, W)` against `MAX = E[max over W and i*]`.

use serde::{Deserialize, Serialize};

use crate::dist::FiniteDist;
use crate::error::{Error, Result};
use crate::eval::{hindsight_max_finite, sequence_value};
use crate::shape::sort_by_key_desc;
use crate::two_point::{solve, TwoPoint, TwoPointInstance};

/// Largest `|W|` the enumeration check accepts.
pub const MAX_ENUMERATED_W: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProphetCertificate {
    pub i_star: usize,
    /// By decreasing right endpoint, ties by index.
    pub u: Vec<usize>,
    /// By decreasing right endpoint, ties by index.
    pub w: Vec<usize>,
    pub a_star: f64,
    pub b_star: f64,
    pub p_star: f64,
    /// E[max over W | some variable of W takes its right endpoint].
    pub b_w: f64,
    /// P(some variable of W takes its right endpoint).
    pub p_w: f64,
    pub mu_star: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub max: f64,
    pub sigma1: Vec<usize>,
    pub sigma2: Vec<usize>,
    pub sigma1_value: f64,
    pub sigma2_value: f64,
    /// W is empty; only the T3 bound is meaningful.
    pub degenerate: bool,
}

impl ProphetCertificate {
    pub fn bound(&self) -> f64 {
        self.t1.max(self.t2).max(self.t3)
    }

    pub fn certified_value(&self) -> f64 {
        self.sigma1_value.max(self.sigma2_value)
    }

    /// The certificate's variables: `U`, `W` and `i*`.
    pub fn kept(&self) -> Vec<usize> {
        let mut kept: Vec<usize> = self.u.iter().chain(&self.w).copied().collect();
        kept.push(self.i_star);
        kept.sort_unstable();
        kept
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProphetReport {
    pub e_max: f64,
    pub best_order_value: f64,
    pub best_order: Vec<usize>,
    /// `e_max / best_order_value`; 1 when both vanish.
    pub ratio: f64,
    pub certificate: Option<ProphetCertificate>,
}

pub fn prophet_ratio(inst: &TwoPointInstance) -> Result<ProphetReport> {
    if inst.is_empty() {
        return Err(Error::InvalidArgument("no variables".into()));
    }
    let e_max = hindsight_max_finite(inst.dists());
    let best = solve(inst);
    let ratio = if best.value > 0.0 { e_max / best.value } else { 1.0 };
    Ok(ProphetReport {
        e_max,
        best_order_value: best.value,
        best_order: best.order,
        ratio,
        certificate: Some(build_certificate(inst)?),
    })
}

/// `b_w` in closed form: scanning W by decreasing right endpoint, the
/// `k`-th variable sets the maximum iff it hits and no earlier one did.
fn hit_max(vars: &[TwoPoint], w: &[usize]) -> (f64, f64) {
    let mut miss = 1.0;
    let mut weighted = 0.0;
    for &i in w {
        weighted += vars[i].b * vars[i].p * miss;
        miss *= 1.0 - vars[i].p;
    }
    let p_w = 1.0 - miss;
    (if p_w > 0.0 { weighted / p_w } else { 0.0 }, p_w)
}

/// `(b_w, p_w)` by enumerating all `2^|W|` hit patterns. Reference for the
/// closed form.
pub fn hit_max_enumerated(inst: &TwoPointInstance, w: &[usize]) -> Result<(f64, f64)> {
    if w.len() > MAX_ENUMERATED_W {
        return Err(Error::SizeLimit {
            n: w.len(),
            max: MAX_ENUMERATED_W,
        });
    }
    let vars = inst.vars();
    let mut p_w = 0.0;
    let mut weighted = 0.0;
    for mask in 1u32..(1u32 << w.len()) {
        let mut prob = 1.0;
        let mut top = 0.0f64;
        for (k, &i) in w.iter().enumerate() {
            let v = vars[i];
            if mask >> k & 1 == 1 {
                prob *= v.p;
                top = top.max(v.b);
            } else {
                prob *= 1.0 - v.p;
                top = top.max(v.a);
            }
        }
        p_w += prob;
        weighted += prob * top;
    }
    Ok((if p_w > 0.0 { weighted / p_w } else { 0.0 }, p_w))
}

pub fn build_certificate(inst: &TwoPointInstance) -> Result<ProphetCertificate> {
    let vars = inst.vars();
    if vars.is_empty() {
        return Err(Error::InvalidArgument("no variables".into()));
    }
    let mut i_star = 0;
    for (i, v) in vars.iter().enumerate() {
        if v.a > vars[i_star].a {
            i_star = i;
        }
    }
    let TwoPoint { a: a_star, b: b_star, p: p_star } = vars[i_star];

    let keys: Vec<f64> = vars.iter().map(|v| v.b).collect();
    let mut u: Vec<usize> = (0..vars.len()).filter(|&i| i != i_star && vars[i].b >= b_star).collect();
    let mut w: Vec<usize> = (0..vars.len())
        .filter(|&i| vars[i].b < b_star && vars[i].b >= a_star)
        .collect();
    sort_by_key_desc(&mut u, &keys);
    sort_by_key_desc(&mut w, &keys);

    let degenerate = w.is_empty();
    let (b_w, p_w) = if degenerate { (0.0, 0.0) } else { hit_max(vars, &w) };
    let mu_star = p_star * b_star + (1.0 - p_star) * a_star;
    let t1 = p_w * b_w + (1.0 - p_w) * mu_star;
    let t2 = p_star * b_star + (1.0 - p_star) * p_w * b_w;
    let t3 = mu_star;
    let max = t2 + (1.0 - p_star) * (1.0 - p_w) * a_star;

    let sigma1: Vec<usize> = u.iter().chain(&w).copied().chain([i_star]).collect();
    let sigma2: Vec<usize> = u.iter().copied().chain([i_star]).chain(w.iter().copied()).collect();
    let value_of = |order: &[usize]| {
        let seq: Vec<&FiniteDist> = order.iter().map(|&i| &inst.dists()[i]).collect();
        sequence_value(&seq).value
    };
    Ok(ProphetCertificate {
        i_star,
        a_star,
        b_star,
        p_star,
        b_w,
        p_w,
        mu_star,
        t1,
        t2,
        t3,
        max,
        sigma1_value: value_of(&sigma1),
        sigma2_value: value_of(&sigma2),
        sigma1,
        sigma2,
        u,
        w,
        degenerate,
    })
}

/// `X1 = 0.5` or `1 / (2 eps)` with probabilities `1 - eps`, `eps`;
/// `X2` uniform on `{0, 1}`. The ratio approaches 1.25 as `eps` shrinks.
pub fn tightness_instance(eps: f64) -> Result<TwoPointInstance> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps {eps} outside (0, 1)")));
    }
    if eps > 0.5 {
        return Err(Error::InvalidArgument(format!(
            "eps {eps} > 0.5 puts the high value of X1 below its low value"
        )));
    }
    TwoPointInstance::from_triples(&[(0.5, 1.0 / (2.0 * eps), eps), (0.0, 1.0, 0.5)])
}

/// Exact ratio of [`tightness_instance`]: `(5/4 - 3 eps/4) / (1 - eps/4)`.
/// Probing `X2` first earns `1 - eps/4`; `X1` first earns `1 - eps/2`.
pub fn tightness_ratio(eps: f64) -> f64 {
    (1.25 - 0.75 * eps) / (1.0 - 0.25 * eps)
}
