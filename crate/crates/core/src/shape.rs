//! Recognizers for the support shapes the structured solvers accept.

use crate::dist::FiniteDist;
use crate::error::{Error, Result};

/// Parameters of a variable supported on `{0, m, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroMidOne {
    /// The interior atom, if the variable has one.
    pub mid: Option<f64>,
    /// P(X = m).
    pub p: f64,
    /// P(X = 1).
    pub q: f64,
}

impl ZeroMidOne {
    pub fn parse(d: &FiniteDist) -> Result<Self> {
        let mut shape = ZeroMidOne { mid: None, p: 0.0, q: 0.0 };
        for (x, w) in d.iter() {
            if x == 0.0 {
                continue;
            } else if x == 1.0 {
                shape.q = w;
            } else if x < 1.0 && shape.mid.is_none() {
                shape.mid = Some(x);
                shape.p = w;
            } else {
                return Err(Error::InstanceShape(format!(
                    "support {:?} is not contained in {{0, m, 1}}",
                    d.atoms()
                )));
            }
        }
        Ok(shape)
    }

    /// The level above which a positive realization is accepted only at 1.
    /// A variable without an interior atom takes only the value 1 when
    /// positive, so it reports 1.
    pub fn mid_or_one(&self) -> f64 {
        self.mid.unwrap_or(1.0)
    }
}

/// Parameters of a variable supported on `{a, m, 1}` with `a < m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeftMidOne {
    pub left: f64,
    pub mid: Option<f64>,
    pub p: f64,
    pub q: f64,
}

impl LeftMidOne {
    /// The smallest atom below 1 is taken as the left endpoint; a second
    /// atom below 1, if any, is the middle point.
    pub fn parse(d: &FiniteDist) -> Result<Self> {
        if d.max_atom() > 1.0 {
            return Err(Error::InstanceShape(format!(
                "support {:?} exceeds the common right endpoint 1",
                d.atoms()
            )));
        }
        let below: Vec<(f64, f64)> = d.iter().filter(|&(x, _)| x < 1.0).collect();
        let q = d.mass_at(1.0);
        match below.as_slice() {
            [] => Ok(LeftMidOne { left: 0.0, mid: None, p: 0.0, q }),
            [(a, _)] => Ok(LeftMidOne { left: *a, mid: None, p: 0.0, q }),
            [(a, _), (m, p)] => Ok(LeftMidOne { left: *a, mid: Some(*m), p: *p, q }),
            _ => Err(Error::InstanceShape(format!(
                "support {:?} has more than three points",
                d.atoms()
            ))),
        }
    }

    /// The same variable with its left endpoint moved to 0.
    pub fn with_zero_left(&self) -> FiniteDist {
        let mid = self.mid.unwrap_or(0.0);
        FiniteDist::three_point(0.0, mid, 1.0, self.p, self.q)
            .expect("masses come from a valid distribution")
    }
}

/// E[X | X > 0], or 0 for a variable that is identically zero. Used as the
/// sort key for the accept-any-positive block.
pub fn positive_mean_key(d: &FiniteDist) -> f64 {
    d.conditional_mean_positive().unwrap_or(0.0)
}

/// Sorts `indices` by decreasing key; equal keys keep their input order.
pub fn sort_by_key_desc(indices: &mut [usize], keys: &[f64]) {
    indices.sort_by(|&i, &j| keys[j].total_cmp(&keys[i]));
}
