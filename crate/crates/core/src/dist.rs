//! Distribution representations.
//!
//! Every reward variable is non-negative. Finite-support distributions are
//! normalized at construction: atoms sorted strictly increasing, coincident
//! atoms merged, negligible masses dropped and the rest renormalized. Nothing
//! downstream has to deal with zero-gap or zero-mass support points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of the total mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Atoms carrying less mass than this are removed.
pub const NEGLIGIBLE_MASS: f64 = 1e-15;

/// A probability distribution on finitely many non-negative values.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDist {
    atoms: Vec<f64>,
    masses: Vec<f64>,
}

impl FiniteDist {
    pub fn new(atoms: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if atoms.len() != masses.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} atoms but {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        for (&x, &w) in atoms.iter().zip(&masses) {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "atom {x} is not a finite non-negative value"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "mass {w} is not a finite non-negative value"
                )));
            }
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, expected 1"
            )));
        }

        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(masses).collect();
        pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        let before = merged.len();
        merged.retain(|&(_, w)| w >= NEGLIGIBLE_MASS);
        if merged.is_empty() {
            return Err(Error::InvalidDistribution("no atom carries mass".into()));
        }

        let (atoms, mut masses): (Vec<f64>, Vec<f64>) = merged.into_iter().unzip();
        if masses.len() < before {
            let kept: f64 = masses.iter().sum();
            masses.iter_mut().for_each(|w| *w /= kept);
        }
        let dist = Self { atoms, masses };
        debug_assert!(dist.is_normalized());
        Ok(dist)
    }

    /// The degenerate distribution concentrated on `value`.
    pub fn point(value: f64) -> Result<Self> {
        Self::new(vec![value], vec![1.0])
    }

    /// `a` with probability `1 - p`, `b` with probability `p`.
    pub fn two_point(a: f64, b: f64, p: f64) -> Result<Self> {
        if !(a >= 0.0) || !(a <= b) {
            return Err(Error::InvalidDistribution(format!(
                "two-point endpoints need 0 <= a <= b, got a={a}, b={b}"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        Self::new(vec![a, b], vec![1.0 - p, p])
    }

    /// `a`, `m`, `b` with probabilities `1 - p - q`, `p`, `q`.
    pub fn three_point(a: f64, m: f64, b: f64, p: f64, q: f64) -> Result<Self> {
        if !(a >= 0.0) || !(a <= m) || !(m <= b) {
            return Err(Error::InvalidDistribution(format!(
                "three-point support needs 0 <= a <= m <= b, got ({a}, {m}, {b})"
            )));
        }
        if !(p >= 0.0) || !(q >= 0.0) || p + q > 1.0 + MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities p={p}, q={q} need p, q >= 0 and p + q <= 1"
            )));
        }
        let left = (1.0 - p - q).max(0.0);
        Self::new(vec![a, m, b], vec![left, p, q])
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().copied().zip(self.masses.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn min_atom(&self) -> f64 {
        self.atoms[0]
    }

    pub fn max_atom(&self) -> f64 {
        self.atoms[self.atoms.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, w)| x * w).sum()
    }

    /// P(X = value), exact atom match.
    pub fn mass_at(&self, value: f64) -> f64 {
        self.iter()
            .find(|&(x, _)| x == value)
            .map_or(0.0, |(_, w)| w)
    }

    /// P(X <= value).
    pub fn cdf(&self, value: f64) -> f64 {
        self.iter()
            .take_while(|&(x, _)| x <= value)
            .map(|(_, w)| w)
            .sum::<f64>()
            .min(1.0)
    }

    pub fn prob_positive(&self) -> f64 {
        self.iter().filter(|&(x, _)| x > 0.0).map(|(_, w)| w).sum()
    }

    /// E[X | X > 0].
    pub fn conditional_mean_positive(&self) -> Result<f64> {
        let mass = self.prob_positive();
        if mass <= 0.0 {
            return Err(Error::UndefinedConditional);
        }
        let weighted: f64 = self.iter().filter(|&(x, _)| x > 0.0).map(|(x, w)| x * w).sum();
        Ok(weighted / mass)
    }

    /// The distribution of `X + k`; `k` may be negative as long as the
    /// smallest atom stays non-negative.
    pub fn shift(&self, k: f64) -> Result<Self> {
        Self::new(self.atoms.iter().map(|x| x + k).collect(), self.masses.clone())
    }

    /// The distribution of `alpha * X` for `alpha > 0`.
    pub fn scale(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale factor {alpha} must be positive"
            )));
        }
        Self::new(self.atoms.iter().map(|x| x * alpha).collect(), self.masses.clone())
    }

    fn is_normalized(&self) -> bool {
        let total: f64 = self.masses.iter().sum();
        (total - 1.0).abs() <= MASS_TOLERANCE && self.atoms.windows(2).all(|w| w[0] < w[1])
    }
}

/// The continuous uniform distribution on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformDist {
    lo: f64,
    hi: f64,
}

impl UniformDist {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi <= lo {
            return Err(Error::InvalidDistribution(format!(
                "uniform support needs 0 <= lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Whether `other`'s support lies inside this one.
    pub fn contains(&self, other: &UniformDist) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn shift(&self, k: f64) -> Result<Self> {
        Self::new(self.lo + k, self.hi + k)
    }

    pub fn scale(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale factor {alpha} must be positive"
            )));
        }
        Self::new(self.lo * alpha, self.hi * alpha)
    }
}

/// Either supported distribution family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistSpec", into = "DistSpec")]
pub enum Dist {
    Finite(FiniteDist),
    Uniform(UniformDist),
}

impl Dist {
    pub fn mean(&self) -> f64 {
        match self {
            Dist::Finite(d) => d.mean(),
            Dist::Uniform(u) => u.mean(),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteDist> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Uniform(_) => None,
        }
    }

    pub fn as_uniform(&self) -> Option<&UniformDist> {
        match self {
            Dist::Uniform(u) => Some(u),
            Dist::Finite(_) => None,
        }
    }

    pub fn shift(&self, k: f64) -> Result<Self> {
        Ok(match self {
            Dist::Finite(d) => Dist::Finite(d.shift(k)?),
            Dist::Uniform(u) => Dist::Uniform(u.shift(k)?),
        })
    }

    pub fn scale(&self, alpha: f64) -> Result<Self> {
        Ok(match self {
            Dist::Finite(d) => Dist::Finite(d.scale(alpha)?),
            Dist::Uniform(u) => Dist::Uniform(u.scale(alpha)?),
        })
    }
}

impl From<FiniteDist> for Dist {
    fn from(d: FiniteDist) -> Self {
        Dist::Finite(d)
    }
}

impl From<UniformDist> for Dist {
    fn from(u: UniformDist) -> Self {
        Dist::Uniform(u)
    }
}

/// Collects the finite-support members of a mixed list, rejecting uniforms.
pub fn finite_only(dists: &[Dist]) -> Result<Vec<FiniteDist>> {
    dists
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.as_finite().cloned().ok_or_else(|| {
                Error::Unsupported(format!("variable {i} is uniform; finite support required"))
            })
        })
        .collect()
}

/// JSON encoding of a distribution. The parametric forms are accepted on
/// input and always written back as `finite`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistSpec {
    Finite { atoms: Vec<f64>, masses: Vec<f64> },
    Uniform { lo: f64, hi: f64 },
    TwoPoint { a: f64, b: f64, p: f64 },
    ThreePoint { a: f64, m: f64, b: f64, p: f64, q: f64 },
}

impl TryFrom<DistSpec> for Dist {
    type Error = Error;

    fn try_from(spec: DistSpec) -> Result<Self> {
        Ok(match spec {
            DistSpec::Finite { atoms, masses } => FiniteDist::new(atoms, masses)?.into(),
            DistSpec::Uniform { lo, hi } => UniformDist::new(lo, hi)?.into(),
            DistSpec::TwoPoint { a, b, p } => FiniteDist::two_point(a, b, p)?.into(),
            DistSpec::ThreePoint { a, m, b, p, q } => FiniteDist::three_point(a, m, b, p, q)?.into(),
        })
    }
}

impl From<Dist> for DistSpec {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Finite(f) => DistSpec::Finite {
                atoms: f.atoms,
                masses: f.masses,
            },
            Dist::Uniform(u) => DistSpec::Uniform { lo: u.lo, hi: u.hi },
        }
    }
}
