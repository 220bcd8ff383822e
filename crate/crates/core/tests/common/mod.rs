#![allow(dead_code)]

use optstop::{Dist, FiniteDist, TwoPoint, TwoPointInstance, UniformDist};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Two-point variable; about one in ten is deterministic and one in five
/// has left endpoint 0.
pub fn two_point(rng: &mut StdRng) -> TwoPoint {
    let a = if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() };
    if rng.random_bool(0.1) {
        return TwoPoint { a, b: a, p: 1.0 };
    }
    let b = a + rng.random_range(0.01..2.0);
    TwoPoint { a, b, p: rng.random_range(0.01..0.99) }
}

pub fn two_point_instance(rng: &mut StdRng, n: usize) -> TwoPointInstance {
    TwoPointInstance::new((0..n).map(|_| two_point(rng)).collect()).unwrap()
}

/// Masses `(p, q)` for the middle atom and 1 with `p, q > 0`, `p + q < 1`.
fn mid_masses(rng: &mut StdRng) -> (f64, f64) {
    let zero = rng.random_range(0.05..0.9);
    let split = rng.random_range(0.05..0.95);
    let rest = 1.0 - zero;
    (rest * split, rest * (1.0 - split))
}

/// `{0, m, 1}` with `m` in (0, 1), all three masses positive.
pub fn zero_mid_one(rng: &mut StdRng) -> FiniteDist {
    let m = rng.random_range(0.02..0.98);
    let (p, q) = mid_masses(rng);
    FiniteDist::three_point(0.0, m, 1.0, p, q).unwrap()
}

/// `{a, m, 1}` with `0 <= a < m < 1`.
pub fn left_mid_one(rng: &mut StdRng) -> FiniteDist {
    let m = rng.random_range(0.05..0.98);
    let a = if rng.random_bool(0.15) { 0.0 } else { rng.random_range(0.0..m * 0.99) };
    let (p, q) = mid_masses(rng);
    FiniteDist::three_point(a, m, 1.0, p, q).unwrap()
}

/// Finite variable with 1 to 5 atoms on [0, 5).
pub fn finite(rng: &mut StdRng) -> FiniteDist {
    let k = rng.random_range(1..=5);
    let atoms: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..5.0)).collect();
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    FiniteDist::new(atoms, raw.iter().map(|w| w / total).collect()).unwrap()
}

pub fn uniform(rng: &mut StdRng) -> UniformDist {
    let lo = rng.random_range(0.0..3.0);
    UniformDist::new(lo, lo + rng.random_range(0.05..3.0)).unwrap()
}

/// Finite most of the time, uniform otherwise.
pub fn any_dist(rng: &mut StdRng) -> Dist {
    if rng.random_bool(0.75) {
        finite(rng).into()
    } else {
        uniform(rng).into()
    }
}

/// A chain of nested uniform supports, returned in shuffled order.
pub fn nested_chain(rng: &mut StdRng, n: usize) -> Vec<UniformDist> {
    let mut lo = rng.random_range(0.0..2.0);
    let mut hi = lo + rng.random_range(0.5..4.0);
    let mut chain = Vec::with_capacity(n);
    for _ in 0..n {
        chain.push(UniformDist::new(lo, hi).unwrap());
        let w = hi - lo;
        let shrink = rng.random_range(0.0..0.9) * w;
        let left = rng.random_range(0.0..=1.0) * shrink;
        lo += left;
        hi -= shrink - left;
    }
    chain.shuffle(rng);
    chain
}

pub fn permutation(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}
