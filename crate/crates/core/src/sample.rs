//! Seeded random inputs for trials, tests and benchmarks.
//!
//! Trials use ChaCha8 with the trial index as stream id, so every trial is
//! reproducible from `(seed, trial)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, AntisymmetricMap, PairLinear};
use crate::decomposition::{GroupFactor, GroupWord};
use crate::linalg::{self, CMat, CVec, C64};

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn mode_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CVec {
    CVec::from_fn(n, |_, _| complex(rng) * scale)
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMat {
    CMat::from_fn(n, n, |_, _| complex(rng) * scale)
}

pub fn skew_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMat {
    let m = matrix(rng, n, scale);
    (&m - m.adjoint()) * C64::from(0.5)
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMat {
    let m = matrix(rng, n, scale);
    (&m + m.adjoint()) * C64::from(0.5)
}

/// Random antisymmetric map with operator norm drawn uniformly in `(0, bound)`.
pub fn antisymmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: f64) -> AntisymmetricMap {
    let m = matrix(rng, n, 1.0);
    let a = (&m - m.transpose()) * C64::from(0.5);
    let norm = linalg::spectral_norm(&a);
    if norm == 0.0 {
        return AntisymmetricMap::zero(n);
    }
    let target = bound * rng.random_range(0.05..1.0);
    AntisymmetricMap::new_unchecked(a * C64::from(target / norm))
}

pub fn pair_linear<R: Rng + ?Sized>(rng: &mut R, n: usize, pair_bound: f64, linear_scale: f64) -> PairLinear {
    PairLinear {
        pair: antisymmetric(rng, n, pair_bound),
        linear: mode_vector(rng, n, linear_scale),
    }
}

/// General element of the complexified algebra.
pub fn algebra_element<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> AlgebraElement {
    AlgebraElement {
        current: matrix(rng, n, scale),
        pair_creation: antisymmetric(rng, n, scale),
        pair_annihilation: antisymmetric(rng, n, scale),
        linear_creation: mode_vector(rng, n, scale),
        linear_annihilation: mode_vector(rng, n, scale),
    }
}

/// Element of the real form (realizes to a skew-adjoint operator).
pub fn real_element<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> AlgebraElement {
    AlgebraElement::real_form(
        skew_hermitian(rng, n, scale),
        &antisymmetric(rng, n, scale),
        &mode_vector(rng, n, scale),
    )
}

/// Random word with each factor drawn uniformly from `H`, `P₊`, `P₋`.
pub fn group_word<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize, scale: f64) -> GroupWord {
    let factors = (0..len)
        .map(|_| match rng.random_range(0..3) {
            0 => GroupFactor::H(matrix(rng, n, scale)),
            1 => GroupFactor::PPlus(pair_linear(rng, n, scale, scale)),
            _ => GroupFactor::PMinus(pair_linear(rng, n, scale, scale)),
        })
        .collect();
    GroupWord::new(factors)
}
