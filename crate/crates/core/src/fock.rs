//! Dense Fock space over `ℂⁿ`.
//!
//! Basis states are indexed by occupation bitmasks `m`; index `m` stands for
//! `a†_{i₁} ⋯ a†_{i_k} ψ₀` with `i₁ < ⋯ < i_k` the set bits of `m`. The
//! Jordan–Wigner phase of `a_i` counts occupied modes *below* `i`. Every sign
//! in the crate follows from this one convention.
//!
//! These dense operators are the reference oracle for all closed forms.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{FermiError, Result};
use crate::linalg::{self, CMat, CVec, C64, ONE, ZERO};

/// Largest supported number of modes (`2¹² = 4096` basis states).
pub const MAX_MODES: usize = 12;

/// Mode space `ℂⁿ` with its standard orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSpace {
    n: usize,
}

impl ModeSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_MODES {
            return Err(FermiError::ModeCountOutOfRange { n, max: MAX_MODES });
        }
        Ok(Self { n })
    }

    /// Number of modes.
    pub fn modes(&self) -> usize {
        self.n
    }

    /// Fock space dimension `2ⁿ`.
    pub fn fock_dim(&self) -> usize {
        1 << self.n
    }

    pub fn basis_vector(&self, i: usize) -> ModeVector {
        let mut v = CVec::zeros(self.n);
        v[i] = ONE;
        v
    }

    pub(crate) fn check_vector(&self, v: &CVec) -> Result<()> {
        check_len(self.n, v.len())
    }

    pub(crate) fn check_square(&self, m: &CMat) -> Result<()> {
        check_len(self.n, m.nrows())?;
        check_len(self.n, m.ncols())
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(FermiError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A vector `ξ ∈ L = ℂⁿ`.
pub type ModeVector = CVec;

/// Remove mode `i` from basis state `mask`; `None` if unoccupied.
pub fn annihilate(mask: usize, i: usize) -> Option<(f64, usize)> {
    if mask & (1 << i) == 0 {
        return None;
    }
    Some((jw_sign(mask, i), mask ^ (1 << i)))
}

/// Add mode `i` to basis state `mask`; `None` if already occupied.
pub fn create(mask: usize, i: usize) -> Option<(f64, usize)> {
    if mask & (1 << i) != 0 {
        return None;
    }
    Some((jw_sign(mask, i), mask | (1 << i)))
}

fn jw_sign(mask: usize, i: usize) -> f64 {
    if (mask & ((1 << i) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// State vector in the occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub amps: CVec,
}

impl FockState {
    pub fn vacuum(ms: &ModeSpace) -> Self {
        Self::basis(ms, 0)
    }

    pub fn basis(ms: &ModeSpace, mask: usize) -> Self {
        let mut amps = CVec::zeros(ms.fock_dim());
        amps[mask] = ONE;
        Self { amps }
    }

    pub fn zeros(ms: &ModeSpace) -> Self {
        Self {
            amps: CVec::zeros(ms.fock_dim()),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn scaled(&self, z: C64) -> FockState {
        FockState { amps: &self.amps * z }
    }

    pub fn normalized(&self) -> FockState {
        self.scaled(C64::from(1.0 / self.norm()))
    }

    pub fn distance(&self, other: &FockState) -> f64 {
        (&self.amps - &other.amps).norm()
    }
}

impl Add for FockState {
    type Output = FockState;
    fn add(self, rhs: FockState) -> FockState {
        FockState {
            amps: self.amps + rhs.amps,
        }
    }
}

impl Sub for FockState {
    type Output = FockState;
    fn sub(self, rhs: FockState) -> FockState {
        FockState {
            amps: self.amps - rhs.amps,
        }
    }
}

/// Dense operator on Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub mat: CMat,
}

impl FockOperator {
    pub fn zero(ms: &ModeSpace) -> Self {
        let d = ms.fock_dim();
        Self { mat: CMat::zeros(d, d) }
    }

    pub fn identity(ms: &ModeSpace) -> Self {
        Self {
            mat: linalg::identity(ms.fock_dim()),
        }
    }

    pub fn from_matrix(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn scaled(&self, z: C64) -> Self {
        Self { mat: &self.mat * z }
    }

    pub fn apply(&self, psi: &FockState) -> FockState {
        FockState {
            amps: &self.mat * &psi.amps,
        }
    }

    /// Dense matrix exponential.
    pub fn exp(&self) -> Self {
        Self {
            mat: linalg::expm(&self.mat),
        }
    }

    /// Exponential by terminating series; only valid for nilpotent operators.
    pub fn exp_nilpotent(&self) -> Self {
        Self {
            mat: linalg::expm_nilpotent(&self.mat),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.mat)
    }

    pub fn distance(&self, other: &FockOperator) -> f64 {
        linalg::max_abs(&(&self.mat - &other.mat))
    }
}

impl Add for FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: FockOperator) -> FockOperator {
        FockOperator {
            mat: self.mat + rhs.mat,
        }
    }
}

impl AddAssign<&FockOperator> for FockOperator {
    fn add_assign(&mut self, rhs: &FockOperator) {
        self.mat += &rhs.mat;
    }
}

impl Sub for FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: FockOperator) -> FockOperator {
        FockOperator {
            mat: self.mat - rhs.mat,
        }
    }
}

impl Neg for FockOperator {
    type Output = FockOperator;
    fn neg(self) -> FockOperator {
        FockOperator { mat: -self.mat }
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl Mul for FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: FockOperator) -> FockOperator {
        &self * &rhs
    }
}

/// `a_ξ = Σᵢ ξᵢ aᵢ`, complex-linear in `ξ`.
pub fn annihilator(ms: &ModeSpace, xi: &ModeVector) -> Result<FockOperator> {
    ms.check_vector(xi)?;
    let d = ms.fock_dim();
    let mut mat = CMat::zeros(d, d);
    for mask in 0..d {
        for (i, &coef) in xi.iter().enumerate() {
            if coef == ZERO {
                continue;
            }
            if let Some((sign, out)) = annihilate(mask, i) {
                mat[(out, mask)] += coef * sign;
            }
        }
    }
    Ok(FockOperator { mat })
}

/// `a†_ξ`, conjugate-linear in `ξ`.
pub fn creator(ms: &ModeSpace, xi: &ModeVector) -> Result<FockOperator> {
    Ok(annihilator(ms, xi)?.adjoint())
}

/// Grading element `k`: `+1` on even occupation, `-1` on odd.
pub fn grading_k(ms: &ModeSpace) -> FockOperator {
    let d = ms.fock_dim();
    let diag = CVec::from_iterator(d, (0..d).map(|m| if m.count_ones() % 2 == 0 { ONE } else { -ONE }));
    FockOperator {
        mat: CMat::from_diagonal(&diag),
    }
}

pub fn commutator(x: &FockOperator, y: &FockOperator) -> Result<FockOperator> {
    check_len(x.dim(), y.dim())?;
    Ok(FockOperator {
        mat: &x.mat * &y.mat - &y.mat * &x.mat,
    })
}

pub fn anticommutator(x: &FockOperator, y: &FockOperator) -> Result<FockOperator> {
    check_len(x.dim(), y.dim())?;
    Ok(FockOperator {
        mat: &x.mat * &y.mat + &y.mat * &x.mat,
    })
}

/// Operator norm (largest singular value).
pub fn op_norm(x: &FockOperator) -> f64 {
    linalg::spectral_norm(&x.mat)
}
