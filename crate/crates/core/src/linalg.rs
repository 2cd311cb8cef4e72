//! Dense complex matrix helpers: matrix functions, norms, ranks.
//!
//! Everything here works on `nalgebra` dynamic matrices of `Complex<f64>`.
//! The matrix exponential is nalgebra's Padé implementation; the principal
//! logarithm is computed here by inverse scaling and squaring on the complex
//! Schur form.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FermiError, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

/// `u vᵀ` (no conjugation).
pub fn outer(u: &CVec, v: &CVec) -> CMat {
    u * v.transpose()
}

/// `u vᴴ`, i.e. the rank-one map `η ↦ u {v, η}`.
pub fn ket_bra(u: &CVec, v: &CVec) -> CMat {
    u * v.adjoint()
}

/// Physicist's inner product `{u, v}`: conjugate-linear in `u`.
pub fn braket(u: &CVec, v: &CVec) -> C64 {
    u.dotc(v)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.norm()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn singular_values(m: &CMat) -> DVector<f64> {
    m.clone().svd(false, false).singular_values
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).max()
}

pub fn smallest_singular_value(m: &CMat) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    singular_values(m).min()
}

/// Numerical rank with a relative cutoff on the singular values.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Rank over the reals of a family of complex vectors (each split into
/// real and imaginary parts).
pub fn real_rank(vectors: &[CVec], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let len = vectors[0].len();
    let mut m = DMatrix::<f64>::zeros(2 * len, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (i, z) in v.iter().enumerate() {
            m[(i, j)] = z.re;
            m[(len + i, j)] = z.im;
        }
    }
    let sv = m.svd(false, false).singular_values;
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

pub fn trace(m: &CMat) -> C64 {
    m.trace()
}

pub fn determinant(m: &CMat) -> C64 {
    m.clone().determinant()
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone()
        .try_inverse()
        .ok_or(FermiError::Singular { what: "matrix inverse" })
}

/// Solve `m x = rhs`.
pub fn solve(m: &CMat, rhs: &CVec) -> Result<CVec> {
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or(FermiError::Singular { what: "linear solve" })
}

/// Matrix exponential.
pub fn expm(m: &CMat) -> CMat {
    if m.is_empty() {
        return m.clone();
    }
    m.clone().exp()
}

/// Exponential of a nilpotent matrix by its terminating series.
pub fn expm_nilpotent(m: &CMat) -> CMat {
    let n = m.nrows();
    let mut out = identity(n);
    let mut term = identity(n);
    for k in 1..=n {
        term = &term * m / C64::from(k as f64);
        if max_abs(&term) == 0.0 {
            break;
        }
        out += &term;
    }
    out
}

/// Apply `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let eig = sym.symmetric_eigen();
    let vals = eig.eigenvalues.map(|x| C64::from(f(x)));
    &eig.eigenvectors * CMat::from_diagonal(&vals) * eig.eigenvectors.adjoint()
}

/// Logarithm of a Hermitian positive-definite matrix (the unique Hermitian one).
pub fn hermitian_log(m: &CMat) -> Result<CMat> {
    let herm_defect = max_abs(&(m - m.adjoint()));
    let scale = max_abs(m).max(1.0);
    if herm_defect > 1e-10 * scale {
        return Err(FermiError::LogarithmUndefined {
            reason: format!("matrix is not Hermitian (defect {herm_defect:.3e})"),
        });
    }
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let min = sym.clone().symmetric_eigen().eigenvalues.min();
    if min <= 0.0 {
        return Err(FermiError::LogarithmUndefined {
            reason: format!("matrix is not positive definite (min eigenvalue {min:.3e})"),
        });
    }
    Ok(hermitian_function(&sym, f64::ln))
}

// nalgebra's complex QR iteration can cycle on some inputs (near-identity
// matrices among them), so it is capped and retried on shifted copies,
// which share the Schur vectors.
fn schur(m: &CMat) -> (CMat, CMat) {
    let n = m.nrows();
    let scale = max_abs(m).max(1.0);
    let shifts = [
        C64::new(0.0, 0.0),
        C64::new(0.37, 0.11),
        C64::new(-0.23, 0.61),
        C64::new(0.81, -0.45),
        C64::new(1.7, 1.3),
    ];
    for shift in shifts {
        let shifted = m + identity(n) * (shift * scale);
        if let Some(decomposition) = shifted.try_schur(f64::EPSILON, 10_000) {
            let (q, t) = decomposition.unpack();
            let t = t - identity(n) * (shift * scale);
            return (q, t);
        }
    }
    panic!("Schur iteration failed to converge for every shift");
}

/// Eigenvalues read off the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.is_empty() {
        return Vec::new();
    }
    let (_, t) = schur(m);
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

// Principal square root of an upper triangular matrix (Björck–Hammarling).
fn sqrt_upper_triangular(t: &CMat) -> CMat {
    let n = t.nrows();
    let mut r = CMat::zeros(n, n);
    for i in 0..n {
        r[(i, i)] = t[(i, i)].sqrt();
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

/// Principal matrix logarithm.
///
/// Fails when the spectrum touches the closed negative real axis, where the
/// principal branch is not defined.
pub fn logm(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let (q, mut t) = schur(m);
    let scale = max_abs(m).max(1.0);
    for i in 0..n {
        let z = t[(i, i)];
        if z.norm() <= 1e-14 * scale || (z.im.abs() <= 1e-14 * scale && z.re < 0.0) {
            return Err(FermiError::LogarithmUndefined {
                reason: format!("eigenvalue {z} on the closed negative real axis"),
            });
        }
    }
    // Take square roots until the triangular factor is close to the identity.
    let id = identity(n);
    let mut halvings = 0u32;
    while max_abs(&(&t - &id)) > 0.25 {
        t = sqrt_upper_triangular(&t);
        halvings += 1;
        if halvings > 60 {
            return Err(FermiError::LogarithmUndefined {
                reason: "square-root iteration did not approach the identity".into(),
            });
        }
    }
    // log(1 + x) series; ‖x‖ ≤ 0.25 entrywise, so 60 terms is far past rounding.
    let x = &t - &id;
    let mut log = CMat::zeros(n, n);
    let mut power = x.clone();
    for k in 1..=60 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        log += &power * C64::from(sign / k as f64);
        power = &power * &x;
        if max_abs(&power) < 1e-18 {
            break;
        }
    }
    let log = log * C64::from(2f64.powi(halvings as i32));
    Ok(&q * log * q.adjoint())
}

/// Logarithm whose trace is pinned to `target_trace`.
///
/// Any two logarithms of `m` differ by `2πi` multiples of spectral
/// projectors. Starting from the principal logarithm, the branch of one
/// simple eigenvalue is shifted until the trace matches.
pub fn logm_with_trace(m: &CMat, target_trace: C64) -> Result<CMat> {
    let mut log = logm(m)?;
    let miss = (target_trace - log.trace()) / (2.0 * std::f64::consts::PI * I);
    let winding = miss.re.round();
    if (miss - C64::from(winding)).norm() > 1e-6 {
        return Err(FermiError::LogarithmUndefined {
            reason: format!("target trace {target_trace} is not a logarithm of the determinant"),
        });
    }
    if winding == 0.0 {
        return Ok(log);
    }
    let projector = simple_spectral_projector(m)?;
    log += projector * (2.0 * std::f64::consts::PI * I * winding);
    Ok(log)
}

// Rank-one spectral projector onto the best-separated simple eigenvalue.
fn simple_spectral_projector(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    let eigs = eigenvalues(m);
    let scale = max_abs(m).max(1.0);
    let (best, gap) = eigs
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let gap = eigs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, w)| (z - w).norm())
                .fold(f64::INFINITY, f64::min);
            (i, gap)
        })
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if gap < 1e-6 * scale {
        return Err(FermiError::LogarithmUndefined {
            reason: "branch shift needs a simple eigenvalue".into(),
        });
    }
    let shifted = m - identity(n) * eigs[best];
    let svd = shifted.clone().svd(true, true);
    let k = svd.singular_values.imin();
    let u = svd.u.expect("requested u");
    let v_t = svd.v_t.expect("requested v_t");
    // Right null vector: row of Vᴴ; left null vector: column of U.
    let right: CVec = v_t.row(k).adjoint();
    let left: CVec = u.column(k).into_owned();
    let norm = left.dotc(&right);
    Ok(ket_bra(&right, &left) / norm)
}

/// Dimension of the kernel of a complex-linear map given as a matrix.
pub fn nullity(m: &CMat, rel_tol: f64) -> usize {
    m.ncols() - numerical_rank(m, rel_tol)
}

/// Column-major flattening of a matrix.
pub fn flatten(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.iter().copied())
}
