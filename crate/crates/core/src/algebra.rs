//! Parameter-level dynamical Lie algebra and its Fock realization.
//!
//! A general element is
//!
//! ```text
//! λ̂ + Λ̂₋† + Λ̂₊ + ξ̂₋† + ξ̂₊
//! ```
//!
//! with `λ̂ = Σᵢ a†_{ζᵢ} a_{λζᵢ} − ½tr(λ)`, `Λ̂ = ½Σᵢ a_{ζᵢ} a_{Λζᵢ}` and
//! `ξ̂ = a_ξ/√2`. Conjugate-linear maps `Λ` are stored as the antisymmetric
//! matrix `A` with `Λ(η) = A·conj(η)`. Products like `Λ'Λ` then become
//! `A'·conj(A)`.
//!
//! The creation-type components (`Λ₋`, `ξ₋`) enter the operator
//! conjugate-linearly, so scalar multiplication conjugates the scalar on them.

use crate::error::{FermiError, Result};
use crate::fock::{self, annihilate, create, FockOperator, ModeSpace, ModeVector};
use crate::linalg::{self, conj, conj_vec, ket_bra, outer, CMat, CVec, C64, ZERO};

/// Tolerance for accepting a matrix as antisymmetric.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// A complex-linear map `λ` on mode space.
pub type TraceClassMap = CMat;

/// Conjugate-linear antisymmetric map `Λ(η) = A·conj(η)` with `Aᵀ = −A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMap {
    a: CMat,
}

impl AntisymmetricMap {
    pub fn new(a: CMat) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(FermiError::DimensionMismatch {
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        let residual = linalg::max_abs(&(&a + a.transpose()));
        if residual > ANTISYMMETRY_TOL * linalg::max_abs(&a).max(1.0) {
            return Err(FermiError::NotAntisymmetric { residual });
        }
        Ok(Self { a })
    }

    /// Antisymmetric part `(m − mᵀ)/2`.
    pub fn antisymmetrize(m: &CMat) -> Self {
        Self {
            a: (m - m.transpose()) * C64::from(0.5),
        }
    }

    pub(crate) fn new_unchecked(a: CMat) -> Self {
        Self { a }
    }

    pub fn zero(n: usize) -> Self {
        Self { a: CMat::zeros(n, n) }
    }

    /// Elementary pairing `e_j ↦ e_i`, `e_i ↦ −e_j` (matrix `E_ij − E_ji`).
    pub fn pairing(n: usize, i: usize, j: usize) -> Self {
        let mut a = CMat::zeros(n, n);
        a[(i, j)] = C64::from(1.0);
        a[(j, i)] = C64::from(-1.0);
        Self { a }
    }

    pub fn matrix(&self) -> &CMat {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.a * conj_vec(v)
    }

    /// The map `(zΛ)(η) = z·Λ(η)`.
    pub fn scaled(&self, z: C64) -> Self {
        Self { a: &self.a * z }
    }

    /// `Λ ∘ Λ'`, complex-linear: `A·conj(A')`.
    pub fn compose(&self, other: &AntisymmetricMap) -> CMat {
        &self.a * conj(&other.a)
    }

    /// `Λ²`, self-adjoint and negative semidefinite.
    pub fn square(&self) -> CMat {
        self.compose(self)
    }

    /// `M ∘ Λ ∘ Mᵀ`-type congruence `left·A·rightᵀ`, which stays antisymmetric
    /// when `left == right`.
    pub fn congruence(&self, m: &CMat) -> Self {
        Self {
            a: m * &self.a * m.transpose(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|z| *z == ZERO)
    }
}

impl std::ops::Add for &AntisymmetricMap {
    type Output = AntisymmetricMap;
    fn add(self, rhs: &AntisymmetricMap) -> AntisymmetricMap {
        AntisymmetricMap { a: &self.a + &rhs.a }
    }
}

impl std::ops::Sub for &AntisymmetricMap {
    type Output = AntisymmetricMap;
    fn sub(self, rhs: &AntisymmetricMap) -> AntisymmetricMap {
        AntisymmetricMap { a: &self.a - &rhs.a }
    }
}

/// Pair and linear parameters `(Λ, ξ)` of an element of `𝔭₊` or `𝔭₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairLinear {
    pub pair: AntisymmetricMap,
    pub linear: ModeVector,
}

impl PairLinear {
    pub fn zero(n: usize) -> Self {
        Self {
            pair: AntisymmetricMap::zero(n),
            linear: CVec::zeros(n),
        }
    }

    pub fn new(pair: AntisymmetricMap, linear: ModeVector) -> Result<Self> {
        fock::check_len(pair.dim(), linear.len())?;
        Ok(Self { pair, linear })
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pair.is_zero() && self.linear.iter().all(|z| *z == ZERO)
    }

    /// `Λ̂ + ξ̂`.
    pub fn annihilation_operator(&self, ms: &ModeSpace) -> Result<FockOperator> {
        Ok(pair_annihilator(ms, &self.pair)? + linear_hat(ms, &self.linear)?)
    }

    /// `Λ̂† + ξ̂†`.
    pub fn creation_operator(&self, ms: &ModeSpace) -> Result<FockOperator> {
        Ok(self.annihilation_operator(ms)?.adjoint())
    }
}

/// General element of `𝔤^ℂ` by parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    /// `λ`, coefficient map of the current operator `λ̂`.
    pub current: TraceClassMap,
    /// `Λ₋`, realized as `Λ̂₋†`.
    pub pair_creation: AntisymmetricMap,
    /// `Λ₊`, realized as `Λ̂₊`.
    pub pair_annihilation: AntisymmetricMap,
    /// `ξ₋`, realized as `ξ̂₋†`.
    pub linear_creation: ModeVector,
    /// `ξ₊`, realized as `ξ̂₊`.
    pub linear_annihilation: ModeVector,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        Self {
            current: CMat::zeros(n, n),
            pair_creation: AntisymmetricMap::zero(n),
            pair_annihilation: AntisymmetricMap::zero(n),
            linear_creation: CVec::zeros(n),
            linear_annihilation: CVec::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.current.nrows()
    }

    pub fn from_current(current: TraceClassMap) -> Self {
        let n = current.nrows();
        Self {
            current,
            ..Self::zero(n)
        }
    }

    pub fn from_pair_creation(pair: AntisymmetricMap) -> Self {
        let n = pair.dim();
        Self {
            pair_creation: pair,
            ..Self::zero(n)
        }
    }

    pub fn from_pair_annihilation(pair: AntisymmetricMap) -> Self {
        let n = pair.dim();
        Self {
            pair_annihilation: pair,
            ..Self::zero(n)
        }
    }

    pub fn from_linear_creation(v: ModeVector) -> Self {
        let n = v.len();
        Self {
            linear_creation: v,
            ..Self::zero(n)
        }
    }

    pub fn from_linear_annihilation(v: ModeVector) -> Self {
        let n = v.len();
        Self {
            linear_annihilation: v,
            ..Self::zero(n)
        }
    }

    /// `λ̂ + (Λ̂ − Λ̂†) + (ξ̂ − ξ̂†)` with `λ* = −λ`; realizes skew-adjoint.
    pub fn real_form(current: TraceClassMap, pair: &AntisymmetricMap, linear: &ModeVector) -> Self {
        Self {
            current,
            pair_creation: pair.scaled(C64::from(-1.0)),
            pair_annihilation: pair.clone(),
            linear_creation: -linear,
            linear_annihilation: linear.clone(),
        }
    }

    /// Distance from the real form: `λ* = −λ`, `Λ₋ = −Λ₊`, `ξ₋ = −ξ₊`.
    pub fn real_form_defect(&self) -> f64 {
        let a = linalg::max_abs(&(&self.current + self.current.adjoint()));
        let b = linalg::max_abs(&(self.pair_creation.matrix() + self.pair_annihilation.matrix()));
        let c = linalg::max_abs_vec(&(&self.linear_creation + &self.linear_annihilation));
        a.max(b).max(c)
    }

    pub fn is_real_form(&self, tol: f64) -> bool {
        self.real_form_defect() <= tol
    }

    /// Odd components (`ξ₋`, `ξ₊`) vanish.
    pub fn is_even(&self) -> bool {
        self.linear_creation.iter().all(|z| *z == ZERO) && self.linear_annihilation.iter().all(|z| *z == ZERO)
    }

    /// Only `𝔭 = 𝔪 ⊕ 𝔫` components (no current part).
    pub fn is_in_p(&self) -> bool {
        self.current.iter().all(|z| *z == ZERO)
    }

    /// Scalar multiple as an operator: `z·realize(x)`.
    pub fn scaled(&self, z: C64) -> Self {
        Self {
            current: &self.current * z,
            pair_creation: self.pair_creation.scaled(z.conj()),
            pair_annihilation: self.pair_annihilation.scaled(z),
            linear_creation: &self.linear_creation * z.conj(),
            linear_annihilation: &self.linear_annihilation * z,
        }
    }

    /// Parameters of `realize(x)†`.
    pub fn dagger(&self) -> Self {
        Self {
            current: self.current.adjoint(),
            pair_creation: self.pair_annihilation.clone(),
            pair_annihilation: self.pair_creation.clone(),
            linear_creation: self.linear_annihilation.clone(),
            linear_annihilation: self.linear_creation.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.current)
            .max(linalg::max_abs(self.pair_creation.matrix()))
            .max(linalg::max_abs(self.pair_annihilation.matrix()))
            .max(linalg::max_abs_vec(&self.linear_creation))
            .max(linalg::max_abs_vec(&self.linear_annihilation))
    }

    pub fn distance(&self, other: &AlgebraElement) -> f64 {
        (self - other).max_abs()
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            current: &self.current + &rhs.current,
            pair_creation: &self.pair_creation + &rhs.pair_creation,
            pair_annihilation: &self.pair_annihilation + &rhs.pair_annihilation,
            linear_creation: &self.linear_creation + &rhs.linear_creation,
            linear_annihilation: &self.linear_annihilation + &rhs.linear_annihilation,
        }
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            current: &self.current - &rhs.current,
            pair_creation: &self.pair_creation - &rhs.pair_creation,
            pair_annihilation: &self.pair_annihilation - &rhs.pair_annihilation,
            linear_creation: &self.linear_creation - &rhs.linear_creation,
            linear_annihilation: &self.linear_annihilation - &rhs.linear_annihilation,
        }
    }
}

/// Real spanning family of the real form: skew-Hermitian currents, the
/// elementary pairings (real and imaginary) and the linear parts `e_j`, `ie_j`.
/// It has exactly `n(2n+1)` members.
pub fn real_form_spanning_family(n: usize) -> Vec<AlgebraElement> {
    let i = C64::new(0.0, 1.0);
    let mut family = Vec::with_capacity(n * (2 * n + 1));
    let zero_pair = AntisymmetricMap::zero(n);
    let zero_vec = CVec::zeros(n);
    for p in 0..n {
        for q in 0..n {
            let mut m = CMat::zeros(n, n);
            if p == q {
                m[(p, p)] = i;
            } else if p < q {
                m[(p, q)] = C64::from(1.0);
                m[(q, p)] = C64::from(-1.0);
            } else {
                m[(p, q)] = i;
                m[(q, p)] = i;
            }
            family.push(AlgebraElement::real_form(m, &zero_pair, &zero_vec));
        }
    }
    for p in 0..n {
        for q in p + 1..n {
            let pair = AntisymmetricMap::pairing(n, p, q);
            family.push(AlgebraElement::real_form(CMat::zeros(n, n), &pair, &zero_vec));
            family.push(AlgebraElement::real_form(CMat::zeros(n, n), &pair.scaled(i), &zero_vec));
        }
    }
    for p in 0..n {
        let mut e = CVec::zeros(n);
        e[p] = C64::from(1.0);
        family.push(AlgebraElement::real_form(CMat::zeros(n, n), &zero_pair, &e));
        family.push(AlgebraElement::real_form(CMat::zeros(n, n), &zero_pair, &(e * i)));
    }
    family
}

/// Current operator `λ̂ = Σᵢⱼ λⱼᵢ a†ᵢ aⱼ − ½tr(λ)`.
pub fn current_operator(ms: &ModeSpace, lambda: &TraceClassMap) -> Result<FockOperator> {
    ms.check_square(lambda)?;
    let n = ms.modes();
    let d = ms.fock_dim();
    let mut mat = CMat::zeros(d, d);
    let shift = lambda.trace() * 0.5;
    for mask in 0..d {
        mat[(mask, mask)] -= shift;
        for j in 0..n {
            let Some((s1, mid)) = annihilate(mask, j) else {
                continue;
            };
            for i in 0..n {
                let coef = lambda[(j, i)];
                if coef == ZERO {
                    continue;
                }
                if let Some((s2, out)) = create(mid, i) {
                    mat[(out, mask)] += coef * (s1 * s2);
                }
            }
        }
    }
    Ok(FockOperator { mat })
}

/// Pair annihilator `Λ̂ = ½Σᵢⱼ Aⱼᵢ aᵢ aⱼ`.
pub fn pair_annihilator(ms: &ModeSpace, pair: &AntisymmetricMap) -> Result<FockOperator> {
    let a = pair.matrix();
    ms.check_square(a)?;
    let n = ms.modes();
    let d = ms.fock_dim();
    let mut mat = CMat::zeros(d, d);
    for mask in 0..d {
        for j in 0..n {
            let Some((s1, mid)) = annihilate(mask, j) else {
                continue;
            };
            for i in 0..n {
                let coef = a[(j, i)];
                if coef == ZERO {
                    continue;
                }
                if let Some((s2, out)) = annihilate(mid, i) {
                    mat[(out, mask)] += coef * (0.5 * s1 * s2);
                }
            }
        }
    }
    Ok(FockOperator { mat })
}

/// Pair creator `Λ̂†`.
pub fn pair_creator(ms: &ModeSpace, pair: &AntisymmetricMap) -> Result<FockOperator> {
    Ok(pair_annihilator(ms, pair)?.adjoint())
}

/// `ξ̂ = a_ξ/√2`.
pub fn linear_hat(ms: &ModeSpace, xi: &ModeVector) -> Result<FockOperator> {
    Ok(fock::annihilator(ms, xi)?.scaled(C64::from(std::f64::consts::FRAC_1_SQRT_2)))
}

/// `ξ̂† = a†_ξ/√2`.
pub fn linear_hat_dagger(ms: &ModeSpace, xi: &ModeVector) -> Result<FockOperator> {
    Ok(linear_hat(ms, xi)?.adjoint())
}

/// Fock realization of a parameter-level element.
pub fn realize(ms: &ModeSpace, x: &AlgebraElement) -> Result<FockOperator> {
    let mut op = current_operator(ms, &x.current)?;
    op += &pair_creator(ms, &x.pair_creation)?;
    op += &pair_annihilator(ms, &x.pair_annihilation)?;
    op += &linear_hat_dagger(ms, &x.linear_creation)?;
    op += &linear_hat(ms, &x.linear_annihilation)?;
    Ok(op)
}

/// The odd part twisted by the grading element: `k·(ξ̂₋† + ξ̂₊)`.
pub fn k_twisted_realize(ms: &ModeSpace, x: &AlgebraElement) -> Result<FockOperator> {
    let odd = linear_hat_dagger(ms, &x.linear_creation)? + linear_hat(ms, &x.linear_annihilation)?;
    Ok(&fock::grading_k(ms) * &odd)
}

/// Residual of `[ξ̂, k] = −2kξ̂` and `[ξ̂†, k] = −2kξ̂†`.
pub fn grading_twist_residual(ms: &ModeSpace, xi: &ModeVector) -> Result<f64> {
    let k = fock::grading_k(ms);
    let x = linear_hat(ms, xi)?;
    let xd = x.adjoint();
    let r1 = fock::commutator(&x, &k)? + (&k * &x).scaled(C64::from(2.0));
    let r2 = fock::commutator(&xd, &k)? + (&k * &xd).scaled(C64::from(2.0));
    Ok(r1.max_abs().max(r2.max_abs()))
}

/// Lie bracket from the structure constants; `realize([x, y]) = [realize x, realize y]`.
///
/// Panics if the mode dimensions differ.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    assert_eq!(x.dim(), y.dim(), "bracket of elements over different mode spaces");
    let (l1, m1, p1, u1, v1) = (
        &x.current,
        x.pair_creation.matrix(),
        x.pair_annihilation.matrix(),
        &x.linear_creation,
        &x.linear_annihilation,
    );
    let (l2, m2, p2, u2, v2) = (
        &y.current,
        y.pair_creation.matrix(),
        y.pair_annihilation.matrix(),
        &y.linear_creation,
        &y.linear_annihilation,
    );

    // [λ̂,λ̂'] = (λ'λ − λλ')^, [Λ̂',Λ̂†] = (Λ'Λ)^, [ξ̂†,ξ̂'] = (ξ'{ξ,·})^
    let current = (l2 * l1 - l1 * l2) + p1 * conj(m2) - p2 * conj(m1) + ket_bra(v2, u1) - ket_bra(v1, u2);

    // [λ̂,Λ̂] = (−λΛ − Λλ*)^, [ξ̂,ξ̂'] = Λ̂ with Λη = ξ'{η,ξ} − ξ{η,ξ'}
    let pair_annihilation =
        -(l1 * p2 + p2 * l1.transpose()) + (l2 * p1 + p1 * l2.transpose()) + (outer(v2, v1) - outer(v1, v2));

    // [λ̂,Λ̂†] = ((λ*Λ + Λλ)^)†, [ξ̂†,ξ̂'†] = Λ̂† with Λη = ξ{η,ξ'} − ξ'{η,ξ}
    let pair_creation =
        (l1.adjoint() * m2 + m2 * conj(l1)) - (l2.adjoint() * m1 + m1 * conj(l2)) + (outer(u1, u2) - outer(u2, u1));

    // [λ̂,ξ̂] = (−λξ)^, [Λ̂,ξ̂†] = (−Λξ)^
    let linear_annihilation = -(l1 * v2) + l2 * v1 - p1 * conj_vec(u2) + p2 * conj_vec(u1);

    // [λ̂,ξ̂†] = ((λ*ξ)^)†, [Λ̂†,ξ̂] = ((Λξ)^)†
    let linear_creation = l1.adjoint() * u2 - l2.adjoint() * u1 + m1 * conj_vec(v2) - m2 * conj_vec(v1);

    AlgebraElement {
        current,
        pair_creation: AntisymmetricMap::new_unchecked(pair_creation),
        pair_annihilation: AntisymmetricMap::new_unchecked(pair_annihilation),
        linear_creation,
        linear_annihilation,
    }
}
