//! Reordering identities, the `P₋·H^ℂ·P₊` normal form and unitary group
//! elements.
//!
//! Factors are written `H(λ) = e^{λ̂}`, `P₊(Λ,ξ) = e^{Λ̂+ξ̂}` and
//! `P₋(Λ,ξ) = e^{Λ̂†+ξ̂†}`. The map `λ ↦ e^{λ̂}` is anti-multiplicative on
//! matrices: `e^{λ̂₁}e^{λ̂₂} = e^{λ̂₃}` with `e^{λ₃} = e^{λ₂}e^{λ₁}` and
//! `tr λ₃ = tr λ₁ + tr λ₂`. The trace matters since `e^{λ̂}` carries the
//! scalar `e^{−½tr λ}`.

use crate::algebra::{self, AntisymmetricMap, PairLinear, TraceClassMap};
use crate::branch::{self, BranchPath};
use crate::error::{FermiError, Result};
use crate::fock::{self, FockOperator, ModeSpace, ModeVector};
use crate::linalg::{self, conj, conj_vec, ket_bra, outer, CMat, CVec, C64};

/// `𝟙 − Λ′Λ` counts as singular below this smallest singular value.
pub const SINGULAR_CROSSING_TOL: f64 = 1e-8;
/// `b` counts as exceptional when `|b + 2|` is below this.
pub const EXCEPTIONAL_B_TOL: f64 = 1e-8;

/// One exponential factor of a group word.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupFactor {
    /// `e^{λ̂}`
    H(TraceClassMap),
    /// `e^{Λ̂+ξ̂}`
    PPlus(PairLinear),
    /// `e^{Λ̂†+ξ̂†}`
    PMinus(PairLinear),
}

impl GroupFactor {
    pub fn dim(&self) -> usize {
        match self {
            GroupFactor::H(l) => l.nrows(),
            GroupFactor::PPlus(p) | GroupFactor::PMinus(p) => p.dim(),
        }
    }

    pub fn realize(&self, ms: &ModeSpace) -> Result<FockOperator> {
        match self {
            GroupFactor::H(l) => Ok(algebra::current_operator(ms, l)?.exp()),
            GroupFactor::PPlus(p) => Ok(p.annihilation_operator(ms)?.exp_nilpotent()),
            GroupFactor::PMinus(p) => Ok(p.creation_operator(ms)?.exp_nilpotent()),
        }
    }
}

/// Finite product of factors, applied left to right as written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupWord {
    pub factors: Vec<GroupFactor>,
}

impl GroupWord {
    pub fn new(factors: Vec<GroupFactor>) -> Self {
        Self { factors }
    }

    pub fn realize(&self, ms: &ModeSpace) -> Result<FockOperator> {
        let mut op = FockOperator::identity(ms);
        for f in &self.factors {
            op = &op * &f.realize(ms)?;
        }
        Ok(op)
    }
}

/// `e^{Λ̂₋†+ξ̂₋†} e^{λ̂} e^{Λ̂₊+ξ̂₊}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub minus: PairLinear,
    pub middle: TraceClassMap,
    pub plus: PairLinear,
}

impl NormalForm {
    pub fn identity(n: usize) -> Self {
        Self {
            minus: PairLinear::zero(n),
            middle: CMat::zeros(n, n),
            plus: PairLinear::zero(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.middle.nrows()
    }

    pub fn to_word(&self) -> GroupWord {
        GroupWord::new(vec![
            GroupFactor::PMinus(self.minus.clone()),
            GroupFactor::H(self.middle.clone()),
            GroupFactor::PPlus(self.plus.clone()),
        ])
    }

    pub fn realize(&self, ms: &ModeSpace) -> Result<FockOperator> {
        self.to_word().realize(ms)
    }

    /// Largest payload difference. The middle factor is compared through
    /// `e^{λ}` and `e^{−½tr λ}`, which is all the realization depends on.
    pub fn payload_distance(&self, other: &NormalForm) -> f64 {
        let pl = |a: &PairLinear, b: &PairLinear| {
            linalg::max_abs(&(a.pair.matrix() - b.pair.matrix())).max(linalg::max_abs_vec(&(&a.linear - &b.linear)))
        };
        let group = linalg::max_abs(&(linalg::expm(&self.middle) - linalg::expm(&other.middle)));
        let scalar = ((self.middle.trace() * -0.5).exp() - (other.middle.trace() * -0.5).exp()).norm();
        pl(&self.minus, &other.minus)
            .max(pl(&self.plus, &other.plus))
            .max(group)
            .max(scalar)
    }
}

/// `Λ′ = e^{−λ}Λe^{−λ*}` in matrix form `A′ = e^{−λ}·A·e^{−λᵀ}`, so that
/// `e^{λ̂}e^{Λ̂} = e^{Λ̂′}e^{λ̂}`.
pub fn reorder_hl(lambda: &TraceClassMap, pair: &AntisymmetricMap) -> AntisymmetricMap {
    if linalg::max_abs(lambda) == 0.0 {
        return pair.clone();
    }
    let g = linalg::expm(&-lambda);
    symmetrized(&(&g * pair.matrix() * g.transpose()))
}

/// `ξ′ = e^{−λ}ξ`, so that `e^{λ̂}e^{ξ̂} = e^{ξ̂′}e^{λ̂}`.
pub fn reorder_hx(lambda: &TraceClassMap, xi: &ModeVector) -> ModeVector {
    if linalg::max_abs(lambda) == 0.0 {
        return xi.clone();
    }
    linalg::expm(&-lambda) * xi
}

/// `P₊(Λ,ξ)·H(λ) = H(λ)·P₊(e^{λ}Λe^{λᵀ}, e^{λ}ξ)`.
fn move_plus_right(p: &PairLinear, lambda: &TraceClassMap) -> PairLinear {
    if linalg::max_abs(lambda) == 0.0 {
        return p.clone();
    }
    let g = linalg::expm(lambda);
    PairLinear {
        pair: symmetrized(&(&g * p.pair.matrix() * g.transpose())),
        linear: &g * &p.linear,
    }
}

/// `H(λ)·P₋(Λ,ξ) = P₋(e^{λ*}Λ(e^{λ*})ᵀ, e^{λ*}ξ)·H(λ)`.
fn move_minus_left(lambda: &TraceClassMap, p: &PairLinear) -> PairLinear {
    if linalg::max_abs(lambda) == 0.0 {
        return p.clone();
    }
    let g = linalg::expm(&lambda.adjoint());
    PairLinear {
        pair: symmetrized(&(&g * p.pair.matrix() * g.transpose())),
        linear: &g * &p.linear,
    }
}

fn symmetrized(a: &CMat) -> AntisymmetricMap {
    AntisymmetricMap::antisymmetrize(a)
}

/// `e^{Λ̂₁+ξ̂₁}e^{Λ̂₂+ξ̂₂} = e^{Λ̂+ξ̂}` with `Λ = Λ₁ + Λ₂ + ½Λ′`,
/// `Λ′η = ξ₂{η,ξ₁} − ξ₁{η,ξ₂}` and `ξ = ξ₁ + ξ₂`.
pub fn merge_pplus(first: &PairLinear, second: &PairLinear) -> PairLinear {
    let correction = outer(&second.linear, &first.linear) - outer(&first.linear, &second.linear);
    PairLinear {
        pair: AntisymmetricMap::new_unchecked(first.pair.matrix() + second.pair.matrix() + correction * C64::from(0.5)),
        linear: &first.linear + &second.linear,
    }
}

/// `e^{Λ̂₁†+ξ̂₁†}e^{Λ̂₂†+ξ̂₂†} = e^{Λ̂†+ξ̂†}`, the adjoint of [`merge_pplus`] with
/// the factors swapped.
pub fn merge_pminus(first: &PairLinear, second: &PairLinear) -> PairLinear {
    merge_pplus(second, first)
}

/// `ln(1+z)/z`, continuous at `z = 0`.
fn log1p_ratio(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        let mut sum = C64::new(0.0, 0.0);
        let mut power = C64::new(1.0, 0.0);
        for k in 0..8 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += power * (sign / (k + 1) as f64);
            power *= z;
        }
        sum
    } else {
        (C64::new(1.0, 0.0) + z).ln() / z
    }
}

/// Data of the reordering `P₊(Λ′,ξ′)·P₋(Λ,ξ) = P₋(Ω,η)·H(ν*)H(β)H(μ)H(ν′)·P₊(Ω′,η′)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelppData {
    pub mu: TraceClassMap,
    pub beta: TraceClassMap,
    pub nu: TraceClassMap,
    pub nu_prime: TraceClassMap,
    pub eta: ModeVector,
    pub eta_prime: ModeVector,
    pub omega: AntisymmetricMap,
    pub omega_prime: AntisymmetricMap,
    pub b: C64,
    pub branch: BranchPath,
}

impl RelppData {
    pub fn h_factors(&self) -> [TraceClassMap; 4] {
        [
            self.nu.adjoint(),
            self.beta.clone(),
            self.mu.clone(),
            self.nu_prime.clone(),
        ]
    }

    pub fn rhs_word(&self) -> GroupWord {
        let mut factors = vec![GroupFactor::PMinus(PairLinear {
            pair: self.omega.clone(),
            linear: self.eta.clone(),
        })];
        factors.extend(self.h_factors().into_iter().map(GroupFactor::H));
        factors.push(GroupFactor::PPlus(PairLinear {
            pair: self.omega_prime.clone(),
            linear: self.eta_prime.clone(),
        }));
        GroupWord::new(factors)
    }
}

/// Reorders `P₊(Λ′,ξ′)·P₋(Λ,ξ)`. Requires `𝟙 − Λ′Λ` invertible and
/// `b = {ξ, e^{μ}ξ′} ≠ −2`.
pub fn relpp(plus: &PairLinear, minus: &PairLinear) -> Result<RelppData> {
    let n = plus.dim();
    fock::check_len(n, minus.dim())?;
    let (ap, xp) = (plus.pair.matrix(), &plus.linear);
    let (a, x) = (minus.pair.matrix(), &minus.linear);
    let cross = ap * conj(a);
    let m = linalg::identity(n) - &cross;
    let smin = linalg::smallest_singular_value(&m);
    if smin < SINGULAR_CROSSING_TOL {
        return Err(FermiError::SingularCrossing {
            min_singular_value: smin,
        });
    }
    let em = linalg::inverse(&m)?;
    let b = x.dotc(&(&em * xp));
    if (b + 2.0).norm() < EXCEPTIONAL_B_TOL {
        return Err(FermiError::ExceptionalB { re: b.re, im: b.im });
    }
    let (log_det, branch) = branch::continued_log_det(&cross)?;
    let mu = linalg::logm_with_trace(&em, -log_det)?;

    let em_star_x = em.adjoint() * x;
    let beta = ket_bra(xp, &em_star_x) * -log1p_ratio(b * 0.5);

    let em_xp = &em * xp;
    let u = a * conj_vec(&em_xp);
    let nu = ket_bra(&u, xp) * C64::from(0.5);
    let u2 = &em * ap * conj_vec(x);
    let nu_prime = ket_bra(&u2, x) * C64::from(0.5);

    let eta = (&em_star_x - &u) * (C64::from(2.0) / (b.conj() + 2.0));
    let eta_prime = (&em_xp - &u2) * (C64::from(2.0) / (b + 2.0));

    let omega = a * conj(&em) - (outer(&u, &em_star_x) - outer(&em_star_x, &u)) / (b.conj() + 2.0);
    let omega_prime = &em * ap - (outer(&u2, &em_xp) - outer(&em_xp, &u2)) / (b + 2.0);

    Ok(RelppData {
        mu,
        beta,
        nu,
        nu_prime,
        eta,
        eta_prime,
        omega: symmetrized(&omega),
        omega_prime: symmetrized(&omega_prime),
        b,
        branch,
    })
}

/// Product in `H^ℂ`: `λ₃` with `e^{λ̂₁}e^{λ̂₂} = e^{λ̂₃}`.
pub fn hc_product(first: &TraceClassMap, second: &TraceClassMap) -> Result<TraceClassMap> {
    if linalg::max_abs(first) == 0.0 {
        return Ok(second.clone());
    }
    if linalg::max_abs(second) == 0.0 {
        return Ok(first.clone());
    }
    let g = linalg::expm(second) * linalg::expm(first);
    linalg::logm_with_trace(&g, first.trace() + second.trace())
}

/// Whether `𝟙 + x` is invertible, i.e. `e^{λ̂}` with `e^{λ} = 𝟙 + x` exists.
pub fn hc_membership(x: &CMat) -> bool {
    let m = linalg::identity(x.nrows()) + x;
    let top = linalg::spectral_norm(&m);
    top > 0.0 && linalg::smallest_singular_value(&m) > 1e-12 * top.max(1.0)
}

fn multiply_factor(nf: NormalForm, factor: &GroupFactor) -> Result<NormalForm> {
    match factor {
        GroupFactor::H(lambda) => Ok(NormalForm {
            plus: move_plus_right(&nf.plus, lambda),
            middle: hc_product(&nf.middle, lambda)?,
            minus: nf.minus,
        }),
        GroupFactor::PPlus(p) => Ok(NormalForm {
            plus: merge_pplus(&nf.plus, p),
            ..nf
        }),
        GroupFactor::PMinus(p) => {
            if nf.plus.is_zero() {
                let moved = move_minus_left(&nf.middle, p);
                return Ok(NormalForm {
                    minus: merge_pminus(&nf.minus, &moved),
                    ..nf
                });
            }
            let data = relpp(&nf.plus, p)?;
            let created = PairLinear {
                pair: data.omega.clone(),
                linear: data.eta.clone(),
            };
            let moved = move_minus_left(&nf.middle, &created);
            let mut middle = nf.middle;
            for h in data.h_factors() {
                middle = hc_product(&middle, &h)?;
            }
            Ok(NormalForm {
                minus: merge_pminus(&nf.minus, &moved),
                middle,
                plus: PairLinear {
                    pair: data.omega_prime,
                    linear: data.eta_prime,
                },
            })
        }
    }
}

/// Rewrites a word into `P₋·H^ℂ·P₊` form, one factor at a time from the left.
/// Failing reorderings are reported with the index of the factor being absorbed.
pub fn normal_form(n: usize, word: &GroupWord) -> Result<NormalForm> {
    let mut nf = NormalForm::identity(n);
    for (step, factor) in word.factors.iter().enumerate() {
        if factor.dim() != n {
            return Err(FermiError::DimensionMismatch {
                expected: n,
                found: factor.dim(),
            });
        }
        nf = multiply_factor(nf, factor).map_err(|cause| FermiError::DecompositionObstruction {
            step,
            cause: Box::new(cause),
        })?;
    }
    Ok(nf)
}

/// Unitary group element `e^{Λ̂†+ξ̂†}e^{r̂}e^{ŝ}e^{Λ̂′+ξ̂′}` built from `(Λ, ξ, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitarization {
    pub minus: PairLinear,
    pub s: TraceClassMap,
    pub mu: TraceClassMap,
    pub beta: TraceClassMap,
    pub nu: TraceClassMap,
    pub b: f64,
    pub r: TraceClassMap,
    pub plus: PairLinear,
}

/// Residuals of the three unitarity conditions recomputed from a payload.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityResiduals {
    pub gd1: f64,
    pub gd2: f64,
    pub gd3: f64,
}

impl UnitarityResiduals {
    pub fn max(&self) -> f64 {
        self.gd1.max(self.gd2).max(self.gd3)
    }
}

fn unitarity_parts(a: &CMat, x: &CVec) -> Result<(CMat, CMat, f64, CMat, CMat)> {
    let n = a.nrows();
    let one_minus_sq = linalg::identity(n) - a * conj(a);
    let em = linalg::hermitian_function(&one_minus_sq, |v| 1.0 / v);
    let mu = -linalg::hermitian_log(&one_minus_sq)?;
    let em_x = &em * x;
    let b = x.dotc(&em_x).re;
    let beta = ket_bra(x, &em_x) * -log1p_ratio(C64::from(0.5 * b));
    let nu = ket_bra(&(&em * a * conj_vec(x)), x) * C64::from(0.5);
    Ok((em, mu, b, beta, nu))
}

/// `Q = e^{μ}Λ − (uvᵀ − vuᵀ)/(2+b)` and `e^{μ}ξ − Λ·conj(e^{μ}ξ)`.
fn unitarity_targets(a: &CMat, x: &CVec, em: &CMat, b: f64) -> (CMat, CVec) {
    let u = em * a * conj_vec(x);
    let v = em * x;
    let q = em * a - (outer(&u, &v) - outer(&v, &u)) / C64::from(2.0 + b);
    let w = &v - a * conj_vec(&v);
    (q, w)
}

/// Solves the unitarity conditions for `(Λ′, ξ′, r)` given `(Λ, ξ)` and a
/// skew-adjoint `s`.
pub fn unitarize(minus: &PairLinear, s: &TraceClassMap) -> Result<Unitarization> {
    let n = minus.dim();
    fock::check_len(n, s.nrows())?;
    fock::check_len(n, s.ncols())?;
    let residual = linalg::max_abs(&(s + s.adjoint()));
    if residual > 1e-12 * linalg::max_abs(s).max(1.0) {
        return Err(FermiError::NotSkewAdjoint { residual });
    }
    let a = minus.pair.matrix();
    let x = &minus.linear;
    let (em, mu, b, beta, nu) = unitarity_parts(a, x)?;
    let m = linalg::expm(&nu) * &em * linalg::expm(&beta) * linalg::expm(&nu.adjoint());
    let m = (&m + m.adjoint()) * C64::from(0.5);
    let r = linalg::hermitian_log(&m)? * C64::from(-0.5);
    let t = linalg::expm(s) * linalg::expm(&r);
    let (q, w) = unitarity_targets(a, x, &em, b);
    let pair = symmetrized(&(-(&t * q * t.transpose())));
    let linear = (&t * w) * C64::from(-2.0 / (2.0 + b));
    Ok(Unitarization {
        minus: minus.clone(),
        s: s.clone(),
        mu,
        beta,
        nu,
        b,
        r,
        plus: PairLinear { pair, linear },
    })
}

/// The designated coset representative in `G/H`: [`unitarize`] with `s = 0`.
pub fn coset_representative(minus: &PairLinear) -> Result<Unitarization> {
    unitarize(minus, &CMat::zeros(minus.dim(), minus.dim()))
}

impl Unitarization {
    pub fn normal_form(&self) -> Result<NormalForm> {
        Ok(NormalForm {
            minus: self.minus.clone(),
            middle: hc_product(&self.r, &self.s)?,
            plus: self.plus.clone(),
        })
    }

    pub fn to_word(&self) -> GroupWord {
        GroupWord::new(vec![
            GroupFactor::PMinus(self.minus.clone()),
            GroupFactor::H(self.r.clone()),
            GroupFactor::H(self.s.clone()),
            GroupFactor::PPlus(self.plus.clone()),
        ])
    }

    pub fn realize(&self, ms: &ModeSpace) -> Result<FockOperator> {
        self.to_word().realize(ms)
    }

    /// `e^{−½tr r}e^{−½tr s}`, the vacuum amplitude factor.
    pub fn vacuum_factor(&self) -> C64 {
        ((self.r.trace() + self.s.trace()) * -0.5).exp()
    }

    /// Rechecks the three conditions from the stored payload:
    /// `e^{−μ} = 𝟙 − Λ²`, `e^{−β/2} = 𝟙 + ½ξ{e^{μ}ξ,·}` and
    /// `e^{−2r} = e^{ν}e^{μ}e^{β}e^{ν*}` (first), the pair condition (second)
    /// and the linear condition (third).
    pub fn residuals(&self) -> UnitarityResiduals {
        let n = self.minus.dim();
        let a = self.minus.pair.matrix();
        let x = &self.minus.linear;
        let id = linalg::identity(n);
        let e_mu = linalg::expm(&self.mu);
        let e_minus_mu = linalg::expm(&-&self.mu);
        let gd_mu = linalg::max_abs(&(&e_minus_mu - (&id - a * conj(a))));
        let gd_beta = linalg::max_abs(
            &(linalg::expm(&(&self.beta * C64::from(-0.5))) - (&id + ket_bra(x, &(&e_mu * x)) * C64::from(0.5))),
        );
        let m = linalg::expm(&self.nu) * &e_mu * linalg::expm(&self.beta) * linalg::expm(&self.nu.adjoint());
        let gd_r = linalg::max_abs(&(linalg::expm(&(&self.r * C64::from(-2.0))) - m));
        let hermitian = linalg::max_abs(&(&self.r - self.r.adjoint()));

        let b = x.dotc(&(&e_mu * x)).re;
        let t = linalg::expm(&self.s) * linalg::expm(&self.r);
        let (q, w) = unitarity_targets(a, x, &e_mu, b);
        let gd2 = linalg::max_abs(&(self.plus.pair.matrix() + &t * q * t.transpose()));
        let gd3 = linalg::max_abs_vec(&(&self.plus.linear + (&t * w) * C64::from(2.0 / (2.0 + b))));
        UnitarityResiduals {
            gd1: gd_mu.max(gd_beta).max(gd_r).max(hermitian),
            gd2,
            gd3,
        }
    }
}
