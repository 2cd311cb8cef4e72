//! Adjoint representations on `𝔫^ℂ` (dimension `2n`) and `𝔫_s` (dimension
//! `2n+1`), the σ-condition, Hilbert–Schmidt inner products and the Kähler
//! tensors on `𝔭`.
//!
//! Matrices act on coordinates chosen so that the representation is
//! complex-linear and the inner product is a multiple of the standard one:
//! `(conj τ, η)` on `𝔫^ℂ` and `(μ, conj τ, −η)` on `𝔫_s`. In these coordinates
//! the ★-adjoint is the conjugate transpose and `σ` becomes entrywise
//! conjugation composed with a fixed permutation `σ̃`.

use crate::algebra::{self, AlgebraElement, AntisymmetricMap};
use crate::error::{FermiError, Result};
use crate::fock::{self, FockOperator, ModeSpace, ModeVector};
use crate::linalg::{self, conj, conj_vec, CMat, CVec, C64, I};

/// `½⟨ψ₀, (x†y + yx†)ψ₀⟩`.
pub fn aprime_inner(x: &FockOperator, y: &FockOperator) -> Result<C64> {
    fock::check_len(x.dim(), y.dim())?;
    let xd = x.adjoint();
    let vac = |m: &FockOperator, k: &FockOperator| -> C64 {
        // only the vacuum column of the right factor is needed
        m.mat
            .row(0)
            .iter()
            .zip(k.mat.column(0).iter())
            .map(|(a, b)| a * b)
            .sum()
    };
    Ok((vac(&xd, y) + vac(y, &xd)) * 0.5)
}

/// Element `τ̂† + η̂` of `𝔫^ℂ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NcVector {
    pub tau: ModeVector,
    pub eta: ModeVector,
}

impl NcVector {
    pub fn realize(&self, ms: &ModeSpace) -> Result<FockOperator> {
        Ok(algebra::linear_hat_dagger(ms, &self.tau)? + algebra::linear_hat(ms, &self.eta)?)
    }

    pub fn coordinates(&self) -> CVec {
        let n = self.tau.len();
        let mut w = CVec::zeros(2 * n);
        w.rows_mut(0, n).copy_from(&conj_vec(&self.tau));
        w.rows_mut(n, n).copy_from(&self.eta);
        w
    }

    pub fn from_coordinates(w: &CVec) -> Self {
        let n = w.len() / 2;
        Self {
            tau: conj_vec(&w.rows(0, n).into_owned()),
            eta: w.rows(n, n).into_owned(),
        }
    }
}

/// Adjoint action of an even element on `𝔫^ℂ`:
/// `(τ, η) ↦ (λ*τ + Λ₋η, −λη − Λ₊τ)`.
pub fn act_on_nc(x: &AlgebraElement, v: &NcVector) -> Result<NcVector> {
    if !x.is_even() {
        return Err(FermiError::OutsideEvenSubalgebra);
    }
    fock::check_len(x.dim(), v.tau.len())?;
    fock::check_len(x.dim(), v.eta.len())?;
    Ok(NcVector {
        tau: x.current.adjoint() * &v.tau + x.pair_creation.apply(&v.eta),
        eta: -(&x.current * &v.eta) - x.pair_annihilation.apply(&v.tau),
    })
}

/// Element `½μk + kτ̂† + kη̂` of `𝔫_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct NsVector {
    pub mu: C64,
    pub tau: ModeVector,
    pub eta: ModeVector,
}

impl NsVector {
    pub fn realize(&self, ms: &ModeSpace) -> Result<FockOperator> {
        let k = fock::grading_k(ms);
        let odd = algebra::linear_hat_dagger(ms, &self.tau)? + algebra::linear_hat(ms, &self.eta)?;
        Ok(k.scaled(self.mu * 0.5) + &k * &odd)
    }

    pub fn coordinates(&self) -> CVec {
        let n = self.tau.len();
        let mut w = CVec::zeros(2 * n + 1);
        w[0] = self.mu;
        w.rows_mut(1, n).copy_from(&conj_vec(&self.tau));
        w.rows_mut(n + 1, n).copy_from(&(-&self.eta));
        w
    }

    pub fn from_coordinates(w: &CVec) -> Self {
        let n = (w.len() - 1) / 2;
        Self {
            mu: w[0],
            tau: conj_vec(&w.rows(1, n).into_owned()),
            eta: -w.rows(n + 1, n).into_owned(),
        }
    }
}

/// Adjoint action on `𝔫_s`:
/// `(μ,τ,η) ↦ (−{ξ₋,η} − {τ,ξ₊}, λ*τ + Λ₋η − conj(μ)ξ₋, −λη − Λ₊τ − μξ₊)`.
pub fn act_on_ns(x: &AlgebraElement, v: &NsVector) -> NsVector {
    let xm = &x.linear_creation;
    let xp = &x.linear_annihilation;
    NsVector {
        mu: -xm.dotc(&v.eta) - v.tau.dotc(xp),
        tau: x.current.adjoint() * &v.tau + x.pair_creation.apply(&v.eta) - xm * v.mu.conj(),
        eta: -(&x.current * &v.eta) - x.pair_annihilation.apply(&v.tau) - xp * v.mu,
    }
}

/// Matrix of a representation in the coordinates above.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub mat: CMat,
}

impl RepMatrix {
    pub fn size(&self) -> usize {
        self.mat.nrows()
    }
}

/// `Z = [[λᵀ, conj A₋], [−A₊, −λ]]` on `(conj τ, η)`.
pub fn nc_matrix(x: &AlgebraElement) -> Result<RepMatrix> {
    if !x.is_even() {
        return Err(FermiError::OutsideEvenSubalgebra);
    }
    let n = x.dim();
    let mut m = CMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&x.current.transpose());
    m.view_mut((0, n), (n, n)).copy_from(&conj(x.pair_creation.matrix()));
    m.view_mut((n, 0), (n, n)).copy_from(&(-x.pair_annihilation.matrix()));
    m.view_mut((n, n), (n, n)).copy_from(&(-&x.current));
    Ok(RepMatrix { mat: m })
}

/// `Z = [[0, −ξ₊ᵀ, ξ₋ᴴ], [−conj ξ₋, λᵀ, −conj A₋], [ξ₊, A₊, −λ]]` on `(μ, conj τ, −η)`.
pub fn ns_matrix(x: &AlgebraElement) -> RepMatrix {
    let n = x.dim();
    let xm = &x.linear_creation;
    let xp = &x.linear_annihilation;
    let mut m = CMat::zeros(2 * n + 1, 2 * n + 1);
    m.view_mut((0, 1), (1, n)).copy_from(&(-xp.transpose()));
    m.view_mut((0, n + 1), (1, n)).copy_from(&xm.adjoint());
    m.view_mut((1, 0), (n, 1)).copy_from(&(-conj_vec(xm)));
    m.view_mut((n + 1, 0), (n, 1)).copy_from(xp);
    m.view_mut((1, 1), (n, n)).copy_from(&x.current.transpose());
    m.view_mut((1, n + 1), (n, n))
        .copy_from(&(-conj(x.pair_creation.matrix())));
    m.view_mut((n + 1, 1), (n, n)).copy_from(x.pair_annihilation.matrix());
    m.view_mut((n + 1, n + 1), (n, n)).copy_from(&(-&x.current));
    RepMatrix { mat: m }
}

/// Block permutation `σ̃`: the swap of the two `n`-blocks, with an extra
/// leading 1 in the odd-sized case.
pub fn sigma_tilde(size: usize) -> CMat {
    let offset = size % 2;
    let n = size / 2;
    let mut s = CMat::zeros(size, size);
    if offset == 1 {
        s[(0, 0)] = C64::from(1.0);
    }
    for i in 0..n {
        s[(offset + i, offset + n + i)] = C64::from(1.0);
        s[(offset + n + i, offset + i)] = C64::from(1.0);
    }
    s
}

/// Frobenius norm of `Z★ + σZσ`, i.e. `Zᴴ + σ̃·conj(Z)·σ̃`.
pub fn check_sigma_condition(z: &RepMatrix) -> f64 {
    let s = sigma_tilde(z.size());
    linalg::frobenius(&(z.mat.adjoint() + &s * conj(&z.mat) * &s))
}

/// Complex dimension of the solutions `Z` of the σ-condition at a given size.
pub fn sigma_solution_dimension(size: usize) -> usize {
    // Zᴴ = −σ̃ conj(Z) σ̃ is the conjugate of the complex-linear Zᵀ = −σ̃Zσ̃.
    let s = sigma_tilde(size);
    let dim = size * size;
    let mut map = CMat::zeros(dim, dim);
    for col in 0..dim {
        let mut e = CMat::zeros(size, size);
        e[(col % size, col / size)] = C64::from(1.0);
        let image = e.transpose() + &s * &e * &s;
        map.set_column(col, &linalg::flatten(&image));
    }
    linalg::nullity(&map, 1e-10)
}

/// Closed-form Hilbert–Schmidt product
/// `2tr(λ₁*λ₂) − tr(Λ₂′Λ₁′) − tr(Λ₁Λ₂) + 2{ξ₂,ξ₁} + 2{ξ₁′,ξ₂′}`
/// (unprimed: creation components, primed: annihilation components).
pub fn hs_inner(x: &AlgebraElement, y: &AlgebraElement) -> C64 {
    let current = (x.current.adjoint() * &y.current).trace() * 2.0;
    let plus = y.pair_annihilation.compose(&x.pair_annihilation).trace();
    let minus = x.pair_creation.compose(&y.pair_creation).trace();
    let lin_minus = y.linear_creation.dotc(&x.linear_creation) * 2.0;
    let lin_plus = x.linear_annihilation.dotc(&y.linear_annihilation) * 2.0;
    current - plus - minus + lin_minus + lin_plus
}

/// `tr(x̌★y̌)` from the `𝔫_s` matrices.
pub fn hs_inner_trace(x: &AlgebraElement, y: &AlgebraElement) -> C64 {
    (ns_matrix(x).mat.adjoint() * ns_matrix(y).mat).trace()
}

/// `tr(x̌★y̌)` from the `𝔫^ℂ` matrices (even elements).
pub fn hs_inner_trace_nc(x: &AlgebraElement, y: &AlgebraElement) -> Result<C64> {
    Ok((nc_matrix(x)?.mat.adjoint() * nc_matrix(y)?.mat).trace())
}

/// Residual of `⟨⟨[z,x],y⟩⟩ + ⟨⟨x,[z,y]⟩⟩` over the given pairs.
pub fn adjoint_invariance_residual(z: &AlgebraElement, pairs: &[(AlgebraElement, AlgebraElement)]) -> f64 {
    pairs
        .iter()
        .map(|(x, y)| {
            let lhs = hs_inner(&algebra::bracket(z, x), y) + hs_inner(x, &algebra::bracket(z, y));
            lhs.norm()
        })
        .fold(0.0, f64::max)
}

fn check_in_p(x: &AlgebraElement, tol: f64) -> Result<()> {
    let current = linalg::max_abs(&x.current);
    if current > tol {
        return Err(FermiError::NotRealForm {
            detail: format!(": current part {current:.3e} on an element of 𝔭"),
        });
    }
    Ok(())
}

fn check_real(x: &AlgebraElement, tol: f64) -> Result<()> {
    let defect = x.real_form_defect();
    if defect > tol {
        return Err(FermiError::NotRealForm {
            detail: format!(" (defect {defect:.3e})"),
        });
    }
    Ok(())
}

/// Complex structure `I = ±i` on `𝔭±`. In parameters both the pair and the
/// linear components get multiplied by `i`.
pub fn complex_structure(x: &AlgebraElement) -> AlgebraElement {
    AlgebraElement {
        current: CMat::zeros(x.dim(), x.dim()),
        pair_creation: x.pair_creation.scaled(I),
        pair_annihilation: x.pair_annihilation.scaled(I),
        linear_creation: &x.linear_creation * I,
        linear_annihilation: &x.linear_annihilation * I,
    }
}

/// Metric, symplectic form and Hermitian product on `𝔭`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KahlerTensors {
    pub metric: f64,
    pub omega: f64,
    pub s: C64,
}

/// `⟨⟨x,y⟩⟩`, `ω(x,y) = ½⟨⟨Ix,y⟩⟩` and `s = ⟨⟨x,y⟩⟩ + 2iω(x,y)` for real-form
/// elements of `𝔭`.
pub fn kahler_tensors(x: &AlgebraElement, y: &AlgebraElement, tol: f64) -> Result<KahlerTensors> {
    for z in [x, y] {
        check_real(z, tol)?;
        check_in_p(z, tol)?;
    }
    let metric = hs_inner(x, y).re;
    let omega = 0.5 * hs_inner(&complex_structure(x), y).re;
    Ok(KahlerTensors {
        metric,
        omega,
        s: C64::new(metric, 2.0 * omega),
    })
}

/// `s(x,y) = −2tr(Λ₂Λ₁) + 4{ξ₁,ξ₂}` with `(Λ, ξ)` the annihilation parameters.
pub fn s_closed_form(x: &AlgebraElement, y: &AlgebraElement) -> C64 {
    let t = y.pair_annihilation.compose(&x.pair_annihilation).trace();
    let w = x.linear_annihilation.dotc(&y.linear_annihilation);
    -t * 2.0 + w * 4.0
}

/// Real basis of the parameter space of `𝔤^ℂ` (dimension `2(2n²+n)`).
pub fn complex_algebra_real_basis(n: usize) -> Vec<AlgebraElement> {
    let mut basis = Vec::new();
    for unit in [C64::from(1.0), I] {
        for p in 0..n {
            for q in 0..n {
                let mut m = CMat::zeros(n, n);
                m[(p, q)] = unit;
                basis.push(AlgebraElement::from_current(m));
            }
        }
        for p in 0..n {
            for q in p + 1..n {
                let pair = AntisymmetricMap::pairing(n, p, q).scaled(unit);
                basis.push(AlgebraElement::from_pair_creation(pair.clone()));
                basis.push(AlgebraElement::from_pair_annihilation(pair));
            }
        }
        for p in 0..n {
            let mut e = CVec::zeros(n);
            e[p] = unit;
            basis.push(AlgebraElement::from_linear_creation(e.clone()));
            basis.push(AlgebraElement::from_linear_annihilation(e));
        }
    }
    basis
}

/// Real rank of `x ↦ ns_matrix(x)` on the real basis; faithful iff this equals
/// the basis size.
pub fn ns_faithfulness_rank(n: usize) -> (usize, usize) {
    let basis = complex_algebra_real_basis(n);
    let images: Vec<CVec> = basis.iter().map(|x| linalg::flatten(&ns_matrix(x).mat)).collect();
    (linalg::real_rank(&images, 1e-10), basis.len())
}

/// Complex dimension of the unital associative algebra generated by the given
/// matrices. Equals `size²` iff there is no common invariant subspace.
pub fn generated_algebra_dimension(generators: &[CMat]) -> usize {
    let Some(first) = generators.first() else {
        return 0;
    };
    let size = first.nrows();
    let mut basis: Vec<CVec> = Vec::new();
    let mut mats: Vec<CMat> = Vec::new();
    let push = |m: CMat, basis: &mut Vec<CVec>, mats: &mut Vec<CMat>| -> bool {
        let mut v = linalg::flatten(&m);
        let scale = v.norm();
        if scale == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for b in basis.iter() {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let rest = v.norm();
        if rest <= 1e-9 * scale {
            return false;
        }
        basis.push(v / C64::from(rest));
        mats.push(m);
        true
    };
    push(linalg::identity(size), &mut basis, &mut mats);
    let mut frontier = 0;
    while frontier < mats.len() && basis.len() < size * size {
        let current = mats[frontier].clone();
        for g in generators {
            push(g * &current, &mut basis, &mut mats);
        }
        frontier += 1;
    }
    basis.len()
}

/// Whether an operator vanishes on the even/odd grading: `kXk = ±X`.
pub fn grading_parity_residual(ms: &ModeSpace, x: &FockOperator, odd: bool) -> f64 {
    let k = fock::grading_k(ms);
    let kxk = &(&k * x) * &k;
    let sign = if odd { -1.0 } else { 1.0 };
    (kxk - x.scaled(C64::from(sign))).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::realize;
    use crate::fock::commutator;
    use crate::linalg::{c, ZERO};
    use crate::sample;

    fn ms(n: usize) -> ModeSpace {
        ModeSpace::new(n).unwrap()
    }

    #[test]
    fn aprime_inner_on_nc() {
        let s = ms(3);
        let mut rng = sample::trial_rng(30, 0);
        let v = |rng: &mut sample::TrialRng| sample::mode_vector(rng, 3, 1.0);
        let (xi, eta, mu, tau) = (v(&mut rng), v(&mut rng), v(&mut rng), v(&mut rng));
        let x = NcVector {
            tau: xi.clone(),
            eta: eta.clone(),
        }
        .realize(&s)
        .unwrap();
        let y = NcVector {
            tau: mu.clone(),
            eta: tau.clone(),
        }
        .realize(&s)
        .unwrap();
        let got = aprime_inner(&x, &y).unwrap();
        let expected = (mu.dotc(&xi) + eta.dotc(&tau)) * 0.25;
        assert!((got - expected).norm() < 1e-13);
    }

    #[test]
    fn aprime_inner_positive_and_orthogonal() {
        let s = ms(3);
        let mut rng = sample::trial_rng(31, 0);
        let tau = sample::mode_vector(&mut rng, 3, 1.0);
        let eta = sample::mode_vector(&mut rng, 3, 1.0);
        let plus = algebra::linear_hat(&s, &eta).unwrap();
        let minus = algebra::linear_hat_dagger(&s, &tau).unwrap();
        assert!(aprime_inner(&plus, &minus).unwrap().norm() < 1e-14);
        let x = plus.clone() + minus.clone();
        let nrm = aprime_inner(&x, &x).unwrap();
        assert!(nrm.re > 0.0 && nrm.im.abs() < 1e-14);
        let zero = FockOperator::zero(&s);
        assert_eq!(aprime_inner(&zero, &zero).unwrap(), ZERO);
    }

    #[test]
    fn nc_action_examples() {
        let n = 3;
        let mut rng = sample::trial_rng(32, 0);
        let v = NcVector {
            tau: sample::mode_vector(&mut rng, n, 1.0),
            eta: sample::mode_vector(&mut rng, n, 1.0),
        };
        let id = AlgebraElement::from_current(linalg::identity(n));
        let out = act_on_nc(&id, &v).unwrap();
        assert!(linalg::max_abs_vec(&(&out.tau - &v.tau)) < 1e-15);
        assert!(linalg::max_abs_vec(&(&out.eta + &v.eta)) < 1e-15);

        let pair = sample::antisymmetric(&mut rng, n, 1.0);
        let x = AlgebraElement {
            pair_creation: pair.clone(),
            pair_annihilation: pair.clone(),
            ..AlgebraElement::zero(n)
        };
        let out = act_on_nc(&x, &v).unwrap();
        assert!(linalg::max_abs_vec(&(&out.tau - pair.apply(&v.eta))) < 1e-15);
        assert!(linalg::max_abs_vec(&(&out.eta + pair.apply(&v.tau))) < 1e-15);

        let odd = AlgebraElement::from_linear_annihilation(v.eta.clone());
        assert_eq!(act_on_nc(&odd, &v), Err(FermiError::OutsideEvenSubalgebra));
    }

    #[test]
    fn nc_action_matches_commutator() {
        let s = ms(3);
        let mut rng = sample::trial_rng(33, 0);
        for _ in 0..5 {
            let mut x = sample::algebra_element(&mut rng, 3, 1.0);
            x.linear_creation = CVec::zeros(3);
            x.linear_annihilation = CVec::zeros(3);
            let v = NcVector {
                tau: sample::mode_vector(&mut rng, 3, 1.0),
                eta: sample::mode_vector(&mut rng, 3, 1.0),
            };
            let lhs = commutator(&realize(&s, &x).unwrap(), &v.realize(&s).unwrap()).unwrap();
            let rhs = act_on_nc(&x, &v).unwrap().realize(&s).unwrap();
            assert!(lhs.distance(&rhs) < 1e-11);
            let z = nc_matrix(&x).unwrap();
            let moved = NcVector::from_coordinates(&(&z.mat * v.coordinates()));
            assert!(moved.realize(&s).unwrap().distance(&rhs) < 1e-11);
        }
    }

    #[test]
    fn ns_action_matches_commutator() {
        let s = ms(3);
        let mut rng = sample::trial_rng(34, 0);
        for _ in 0..5 {
            let x = sample::algebra_element(&mut rng, 3, 1.0);
            let v = NsVector {
                mu: sample::complex(&mut rng),
                tau: sample::mode_vector(&mut rng, 3, 1.0),
                eta: sample::mode_vector(&mut rng, 3, 1.0),
            };
            let lhs = commutator(&realize(&s, &x).unwrap(), &v.realize(&s).unwrap()).unwrap();
            let image = act_on_ns(&x, &v);
            assert!(lhs.distance(&image.realize(&s).unwrap()) < 1e-11);
            let z = ns_matrix(&x);
            let moved = NsVector::from_coordinates(&(&z.mat * v.coordinates()));
            assert!((moved.mu - image.mu).norm() < 1e-13);
            assert!(linalg::max_abs_vec(&(&moved.tau - &image.tau)) < 1e-13);
            assert!(linalg::max_abs_vec(&(&moved.eta - &image.eta)) < 1e-13);
        }
    }

    #[test]
    fn ns_action_trivial_cases() {
        let n = 2;
        let eta = CVec::from_vec(vec![c(0.5, 1.0), c(-1.0, 0.25)]);
        let xi = CVec::from_vec(vec![c(0.3, -0.7), c(1.1, 0.2)]);
        let v = NsVector {
            mu: ZERO,
            tau: CVec::zeros(n),
            eta: eta.clone(),
        };
        let zero = act_on_ns(&AlgebraElement::zero(n), &v);
        assert_eq!(zero.mu, ZERO);
        let out = act_on_ns(&AlgebraElement::from_linear_creation(xi.clone()), &v);
        assert!((out.mu + xi.dotc(&eta)).norm() < 1e-15);
        assert!(linalg::max_abs_vec(&out.tau) < 1e-15 && linalg::max_abs_vec(&out.eta) < 1e-15);
    }

    #[test]
    fn sigma_condition_holds_on_algebra() {
        let mut rng = sample::trial_rng(35, 0);
        for n in 1..5 {
            let x = sample::algebra_element(&mut rng, n, 1.0);
            assert!(check_sigma_condition(&ns_matrix(&x)) < 1e-11);
            let r = sample::real_element(&mut rng, n, 1.0);
            assert!(check_sigma_condition(&ns_matrix(&r)) < 1e-11);
            let mut e = x.clone();
            e.linear_creation = CVec::zeros(n);
            e.linear_annihilation = CVec::zeros(n);
            assert!(check_sigma_condition(&nc_matrix(&e).unwrap()) < 1e-11);
        }
    }

    #[test]
    fn sigma_condition_rejects_identity() {
        for n in 1..4 {
            let z = RepMatrix {
                mat: linalg::identity(2 * n),
            };
            let expected = 2.0 * ((2 * n) as f64).sqrt();
            assert!((check_sigma_condition(&z) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_solution_space_is_orthogonal_algebra() {
        for n in 1..4 {
            assert_eq!(sigma_solution_dimension(2 * n + 1), (2 * n + 1) * n);
            assert_eq!(sigma_solution_dimension(2 * n), n * (2 * n - 1));
        }
    }

    #[test]
    fn hs_inner_examples() {
        let n = 3;
        let mut xi = CVec::zeros(n);
        xi[1] = c(0.6, 0.8);
        let x = AlgebraElement::from_linear_creation(xi);
        assert!((hs_inner(&x, &x) - C64::from(2.0)).norm() < 1e-15);

        let mut rng = sample::trial_rng(36, 0);
        for _ in 0..5 {
            let x = sample::algebra_element(&mut rng, n, 1.0);
            let y = sample::algebra_element(&mut rng, n, 1.0);
            assert!((hs_inner(&x, &y) - hs_inner_trace(&x, &y)).norm() < 1e-12);
            let hx = AlgebraElement::from_current(x.current.clone());
            let hy = AlgebraElement::from_current(y.current.clone());
            let iph = (x.current.adjoint() * &y.current).trace() * 2.0;
            assert!((hs_inner(&hx, &hy) - iph).norm() < 1e-12);
            assert!((hs_inner_trace_nc(&hx, &hy).unwrap() - iph).norm() < 1e-12);
        }
    }

    #[test]
    fn hs_inner_is_invariant() {
        let mut rng = sample::trial_rng(37, 0);
        let n = 3;
        let pairs: Vec<_> = (0..4)
            .map(|_| {
                (
                    sample::algebra_element(&mut rng, n, 1.0),
                    sample::algebra_element(&mut rng, n, 1.0),
                )
            })
            .collect();
        assert_eq!(adjoint_invariance_residual(&AlgebraElement::zero(n), &pairs), 0.0);
        let h = AlgebraElement::from_current(sample::skew_hermitian(&mut rng, n, 1.0));
        assert!(adjoint_invariance_residual(&h, &pairs) < 1e-10);
        let z = sample::real_element(&mut rng, n, 1.0);
        assert!(adjoint_invariance_residual(&z, &pairs) < 1e-10);
    }

    fn p_element(rng: &mut sample::TrialRng, n: usize) -> AlgebraElement {
        AlgebraElement::real_form(
            CMat::zeros(n, n),
            &sample::antisymmetric(rng, n, 1.0),
            &sample::mode_vector(rng, n, 1.0),
        )
    }

    #[test]
    fn kahler_structure() {
        let n = 3;
        let mut rng = sample::trial_rng(38, 0);
        for _ in 0..5 {
            let x = p_element(&mut rng, n);
            let y = p_element(&mut rng, n);
            let ix = complex_structure(&x);
            assert!(ix.is_real_form(1e-14));
            assert!(complex_structure(&ix).distance(&x.scaled(C64::from(-1.0))) < 1e-15);
            let t = kahler_tensors(&x, &y, 1e-12).unwrap();
            assert!((t.s - s_closed_form(&x, &y)).norm() < 1e-12);
            assert!(kahler_tensors(&x, &x, 1e-12).unwrap().omega.abs() < 1e-13);
            let ty = kahler_tensors(&y, &x, 1e-12).unwrap();
            assert!((t.omega + ty.omega).abs() < 1e-12);
        }
        let bad = sample::algebra_element(&mut rng, n, 1.0);
        assert!(kahler_tensors(&bad, &bad, 1e-12).is_err());
    }

    #[test]
    fn complex_structure_commutes_with_h() {
        let n = 3;
        let mut rng = sample::trial_rng(39, 0);
        let h = AlgebraElement::from_current(sample::matrix(&mut rng, n, 1.0));
        let mut x = sample::algebra_element(&mut rng, n, 1.0);
        x.current = CMat::zeros(n, n);
        let lhs = algebra::bracket(&h, &complex_structure(&x));
        let rhs = complex_structure(&algebra::bracket(&h, &x));
        assert!(lhs.distance(&rhs) < 1e-13);
    }

    #[test]
    fn star_representation() {
        let mut rng = sample::trial_rng(40, 0);
        let x = sample::algebra_element(&mut rng, 3, 1.0);
        let lhs = ns_matrix(&x.dagger()).mat;
        let rhs = ns_matrix(&x).mat.adjoint();
        assert!(linalg::max_abs(&(lhs - rhs)) < 1e-15);
    }

    #[test]
    fn faithful_and_irreducible() {
        for n in 1..4 {
            let (rank, expected) = ns_faithfulness_rank(n);
            assert_eq!(rank, expected);
            let mut rng = sample::trial_rng(41, n as u64);
            let gens: Vec<CMat> = (0..2)
                .map(|_| ns_matrix(&sample::real_element(&mut rng, n, 1.0)).mat)
                .collect();
            let size = 2 * n + 1;
            assert_eq!(generated_algebra_dimension(&gens), size * size);
        }
        let h = AlgebraElement::from_current(linalg::identity(2));
        assert!(generated_algebra_dimension(&[ns_matrix(&h).mat]) < 25);
    }

    #[test]
    fn reductive_inclusions() {
        let n = 3;
        let mut rng = sample::trial_rng(42, 0);
        let h = AlgebraElement::from_current(sample::skew_hermitian(&mut rng, n, 1.0));
        let p = p_element(&mut rng, n);
        assert!(algebra::bracket(&h, &p).is_in_p());
        let zero_vec = CVec::zeros(n);
        let m1 = AlgebraElement::real_form(CMat::zeros(n, n), &sample::antisymmetric(&mut rng, n, 1.0), &zero_vec);
        let m2 = AlgebraElement::real_form(CMat::zeros(n, n), &sample::antisymmetric(&mut rng, n, 1.0), &zero_vec);
        let b = algebra::bracket(&m1, &m2);
        assert!(b.pair_creation.is_zero() && b.pair_annihilation.is_zero() && b.is_even());
    }

    #[test]
    fn grading_parity() {
        let s = ms(3);
        let mut rng = sample::trial_rng(43, 0);
        let even = realize(&s, &AlgebraElement::from_current(sample::matrix(&mut rng, 3, 1.0))).unwrap();
        let odd = algebra::linear_hat(&s, &sample::mode_vector(&mut rng, 3, 1.0)).unwrap();
        assert!(grading_parity_residual(&s, &even, false) < 1e-15);
        assert!(grading_parity_residual(&s, &odd, true) < 1e-15);
    }
}
