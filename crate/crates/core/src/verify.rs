//! Randomized verification suites: every closed form against the dense
//! Fock-space oracle.
//!
//! Trial `t` of a check draws its inputs from `trial_rng(seed ^ salt, t)`
//! where the salt depends on the check name only, so a report is a pure
//! function of `(suite, dim, trials, seed)`.

use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{self, AlgebraElement, AntisymmetricMap, PairLinear};
use crate::coherent::{self, CoherentParam};
use crate::decomposition::{self, GroupFactor, GroupWord};
use crate::error::{FermiError, Result};
use crate::fock::{self, FockOperator, FockState, ModeSpace};
use crate::linalg::{self, CMat, CVec, C64};
use crate::representations::{self as reps, NcVector, NsVector};
use crate::sample::{self, TrialRng};

/// Largest mode count accepted by the suites.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Car,
    Brackets,
    Representations,
    Kahler,
    Reorder,
    Relpp,
    NormalForm,
    Unitarity,
    Norms,
    Kernel,
    Denseness,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Car,
        Suite::Brackets,
        Suite::Representations,
        Suite::Kahler,
        Suite::Reorder,
        Suite::Relpp,
        Suite::NormalForm,
        Suite::Unitarity,
        Suite::Norms,
        Suite::Kernel,
        Suite::Denseness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Car => "car",
            Suite::Brackets => "brackets",
            Suite::Representations => "representations",
            Suite::Kahler => "kahler",
            Suite::Reorder => "reorder",
            Suite::Relpp => "relpp",
            Suite::NormalForm => "normal-form",
            Suite::Unitarity => "unitarity",
            Suite::Norms => "norms",
            Suite::Kernel => "kernel",
            Suite::Denseness => "denseness",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Parameters of a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Overrides every per-check tolerance when set.
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(FermiError::ModeCountOutOfRange {
                n: self.dim,
                max: MAX_DIM,
            });
        }
        if self.trials == 0 {
            return Err(FermiError::InvalidIndices("trials must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if t.is_nan() || t <= 0.0 {
                return Err(FermiError::InvalidIndices(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Trials that returned an error instead of a residual.
    pub errors: usize,
    pub passed: bool,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Runner {
    cfg: RunConfig,
    checks: Vec<CheckRecord>,
}

fn salt(name: &str) -> u64 {
    // FNV-1a
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

impl Runner {
    fn ms(&self) -> ModeSpace {
        ModeSpace::new(self.cfg.dim).expect("validated dimension")
    }

    /// Runs `trials` independent trials of `f` in parallel and records the
    /// largest residual.
    fn check<F>(&mut self, name: &str, tolerance: f64, trials: usize, f: F)
    where
        F: Fn(&mut TrialRng) -> Result<f64> + Sync,
    {
        // zero-tolerance checks (ranks, inequalities) are exact and not overridden
        let tolerance = if tolerance == 0.0 {
            0.0
        } else {
            self.cfg.tol.unwrap_or(tolerance)
        };
        let seed = self.cfg.seed ^ salt(name);
        let start = Instant::now();
        let results: Vec<Result<f64>> = (0..trials as u64)
            .into_par_iter()
            .map(|t| f(&mut sample::trial_rng(seed, t)))
            .collect();
        let errors = results.iter().filter(|r| r.is_err()).count();
        let max_residual = results.iter().filter_map(|r| r.as_ref().ok()).fold(0.0, |m: f64, r| {
            if r.is_nan() {
                f64::INFINITY
            } else {
                m.max(*r)
            }
        });
        self.checks.push(CheckRecord {
            name: name.to_string(),
            trials,
            max_residual,
            tolerance,
            errors,
            passed: errors == 0 && max_residual <= tolerance,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }

    /// A deterministic check evaluated once.
    fn exact<F>(&mut self, name: &str, tolerance: f64, f: F)
    where
        F: Fn(&mut TrialRng) -> Result<f64> + Sync,
    {
        self.check(name, tolerance, 1, f);
    }
}

fn rel(distance: f64, scale: f64) -> f64 {
    distance / scale.max(1.0)
}

fn op_distance(a: &FockOperator, b: &FockOperator) -> f64 {
    rel(a.distance(b), a.max_abs().max(b.max_abs()))
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut r = Runner {
        cfg: *cfg,
        checks: Vec::new(),
    };
    match suite {
        Suite::Car => car(&mut r),
        Suite::Brackets => brackets(&mut r),
        Suite::Representations => representations(&mut r),
        Suite::Kahler => kahler(&mut r),
        Suite::Reorder => reorder(&mut r),
        Suite::Relpp => relpp(&mut r),
        Suite::NormalForm => normal_form(&mut r),
        Suite::Unitarity => unitarity(&mut r),
        Suite::Norms => norms(&mut r),
        Suite::Kernel => kernel(&mut r),
        Suite::Denseness => denseness(&mut r),
    }
    let passed = r.checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        dim: cfg.dim,
        trials: cfg.trials,
        seed: cfg.seed,
        checks: r.checks,
        passed,
    })
}

/// Runs several suites into one report whose check names carry the suite
/// as prefix.
pub fn run_suites(name: &str, suites: &[Suite], cfg: &RunConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &suite in suites {
        let report = run_suite(suite, cfg)?;
        checks.extend(report.checks.into_iter().map(|mut c| {
            c.name = format!("{}/{}", suite.name(), c.name);
            c
        }));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: name.to_string(),
        dim: cfg.dim,
        trials: cfg.trials,
        seed: cfg.seed,
        checks,
        passed,
    })
}

fn car(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    let id = FockOperator::identity(&ms);
    r.check("anticommutator a a-dagger", 1e-12, trials, |rng| {
        let xi = sample::mode_vector(rng, n, 1.0);
        let eta = sample::mode_vector(rng, n, 1.0);
        let lhs = fock::anticommutator(&fock::annihilator(&ms, &xi)?, &fock::creator(&ms, &eta)?)?;
        Ok(lhs.distance(&id.scaled(eta.dotc(&xi))))
    });
    r.check("anticommutator a a", 1e-12, trials, |rng| {
        let xi = sample::mode_vector(rng, n, 1.0);
        let eta = sample::mode_vector(rng, n, 1.0);
        Ok(fock::anticommutator(&fock::annihilator(&ms, &xi)?, &fock::annihilator(&ms, &eta)?)?.max_abs())
    });
    r.check("anticommutator a-dagger a-dagger", 1e-12, trials, |rng| {
        let xi = sample::mode_vector(rng, n, 1.0);
        let eta = sample::mode_vector(rng, n, 1.0);
        Ok(fock::anticommutator(&fock::creator(&ms, &xi)?, &fock::creator(&ms, &eta)?)?.max_abs())
    });
    r.check("annihilators kill the vacuum", 1e-12, trials, |rng| {
        let xi = sample::mode_vector(rng, n, 1.0);
        Ok(fock::annihilator(&ms, &xi)?.apply(&FockState::vacuum(&ms)).norm())
    });
}

#[derive(Clone, Copy)]
enum Part {
    Current,
    PairCreation,
    PairAnnihilation,
    LinearCreation,
    LinearAnnihilation,
}

impl Part {
    const ALL: [Part; 5] = [
        Part::Current,
        Part::PairCreation,
        Part::PairAnnihilation,
        Part::LinearCreation,
        Part::LinearAnnihilation,
    ];

    fn name(self) -> &'static str {
        match self {
            Part::Current => "current",
            Part::PairCreation => "pair-creation",
            Part::PairAnnihilation => "pair-annihilation",
            Part::LinearCreation => "linear-creation",
            Part::LinearAnnihilation => "linear-annihilation",
        }
    }

    fn sample(self, rng: &mut TrialRng, n: usize) -> AlgebraElement {
        match self {
            Part::Current => AlgebraElement::from_current(sample::matrix(rng, n, 1.0)),
            Part::PairCreation => AlgebraElement::from_pair_creation(sample::antisymmetric(rng, n, 1.0)),
            Part::PairAnnihilation => AlgebraElement::from_pair_annihilation(sample::antisymmetric(rng, n, 1.0)),
            Part::LinearCreation => AlgebraElement::from_linear_creation(sample::mode_vector(rng, n, 1.0)),
            Part::LinearAnnihilation => AlgebraElement::from_linear_annihilation(sample::mode_vector(rng, n, 1.0)),
        }
    }
}

fn bracket_residual(ms: &ModeSpace, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    let lhs = algebra::realize(ms, &algebra::bracket(x, y))?;
    let rhs = fock::commutator(&algebra::realize(ms, x)?, &algebra::realize(ms, y)?)?;
    Ok(op_distance(&lhs, &rhs))
}

fn brackets(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    for (i, a) in Part::ALL.iter().enumerate() {
        for b in &Part::ALL[i..] {
            let name = format!("[{}, {}]", a.name(), b.name());
            r.check(&name, 1e-10, trials, |rng| {
                let x = a.sample(rng, n);
                let y = b.sample(rng, n);
                bracket_residual(&ms, &x, &y)
            });
        }
    }
    r.check("[generic, generic]", 1e-10, trials, |rng| {
        let x = sample::algebra_element(rng, n, 1.0);
        let y = sample::algebra_element(rng, n, 1.0);
        bracket_residual(&ms, &x, &y)
    });
    r.check("jacobi identity", 1e-10, trials, |rng| {
        let x = sample::algebra_element(rng, n, 1.0);
        let y = sample::algebra_element(rng, n, 1.0);
        let z = sample::algebra_element(rng, n, 1.0);
        let b = algebra::bracket;
        let sum = &(&b(&x, &b(&y, &z)) + &b(&y, &b(&z, &x))) + &b(&z, &b(&x, &y));
        Ok(sum.max_abs())
    });
    r.check("real form closed under bracket", 1e-12, trials, |rng| {
        let x = sample::real_element(rng, n, 1.0);
        let y = sample::real_element(rng, n, 1.0);
        Ok(algebra::bracket(&x, &y).real_form_defect())
    });
    r.exact("dimension of the realized real form", 0.0, |_| {
        let family = algebra::real_form_spanning_family(n);
        let images = family
            .iter()
            .map(|x| Ok(linalg::flatten(&algebra::realize(&ms, x)?.mat)))
            .collect::<Result<Vec<_>>>()?;
        let rank = linalg::real_rank(&images, 1e-10);
        Ok((rank as f64 - (n * (2 * n + 1)) as f64).abs())
    });
}

fn random_ns_vector(rng: &mut TrialRng, n: usize) -> NsVector {
    NsVector {
        mu: sample::complex(rng),
        tau: sample::mode_vector(rng, n, 1.0),
        eta: sample::mode_vector(rng, n, 1.0),
    }
}

fn even_element(rng: &mut TrialRng, n: usize) -> AlgebraElement {
    let mut x = sample::algebra_element(rng, n, 1.0);
    x.linear_creation = CVec::zeros(n);
    x.linear_annihilation = CVec::zeros(n);
    x
}

fn representations(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    r.check("n_s action matches commutator", 1e-10, trials, |rng| {
        let x = sample::algebra_element(rng, n, 1.0);
        let v = random_ns_vector(rng, n);
        let lhs = fock::commutator(&algebra::realize(&ms, &x)?, &v.realize(&ms)?)?;
        let rhs = reps::act_on_ns(&x, &v).realize(&ms)?;
        let moved = NsVector::from_coordinates(&(&reps::ns_matrix(&x).mat * v.coordinates())).realize(&ms)?;
        Ok(op_distance(&lhs, &rhs).max(op_distance(&moved, &rhs)))
    });
    r.check("n^C action matches commutator", 1e-10, trials, |rng| {
        let x = even_element(rng, n);
        let v = NcVector {
            tau: sample::mode_vector(rng, n, 1.0),
            eta: sample::mode_vector(rng, n, 1.0),
        };
        let lhs = fock::commutator(&algebra::realize(&ms, &x)?, &v.realize(&ms)?)?;
        let rhs = reps::act_on_nc(&x, &v)?.realize(&ms)?;
        Ok(op_distance(&lhs, &rhs))
    });
    r.check("sigma condition on n_s", 1e-11, trials, |rng| {
        Ok(reps::check_sigma_condition(&reps::ns_matrix(&sample::algebra_element(
            rng, n, 1.0,
        ))))
    });
    r.check("sigma condition on n^C", 1e-11, trials, |rng| {
        Ok(reps::check_sigma_condition(&reps::nc_matrix(&even_element(rng, n))?))
    });
    r.check("star representation", 1e-12, trials, |rng| {
        let x = sample::algebra_element(rng, n, 1.0);
        Ok(linalg::max_abs(
            &(reps::ns_matrix(&x.dagger()).mat - reps::ns_matrix(&x).mat.adjoint()),
        ))
    });
    r.exact("sigma solution dimension", 0.0, |_| {
        let odd = reps::sigma_solution_dimension(2 * n + 1) as f64 - (n * (2 * n + 1)) as f64;
        let even = reps::sigma_solution_dimension(2 * n) as f64 - (n * (2 * n - 1)) as f64;
        Ok(odd.abs().max(even.abs()))
    });
    r.exact("n_s representation faithful", 0.0, |_| {
        let (rank, expected) = reps::ns_faithfulness_rank(n);
        Ok((rank as f64 - expected as f64).abs())
    });
    r.check("n_s representation irreducible", 0.0, trials.min(5), |rng| {
        let gens: Vec<CMat> = (0..2)
            .map(|_| reps::ns_matrix(&sample::real_element(rng, n, 1.0)).mat)
            .collect();
        let size = 2 * n + 1;
        Ok((reps::generated_algebra_dimension(&gens) as f64 - (size * size) as f64).abs())
    });
    r.check("HS closed form equals trace", 1e-10, trials, |rng| {
        let x = sample::algebra_element(rng, n, 1.0);
        let y = sample::algebra_element(rng, n, 1.0);
        Ok(rel(
            (reps::hs_inner(&x, &y) - reps::hs_inner_trace(&x, &y)).norm(),
            reps::hs_inner(&x, &x).norm(),
        ))
    });
    r.check("HS restriction to the even part", 1e-10, trials, |rng| {
        let x = even_element(rng, n);
        let y = even_element(rng, n);
        let closed = (x.current.adjoint() * &y.current).trace() * 2.0
            - y.pair_annihilation.compose(&x.pair_annihilation).trace()
            - x.pair_creation.compose(&y.pair_creation).trace();
        let a = (reps::hs_inner(&x, &y) - closed).norm();
        let b = (reps::hs_inner_trace_nc(&x, &y)? - closed).norm();
        Ok(rel(a.max(b), closed.norm()))
    });
    r.check("HS restriction to currents", 1e-10, trials, |rng| {
        let x = AlgebraElement::from_current(sample::matrix(rng, n, 1.0));
        let y = AlgebraElement::from_current(sample::matrix(rng, n, 1.0));
        let closed = (x.current.adjoint() * &y.current).trace() * 2.0;
        let a = (reps::hs_inner(&x, &y) - closed).norm();
        let b = (reps::hs_inner_trace_nc(&x, &y)? - closed).norm();
        Ok(rel(a.max(b), closed.norm()))
    });
    r.check("HS invariance under the real form", 1e-10, trials, |rng| {
        let z = sample::real_element(rng, n, 1.0);
        let pair = (
            sample::algebra_element(rng, n, 1.0),
            sample::algebra_element(rng, n, 1.0),
        );
        Ok(reps::adjoint_invariance_residual(&z, &[pair]))
    });
}

fn p_element(rng: &mut TrialRng, n: usize) -> AlgebraElement {
    AlgebraElement::real_form(
        CMat::zeros(n, n),
        &sample::antisymmetric(rng, n, 1.0),
        &sample::mode_vector(rng, n, 1.0),
    )
}

fn kahler(r: &mut Runner) {
    let n = r.cfg.dim;
    let trials = r.cfg.trials;
    r.check("complex structure squares to -1", 1e-14, trials, |rng| {
        let x = p_element(rng, n);
        let ii = reps::complex_structure(&reps::complex_structure(&x));
        Ok(ii.distance(&x.scaled(C64::from(-1.0))))
    });
    r.check("complex structure preserves the real form", 1e-14, trials, |rng| {
        Ok(reps::complex_structure(&p_element(rng, n)).real_form_defect())
    });
    r.check("s closed form", 1e-10, trials, |rng| {
        let x = p_element(rng, n);
        let y = p_element(rng, n);
        let t = reps::kahler_tensors(&x, &y, 1e-12)?;
        Ok((t.s - reps::s_closed_form(&x, &y)).norm())
    });
    r.check("omega antisymmetric, metric symmetric", 1e-12, trials, |rng| {
        let x = p_element(rng, n);
        let y = p_element(rng, n);
        let a = reps::kahler_tensors(&x, &y, 1e-12)?;
        let b = reps::kahler_tensors(&y, &x, 1e-12)?;
        Ok((a.omega + b.omega).abs().max((a.metric - b.metric).abs()))
    });
    r.check("metric compatible with complex structure", 1e-12, trials, |rng| {
        let x = p_element(rng, n);
        let y = p_element(rng, n);
        let a = reps::kahler_tensors(&x, &y, 1e-12)?;
        let b = reps::kahler_tensors(&reps::complex_structure(&x), &reps::complex_structure(&y), 1e-12)?;
        Ok((a.metric - b.metric).abs())
    });
    r.check("complex structure commutes with h", 1e-12, trials, |rng| {
        let h = AlgebraElement::from_current(sample::skew_hermitian(rng, n, 1.0));
        let x = p_element(rng, n);
        let lhs = algebra::bracket(&h, &reps::complex_structure(&x));
        let rhs = reps::complex_structure(&algebra::bracket(&h, &x));
        Ok(lhs.distance(&rhs))
    });
}

fn reorder(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    let h = |l: &CMat| GroupFactor::H(l.clone()).realize(&ms);
    let pp = |p: &PairLinear| GroupFactor::PPlus(p.clone()).realize(&ms);
    let pm = |p: &PairLinear| GroupFactor::PMinus(p.clone()).realize(&ms);
    r.check("H(l) P+(A) = P+(A') H(l)", 1e-9, trials, |rng| {
        let l = sample::matrix(rng, n, 0.7);
        let a = PairLinear {
            pair: sample::antisymmetric(rng, n, 1.0),
            linear: CVec::zeros(n),
        };
        let moved = PairLinear {
            pair: decomposition::reorder_hl(&l, &a.pair),
            linear: CVec::zeros(n),
        };
        Ok(op_distance(&(&h(&l)? * &pp(&a)?), &(&pp(&moved)? * &h(&l)?)))
    });
    r.check("H(l) P+(x) = P+(x') H(l)", 1e-9, trials, |rng| {
        let l = sample::matrix(rng, n, 0.7);
        let x = PairLinear {
            pair: AntisymmetricMap::zero(n),
            linear: sample::mode_vector(rng, n, 1.0),
        };
        let moved = PairLinear {
            pair: AntisymmetricMap::zero(n),
            linear: decomposition::reorder_hx(&l, &x.linear),
        };
        Ok(op_distance(&(&h(&l)? * &pp(&x)?), &(&pp(&moved)? * &h(&l)?)))
    });
    r.check("P+ P+ merge", 1e-9, trials, |rng| {
        let a = sample::pair_linear(rng, n, 1.0, 1.0);
        let b = sample::pair_linear(rng, n, 1.0, 1.0);
        Ok(op_distance(
            &(&pp(&a)? * &pp(&b)?),
            &pp(&decomposition::merge_pplus(&a, &b))?,
        ))
    });
    r.check("P- P- merge", 1e-9, trials, |rng| {
        let a = sample::pair_linear(rng, n, 1.0, 1.0);
        let b = sample::pair_linear(rng, n, 1.0, 1.0);
        Ok(op_distance(
            &(&pm(&a)? * &pm(&b)?),
            &pm(&decomposition::merge_pminus(&a, &b))?,
        ))
    });
}

fn relpp(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    r.check("P+ P- = P- H H H H P+", 1e-9, trials, |rng| {
        let plus = sample::pair_linear(rng, n, 0.9, 0.8);
        let minus = sample::pair_linear(rng, n, 0.9, 0.8);
        let data = decomposition::relpp(&plus, &minus)?;
        let lhs = GroupWord::new(vec![GroupFactor::PPlus(plus), GroupFactor::PMinus(minus)]).realize(&ms)?;
        Ok(op_distance(&lhs, &data.rhs_word().realize(&ms)?))
    });
    r.check("P+ P- with large pair parameters", 1e-9, trials, |rng| {
        let plus = sample::pair_linear(rng, n, 3.0, 1.0);
        let minus = sample::pair_linear(rng, n, 3.0, 1.0);
        let data = decomposition::relpp(&plus, &minus)?;
        let lhs = GroupWord::new(vec![GroupFactor::PPlus(plus), GroupFactor::PMinus(minus)]).realize(&ms)?;
        Ok(op_distance(&lhs, &data.rhs_word().realize(&ms)?))
    });
    r.check("vacuum amplitude of P+ P-", 1e-9, trials, |rng| {
        // ⟨ψ₀, P₊(p′)P₋(p)ψ₀⟩ = ⟨K(p′), K(p)⟩
        let plus = sample::pair_linear(rng, n, 0.9, 0.8);
        let minus = sample::pair_linear(rng, n, 0.9, 0.8);
        let data = decomposition::relpp(&plus, &minus)?;
        let [a, b, c, d] = data.h_factors();
        let amplitude = ((a.trace() + b.trace() + c.trace() + d.trace()) * -0.5).exp();
        let k = coherent::kernel(&plus, &minus)?.value;
        Ok(rel((amplitude - k).norm(), k.norm()))
    });
}

fn normal_form(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    r.check("normal form realizes the word", 1e-8, trials, |rng| {
        let w = sample::group_word(rng, n, 6, 0.5);
        let nf = decomposition::normal_form(n, &w)?;
        Ok(op_distance(&nf.realize(&ms)?, &w.realize(&ms)?))
    });
    r.check("normal form is idempotent", 1e-8, trials, |rng| {
        let w = sample::group_word(rng, n, 6, 0.5);
        let nf = decomposition::normal_form(n, &w)?;
        let again = decomposition::normal_form(n, &nf.to_word())?;
        Ok(nf.payload_distance(&again))
    });
    r.check("normal form of a unitarized element", 1e-8, trials, |rng| {
        let minus = sample::pair_linear(rng, n, 1.0, 1.0);
        let u = decomposition::unitarize(&minus, &sample::skew_hermitian(rng, n, 1.0))?;
        let nf = decomposition::normal_form(n, &u.to_word())?;
        Ok(op_distance(&nf.realize(&ms)?, &u.realize(&ms)?))
    });
}

fn unitarity(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    let id = FockOperator::identity(&ms);
    r.check("U*U = 1", 1e-9, trials, |rng| {
        let minus = sample::pair_linear(rng, n, 2.0, 1.5);
        let u = decomposition::unitarize(&minus, &sample::skew_hermitian(rng, n, 1.0))?.realize(&ms)?;
        Ok((&u.adjoint() * &u).distance(&id))
    });
    r.check("unitarity conditions", 1e-9, trials, |rng| {
        let minus = sample::pair_linear(rng, n, 2.0, 1.5);
        Ok(decomposition::unitarize(&minus, &sample::skew_hermitian(rng, n, 1.0))?
            .residuals()
            .max())
    });
    r.check("coset representative is a unit vacuum image", 1e-10, trials, |rng| {
        let minus = sample::pair_linear(rng, n, 2.0, 1.5);
        let psi = coherent::unitarized_coherent(&ms, &minus)?;
        Ok((psi.norm() - 1.0).abs())
    });
}

fn norms(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    r.check("norm closed form", 1e-10, trials, |rng| {
        let p = sample::pair_linear(rng, n, 2.0, 1.5);
        let closed = coherent::coherent_norm(&p);
        Ok(rel((coherent::coherent_state(&ms, &p)?.norm() - closed).abs(), closed))
    });
    r.check("norm bounds", 0.0, trials, |rng| {
        let p = sample::pair_linear(rng, n, 2.0, 1.5);
        let norm = coherent::coherent_norm(&p);
        Ok((1.0 - norm).max(norm - coherent::norm_upper_bound(&p)).max(0.0))
    });
    r.check("normalized equals unitarized", 1e-10, trials, |rng| {
        let p = sample::pair_linear(rng, n, 1.5, 1.0);
        let a = coherent::normalized_coherent(&ms, &p)?;
        let b = coherent::unitarized_coherent(&ms, &p)?;
        Ok(a.distance(&b))
    });
    r.check("norm from exp of half trace r", 1e-10, trials, |rng| {
        let p = sample::pair_linear(rng, n, 1.5, 1.0);
        let u = decomposition::coset_representative(&p)?;
        let via_r = (u.r.trace() * 0.5).exp();
        let norm = coherent::coherent_norm(&p);
        Ok(rel((via_r - C64::from(norm)).norm(), norm))
    });
}

/// Pair of parameters with `𝟙 − Λ₁Λ₂` singular: `Λ₁ = a·UPUᵀ`,
/// `Λ₂ = −UPUᵀ/ā` with `P` the pairing of modes 0 and 1 and `U` unitary, so
/// `Λ₁Λ₂` is the projector onto `span(Ue₀, Ue₁)`.
pub fn singular_pair(rng: &mut TrialRng, n: usize, linear_on_block: bool) -> (CoherentParam, CoherentParam, CMat) {
    let u = linalg::expm(&sample::skew_hermitian(rng, n, 2.0));
    let pair = AntisymmetricMap::pairing(n, 0, 1).congruence(&u);
    let a = sample::complex(rng) + C64::from(0.5);
    let mut x1 = sample::mode_vector(rng, n, 1.0);
    let mut x2 = sample::mode_vector(rng, n, 1.0);
    if !linear_on_block {
        x1[0] = C64::from(0.0);
        x1[1] = C64::from(0.0);
        x2[0] = C64::from(0.0);
        x2[1] = C64::from(0.0);
    }
    let p1 = PairLinear {
        pair: pair.scaled(a),
        linear: &u * x1,
    };
    let p2 = PairLinear {
        pair: pair.scaled(C64::from(-1.0) / a.conj()),
        linear: &u * x2,
    };
    (p1, p2, u)
}

fn dense_kernel(ms: &ModeSpace, p1: &CoherentParam, p2: &CoherentParam) -> Result<C64> {
    Ok(coherent::coherent_state(ms, p1)?.inner(&coherent::coherent_state(ms, p2)?))
}

fn kernel(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    let trials = r.cfg.trials;
    r.check("kernel closed form with phase", 1e-9, trials, |rng| {
        let p1 = sample::pair_linear(rng, n, 2.5, 1.0);
        let p2 = sample::pair_linear(rng, n, 2.5, 1.0);
        let dense = dense_kernel(&ms, &p1, &p2)?;
        Ok(rel((coherent::kernel(&p1, &p2)?.value - dense).norm(), dense.norm()))
    });
    r.check("kernel on the diagonal", 1e-10, trials, |rng| {
        let p = sample::pair_linear(rng, n, 2.0, 1.5);
        let norm = coherent::coherent_norm(&p);
        Ok(rel(
            (coherent::kernel(&p, &p)?.value - C64::from(norm * norm)).norm(),
            norm * norm,
        ))
    });
    if n >= 2 {
        let few = trials.clamp(1, 20);
        r.check("kernel near singular crossings", 1e-9, few.max(10), |rng| {
            let (p1, mut p2, _) = singular_pair(rng, n, true);
            let eps = 10f64.powf(-rng.random_range(2.0..10.0));
            p2.pair = p2.pair.scaled(C64::from(1.0 + eps));
            let dense = dense_kernel(&ms, &p1, &p2)?;
            Ok(rel((coherent::kernel(&p1, &p2)?.value - dense).norm(), dense.norm()))
        });
        r.check("kernel vanishes at singular crossings", 1e-8, few.max(5), |rng| {
            let (p1, p2, _) = singular_pair(rng, n, false);
            let k = coherent::kernel(&p1, &p2)?;
            if !k.singular {
                return Ok(f64::INFINITY);
            }
            Ok(k.value.norm().max(dense_kernel(&ms, &p1, &p2)?.norm()))
        });
        r.check("kernel limit at singular crossings", 1e-9, few.max(5), |rng| {
            let (p1, p2, _) = singular_pair(rng, n, true);
            let dense = dense_kernel(&ms, &p1, &p2)?;
            Ok(rel((coherent::kernel(&p1, &p2)?.value - dense).norm(), dense.norm()))
        });
    }
    r.check("reproducing property", 1e-9, trials, |rng| {
        let p1 = sample::pair_linear(rng, n, 1.5, 1.0);
        let p2 = sample::pair_linear(rng, n, 1.5, 1.0);
        let f = coherent::reproducing_eval(&ms, &coherent::coherent_state(&ms, &p2)?, &p1)?;
        let k = coherent::kernel(&p1, &p2)?.value;
        Ok(rel((f - k).norm(), k.norm()))
    });
    r.check("reproducing function of the vacuum", 1e-12, trials, |rng| {
        let p = sample::pair_linear(rng, n, 1.5, 1.0);
        Ok((coherent::reproducing_eval(&ms, &FockState::vacuum(&ms), &p)? - C64::from(1.0)).norm())
    });
    r.check("anti-holomorphy of reproducing functions", 1e-6, trials, |rng| {
        let psi = FockState {
            amps: sample::mode_vector(rng, ms.fock_dim(), 1.0),
        };
        let p = sample::pair_linear(rng, n, 1.0, 1.0);
        let v = sample::pair_linear(rng, n, 1.0, 1.0);
        coherent::antiholomorphy_residual(&ms, &psi, &p, &v, 1e-4)
    });
    r.check("Gram matrix positive semidefinite", 1e-9, trials.min(20), |rng| {
        let params: Vec<_> = (0..8).map(|_| sample::pair_linear(rng, n, 1.5, 1.0)).collect();
        let g = coherent::gram_values(&coherent::gram_matrix(&params)?);
        let herm = (&g + g.adjoint()) * C64::from(0.5);
        let scale = linalg::max_abs(&g).max(1.0);
        let hermiticity = linalg::max_abs(&(&g - g.adjoint())) / scale;
        let min = herm.symmetric_eigen().eigenvalues.min() / scale;
        Ok(hermiticity.max(-min).max(0.0))
    });
}

fn denseness(r: &mut Runner) {
    let ms = r.ms();
    let n = ms.modes();
    r.exact("expansions reconstruct every basis state", 1e-10, |_| {
        let mut worst: f64 = 0.0;
        for mask in 0..ms.fock_dim() {
            let terms = coherent::generating_expansion(n, &coherent::mask_indices(mask))?;
            let state = coherent::combine(&ms, &terms)?;
            worst = worst.max(state.distance(&FockState::basis(&ms, mask)));
        }
        Ok(worst)
    });
    r.exact("coherent states used span the Fock space", 0.0, |_| {
        let mut vectors = Vec::new();
        for mask in 0..ms.fock_dim() {
            for term in coherent::generating_expansion(n, &coherent::mask_indices(mask))? {
                vectors.push(coherent::coherent_state(&ms, &term.param)?.amps);
            }
        }
        let m = CMat::from_columns(&vectors);
        Ok((linalg::numerical_rank(&m, 1e-10) as f64 - ms.fock_dim() as f64).abs())
    });
    r.check(
        "expansion of unordered mode lists",
        1e-10,
        r.cfg.trials.min(50),
        |rng| {
            let mut modes: Vec<usize> = (0..n).collect();
            let k = rng.random_range(0..=n);
            for i in 0..k {
                let j = rng.random_range(i..n);
                modes.swap(i, j);
            }
            modes.truncate(k);
            let target = modes.iter().rev().try_fold(FockState::vacuum(&ms), |psi, &i| {
                Ok::<_, FermiError>(fock::creator(&ms, &ms.basis_vector(i))?.apply(&psi))
            })?;
            let terms = coherent::generating_expansion(n, &modes)?;
            Ok(coherent::combine(&ms, &terms)?.distance(&target))
        },
    );
}
