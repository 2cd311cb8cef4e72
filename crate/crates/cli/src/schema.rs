//! JSON wire format, documented in `docs/json.md` at the repository root.
//!
//! Complex numbers are `{"re": .., "im": ..}`, matrices are row-major nested
//! arrays. Everything read from JSON goes back through the core constructors,
//! so an antisymmetric map that is not antisymmetric is rejected on load.

use fermicoh::algebra::{AntisymmetricMap, PairLinear};
use fermicoh::coherent::{ExpansionTerm, KernelValue};
use fermicoh::decomposition::{GroupFactor, GroupWord, NormalForm};
use fermicoh::linalg::{CMat, CVec, C64};
use fermicoh::FermiError;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

impl From<Complex> for C64 {
    fn from(z: Complex) -> Self {
        C64::new(z.re, z.im)
    }
}

pub type Matrix = Vec<Vec<Complex>>;
pub type Vector = Vec<Complex>;

pub fn matrix_to_json(m: &CMat) -> Matrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

pub fn vector_to_json(v: &CVec) -> Vector {
    v.iter().map(|&z| z.into()).collect()
}

/// Square matrix from nested rows; `what` names the field in errors.
pub fn matrix_from_json(rows: &Matrix, what: &str) -> Result<CMat, CliError> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(CliError::Input(format!(
            "{what}: expected {n} columns per row, found a row of {}",
            bad.len()
        )));
    }
    Ok(CMat::from_fn(n, n, |i, j| rows[i][j].into()))
}

pub fn vector_from_json(v: &Vector) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&z| z.into()))
}

/// A point `(Λ, ξ)`: `pair` is the full antisymmetric matrix `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Param {
    pub pair: Matrix,
    pub linear: Vector,
}

impl Param {
    pub fn from_core(p: &PairLinear) -> Self {
        Param {
            pair: matrix_to_json(p.pair.matrix()),
            linear: vector_to_json(&p.linear),
        }
    }

    pub fn to_core(&self) -> Result<PairLinear, CliError> {
        let a = matrix_from_json(&self.pair, "pair")?;
        let pair = AntisymmetricMap::new(a)?;
        Ok(PairLinear::new(pair, vector_from_json(&self.linear))?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "factor", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Factor {
    /// `e^{λ̂}` with `λ` any square matrix.
    H { lambda: Matrix },
    /// `e^{Λ̂+ξ̂}`
    PPlus { pair: Matrix, linear: Vector },
    /// `e^{Λ̂†+ξ̂†}`
    PMinus { pair: Matrix, linear: Vector },
}

impl Factor {
    pub fn from_core(f: &GroupFactor) -> Self {
        match f {
            GroupFactor::H(l) => Factor::H {
                lambda: matrix_to_json(l),
            },
            GroupFactor::PPlus(p) => {
                let Param { pair, linear } = Param::from_core(p);
                Factor::PPlus { pair, linear }
            }
            GroupFactor::PMinus(p) => {
                let Param { pair, linear } = Param::from_core(p);
                Factor::PMinus { pair, linear }
            }
        }
    }

    pub fn to_core(&self) -> Result<GroupFactor, CliError> {
        Ok(match self {
            Factor::H { lambda } => GroupFactor::H(matrix_from_json(lambda, "lambda")?),
            Factor::PPlus { pair, linear } => GroupFactor::PPlus(
                Param {
                    pair: pair.clone(),
                    linear: linear.clone(),
                }
                .to_core()?,
            ),
            Factor::PMinus { pair, linear } => GroupFactor::PMinus(
                Param {
                    pair: pair.clone(),
                    linear: linear.clone(),
                }
                .to_core()?,
            ),
        })
    }
}

/// A product of factors, leftmost first. `dim` is needed for the empty word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Word {
    pub dim: usize,
    pub factors: Vec<Factor>,
}

impl Word {
    pub fn from_core(n: usize, w: &GroupWord) -> Self {
        Word {
            dim: n,
            factors: w.factors.iter().map(Factor::from_core).collect(),
        }
    }

    pub fn to_core(&self) -> Result<GroupWord, CliError> {
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let f = f.to_core().map_err(|e| CliError::Input(format!("factor {k}: {e}")))?;
                if f.dim() != self.dim {
                    return Err(CliError::Input(format!(
                        "factor {k}: {} modes, word declares {}",
                        f.dim(),
                        self.dim
                    )));
                }
                Ok(f)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupWord::new(factors))
    }
}

/// `P₋(minus) · H(middle) · P₊(plus)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Normal {
    pub dim: usize,
    pub minus: Param,
    pub middle: Matrix,
    pub plus: Param,
}

impl Normal {
    pub fn from_core(nf: &NormalForm) -> Self {
        Normal {
            dim: nf.dim(),
            minus: Param::from_core(&nf.minus),
            middle: matrix_to_json(&nf.middle),
            plus: Param::from_core(&nf.plus),
        }
    }

    pub fn to_core(&self) -> Result<NormalForm, CliError> {
        let nf = NormalForm {
            minus: self.minus.to_core()?,
            middle: matrix_from_json(&self.middle, "middle")?,
            plus: self.plus.to_core()?,
        };
        for found in [nf.minus.dim(), nf.middle.nrows(), nf.plus.dim()] {
            if found != self.dim {
                return Err(FermiError::DimensionMismatch {
                    expected: self.dim,
                    found,
                }
                .into());
            }
        }
        Ok(nf)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    /// Index of the factor whose absorption failed.
    pub step: usize,
    pub cause: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Decomposition {
    NormalForm(Normal),
    Obstruction(Obstruction),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub route: String,
    /// Absent when no zero of the determinant exists to stay away from.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub clearance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub radius: Option<f64>,
    pub evaluations: usize,
}

/// One Gram entry. On failure only `error` is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub im: Option<f64>,
    #[serde(default)]
    pub singular: bool,
    #[serde(default)]
    pub exceptional: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl Entry {
    pub fn from_result(r: fermicoh::Result<KernelValue>) -> Self {
        match r {
            Ok(k) => Entry {
                re: Some(k.value.re),
                im: Some(k.value.im),
                singular: k.singular,
                exceptional: k.exceptional,
                branch: Some(Branch {
                    route: k.branch.route.name().to_string(),
                    clearance: k.branch.clearance.is_finite().then_some(k.branch.clearance),
                    radius: k.branch.radius,
                    evaluations: k.branch.evaluations,
                }),
                error: None,
            },
            Err(e) => Entry {
                re: None,
                im: None,
                singular: false,
                exceptional: false,
                branch: None,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn value(&self) -> Option<C64> {
        Some(C64::new(self.re?, self.im?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gram {
    pub dim: usize,
    pub gram: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: Complex,
    pub param: Param,
}

impl Term {
    pub fn from_core(t: &ExpansionTerm) -> Self {
        Term {
            coefficient: t.coefficient.into(),
            param: Param::from_core(&t.param),
        }
    }

    pub fn to_core(&self) -> Result<ExpansionTerm, CliError> {
        Ok(ExpansionTerm {
            coefficient: self.coefficient.into(),
            param: self.param.to_core()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub dim: usize,
    /// 1-based mode indices, in the order given.
    pub indices: Vec<usize>,
    pub terms: Vec<Term>,
    /// `‖Σ cₖ K(pₖ) − a†ψ₀‖` against the dense Fock space.
    pub residual: f64,
}
