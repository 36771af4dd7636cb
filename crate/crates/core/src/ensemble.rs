//! Validated discrimination instances: states, priors and measurements.
//!
//! Every type here is checked on construction, so a value that exists is a
//! valid one. Validation failures name the offending index.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, numerical_rank, sum_matrices, ComplexMatrix, Tolerances};

/// A quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        check_state(&matrix, tol)
            .map(|()| Self(matrix))
            .map_err(|reason| Error::BadState { index: 0, reason })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

fn check_psd_hermitian(m: &ComplexMatrix, tol: &Tolerances) -> Result<(), String> {
    let defect = m.hermiticity_defect();
    if defect > tol.recon {
        return Err(format!("not Hermitian (max |A - A^dag| = {defect:e})"));
    }
    let es = hermitian_eig(m, tol).map_err(|e| e.to_string())?;
    let min = es.eigenvalues[0];
    if min < -tol.psd {
        return Err(format!("not positive semidefinite (min eigenvalue {min:e})"));
    }
    Ok(())
}

fn check_state(m: &ComplexMatrix, tol: &Tolerances) -> Result<(), String> {
    check_psd_hermitian(m, tol)?;
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol.recon || tr.im.abs() > tol.recon {
        return Err(format!("trace is {} + {}i, expected 1", tr.re, tr.im));
    }
    Ok(())
}

fn check_priors(priors: &[f64], tol: &Tolerances) -> Result<()> {
    for (index, &p) in priors.iter().enumerate() {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::BadPrior {
                index,
                reason: format!("prior must be strictly positive, got {p}"),
            });
        }
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > tol.recon {
        return Err(Error::BadPrior {
            index: priors.len().saturating_sub(1),
            reason: format!("priors sum to {total}, expected 1"),
        });
    }
    Ok(())
}

/// States `rho_1..rho_m` with prior probabilities `p_1..p_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    states: Vec<DensityMatrix>,
    priors: Vec<f64>,
}

impl Ensemble {
    /// Validates raw states and priors. Requires `m >= 2`, one shared dimension,
    /// positive priors summing to one, and valid density matrices.
    pub fn new(states: Vec<ComplexMatrix>, priors: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::WrongArity {
                expected: 2,
                found: states.len(),
            });
        }
        if priors.len() != states.len() {
            return Err(Error::BadPrior {
                index: priors.len().min(states.len()),
                reason: format!("{} priors for {} states", priors.len(), states.len()),
            });
        }
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
        }
        check_priors(&priors, tol)?;
        let mut checked = Vec::with_capacity(states.len());
        for (index, s) in states.into_iter().enumerate() {
            check_state(&s, tol).map_err(|reason| Error::BadState { index, reason })?;
            checked.push(DensityMatrix(s));
        }
        Ok(Self {
            states: checked,
            priors,
        })
    }

    pub fn m(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &ComplexMatrix {
        self.states[i].matrix()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `p_i rho_i`.
    pub fn weighted(&self, i: usize) -> ComplexMatrix {
        self.state(i).scale(self.priors[i])
    }

    /// `sum_i p_i rho_i`.
    pub fn average_state(&self) -> ComplexMatrix {
        let weighted: Vec<ComplexMatrix> = (0..self.m()).map(|i| self.weighted(i)).collect();
        sum_matrices(self.dim(), &weighted)
    }

    /// Same states, new priors.
    pub fn with_priors(&self, priors: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if priors.len() != self.m() {
            return Err(Error::WrongArity {
                expected: self.m(),
                found: priors.len(),
            });
        }
        check_priors(&priors, tol)?;
        Ok(Self {
            states: self.states.clone(),
            priors,
        })
    }
}

/// Free-function form of [`Ensemble::new`].
pub fn validate_ensemble(
    states: Vec<ComplexMatrix>,
    priors: Vec<f64>,
    tol: &Tolerances,
) -> Result<Ensemble> {
    Ensemble::new(states, priors, tol)
}

/// Dimension of the span of all states: the numerical rank of `sum_i rho_i`.
pub fn effective_dimension(e: &Ensemble, tol: &Tolerances) -> Result<usize> {
    let total = sum_matrices(e.dim(), e.states().iter().map(DensityMatrix::matrix));
    numerical_rank(&total, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PovmKind {
    /// One outcome per state.
    Ambiguous,
    /// Element 0 is the inconclusive outcome, elements `1..=m` identify states.
    Unambiguous,
}

impl PovmKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PovmKind::Ambiguous => "ambiguous",
            PovmKind::Unambiguous => "unambiguous",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ambiguous" => Some(PovmKind::Ambiguous),
            "unambiguous" => Some(PovmKind::Unambiguous),
            _ => None,
        }
    }
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    kind: PovmKind,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(kind: PovmKind, elements: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::WrongArity {
                expected: 1,
                found: 0,
            });
        };
        let dim = first.dim();
        for (index, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            check_psd_hermitian(e, tol).map_err(|reason| Error::BadPovm { index, reason })?;
        }
        let total = sum_matrices(dim, &elements);
        let defect = total.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > tol.recon {
            return Err(Error::BadPovm {
                index: elements.len() - 1,
                reason: format!("elements sum to identity only within {defect:e}"),
            });
        }
        Ok(Self { kind, elements })
    }

    pub fn kind(&self) -> PovmKind {
        self.kind
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// The outcome count this POVM needs for an ensemble of `m` states.
    pub fn expected_len(kind: PovmKind, m: usize) -> usize {
        match kind {
            PovmKind::Ambiguous => m,
            PovmKind::Unambiguous => m + 1,
        }
    }
}

/// The family `rho_i = alpha_i |0><0| + (1 - alpha_i) |i><i|` on `m + 1` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredEnsemble {
    alphas: Vec<f64>,
    priors: Vec<f64>,
}

impl StructuredEnsemble {
    pub fn new(alphas: Vec<f64>, priors: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::WrongArity {
                expected: 2,
                found: alphas.len(),
            });
        }
        if priors.len() != alphas.len() {
            return Err(Error::BadPrior {
                index: priors.len().min(alphas.len()),
                reason: format!("{} priors for {} alphas", priors.len(), alphas.len()),
            });
        }
        for (index, &a) in alphas.iter().enumerate() {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::BadState {
                    index,
                    reason: format!("alpha must lie in [0, 1], got {a}"),
                });
            }
        }
        check_priors(&priors, tol)?;
        Ok(Self { alphas, priors })
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `p_i alpha_i`, the weight each state puts on the shared `|0>` direction.
    pub fn shared_weights(&self) -> Vec<f64> {
        self.alphas
            .iter()
            .zip(&self.priors)
            .map(|(a, p)| a * p)
            .collect()
    }

    /// State `i` (0-based) as a matrix on `m + 1` dimensions.
    pub fn state_matrix(&self, i: usize) -> ComplexMatrix {
        let mut diag = vec![0.0; self.m() + 1];
        diag[0] = self.alphas[i];
        diag[i + 1] = 1.0 - self.alphas[i];
        ComplexMatrix::from_diag(&diag)
    }
}

/// Expands the structured family into an ordinary ensemble.
pub fn structured_to_ensemble(s: &StructuredEnsemble) -> Ensemble {
    Ensemble {
        states: (0..s.m())
            .map(|i| DensityMatrix(s.state_matrix(i)))
            .collect(),
        priors: s.priors.clone(),
    }
}

/// Convenience for building a pure state `|psi><psi|` from real amplitudes.
pub fn pure_state(amplitudes: &[f64]) -> ComplexMatrix {
    let v: Vec<Complex64> = amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    ComplexMatrix::projector(&v)
}
