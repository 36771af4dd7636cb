//! Exact minimum-error solutions for the solvable cases, and the certificates
//! that make a claimed optimum checkable.
//!
//! A POVM `{E_i}` is optimal iff `R = sum_i p_i rho_i E_i` is Hermitian and
//! `R - p_j rho_j` is positive semidefinite for every `j`. [`certify_optimal`]
//! evaluates that condition numerically; every solver here runs it on its own
//! answer before returning.

use num_complex::Complex64;

use crate::bounds::{bound_l4, CONSISTENCY_SLACK};
use crate::ensemble::{structured_to_ensemble, Ensemble, Povm, PovmKind, StructuredEnsemble};
use crate::error::{Error, Result};
use crate::matrix::{
    hermitian_eig, operator_norm, positive_part, support_projector, sum_matrices, ComplexMatrix,
    Tolerances,
};

/// Two states are treated as commuting when `||[rho_i, rho_j]||_max` is below this.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-8;
/// Largest off-diagonal entry a state may keep in the shared eigenbasis.
pub const DIAGONAL_TOLERANCE: f64 = 1e-8;
/// Supports count as orthogonal when `||P_j P_j'|| <= ORTHOGONALITY_TOLERANCE`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;
/// A POVM is unambiguous when every `Tr(Pi_i rho_j)`, `i != j`, is at most this.
pub const UNAMBIGUOUS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactMethod {
    TwoStateHelstrom,
    CommutingClassical,
    StructuredFamily,
}

impl ExactMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ExactMethod::TwoStateHelstrom => "two_state_helstrom",
            ExactMethod::CommutingClassical => "commuting_classical",
            ExactMethod::StructuredFamily => "structured_family",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub qe: f64,
    pub optimal_povm: Povm,
    pub method: ExactMethod,
    pub certificate: Certificate,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    /// `R = sum_i p_i rho_i E_i`.
    pub r_matrix: ComplexMatrix,
    /// `max |R - R^dag|`.
    pub hermiticity_defect: f64,
    /// Smallest eigenvalue of `R - p_j rho_j` over all `j`.
    pub min_margin: f64,
    /// Smallest eigenvalue of `R - p_j rho_j`, per `j`.
    pub margins: Vec<f64>,
    /// `1 - sum_i p_i Tr(rho_i E_i)` for the candidate.
    pub error_probability: f64,
    pub passed: bool,
}

/// Error probability `1 - sum_i p_i Tr(rho_i E_i)` of an ambiguous measurement.
pub fn error_probability(e: &Ensemble, povm: &Povm) -> Result<f64> {
    check_ambiguous_arity(e, povm)?;
    let success: f64 = (0..e.m())
        .map(|i| e.priors()[i] * e.state(i).matmul(&povm.elements()[i]).trace().re)
        .sum();
    Ok(1.0 - success)
}

fn check_ambiguous_arity(e: &Ensemble, povm: &Povm) -> Result<()> {
    if povm.kind() != PovmKind::Ambiguous || povm.len() != e.m() {
        return Err(Error::WrongArity {
            expected: e.m(),
            found: povm.len(),
        });
    }
    if povm.dim() != e.dim() {
        return Err(Error::DimMismatch {
            expected: e.dim(),
            found: povm.dim(),
        });
    }
    Ok(())
}

/// Checks the optimality condition for `povm`.
///
/// A failing certificate is an ordinary result (`passed == false`); errors are
/// reserved for arity and dimension mismatches.
pub fn certify_optimal(e: &Ensemble, povm: &Povm, tol: &Tolerances) -> Result<Certificate> {
    check_ambiguous_arity(e, povm)?;
    let terms: Vec<ComplexMatrix> = (0..e.m())
        .map(|i| e.weighted(i).matmul(&povm.elements()[i]))
        .collect();
    let r = sum_matrices(e.dim(), &terms);
    let hermiticity_defect = r.hermiticity_defect();
    let r_herm = r.hermitian_part();
    let mut margins = Vec::with_capacity(e.m());
    for j in 0..e.m() {
        let gap = (&r_herm - &e.weighted(j)).hermitian_part();
        margins.push(hermitian_eig(&gap, tol)?.eigenvalues[0]);
    }
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let success: f64 = terms.iter().map(|t| t.trace().re).sum();
    Ok(Certificate {
        r_matrix: r,
        hermiticity_defect,
        min_margin,
        margins,
        error_probability: 1.0 - success,
        passed: hermiticity_defect <= tol.recon && min_margin >= -tol.psd,
    })
}

fn certified(
    e: &Ensemble,
    povm: Povm,
    method: ExactMethod,
    tol: &Tolerances,
) -> Result<ExactResult> {
    let certificate = certify_optimal(e, &povm, tol)?;
    if !certificate.passed {
        return Err(Error::CertificateFailed {
            hermiticity_defect: certificate.hermiticity_defect,
            min_margin: certificate.min_margin,
        });
    }
    Ok(ExactResult {
        qe: certificate.error_probability,
        optimal_povm: povm,
        method,
        certificate,
    })
}

/// Helstrom measurement: `E_2` projects onto the positive part of
/// `p2 rho2 - p1 rho1`, `E_1 = I - E_2`.
pub fn solve_two_state(e: &Ensemble, tol: &Tolerances) -> Result<ExactResult> {
    if e.m() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: e.m(),
        });
    }
    let diff = &e.weighted(1) - &e.weighted(0);
    let plus = support_projector(&positive_part(&diff, tol)?, tol)?;
    let rest = &ComplexMatrix::identity(e.dim()) - &plus;
    let povm = Povm::new(PovmKind::Ambiguous, vec![rest, plus], tol)?;
    certified(e, povm, ExactMethod::TwoStateHelstrom, tol)
}

/// Largest `||[rho_i, rho_j]||_max` over all pairs, with the offending pair.
pub fn max_commutator(e: &Ensemble) -> (usize, usize, f64) {
    let mut worst = (0, 0, 0.0);
    for i in 0..e.m() {
        for j in (i + 1)..e.m() {
            let c = e.state(i).commutator(e.state(j)).max_abs();
            if c > worst.2 {
                worst = (i, j, c);
            }
        }
    }
    worst
}

/// Classical maximum-likelihood solution for simultaneously diagonalizable states.
///
/// The shared basis comes from diagonalizing `sum_i c_i p_i rho_i` with
/// `c_i = 1 + i/(m+1)` (1-based `i`); each basis vector is assigned to the
/// state maximizing `p_i <x|rho_i|x>`, smallest index on ties.
pub fn solve_commuting(e: &Ensemble, tol: &Tolerances) -> Result<ExactResult> {
    let (i, j, defect) = max_commutator(e);
    if defect > COMMUTATOR_TOLERANCE {
        return Err(Error::NotCommuting { i, j, defect });
    }
    let m = e.m();
    let n = e.dim();
    let mix: Vec<ComplexMatrix> = (0..m)
        .map(|i| e.weighted(i).scale(1.0 + (i + 1) as f64 / (m + 1) as f64))
        .collect();
    let basis = hermitian_eig(&sum_matrices(n, &mix), tol)?.eigenvectors;
    let basis_adj = basis.adjoint();

    let mut likelihood = vec![vec![0.0; n]; m];
    for (i, row) in likelihood.iter_mut().enumerate() {
        let rotated = &(&basis_adj * &e.weighted(i)) * &basis;
        let off = rotated.max_off_diagonal();
        if off > DIAGONAL_TOLERANCE {
            return Err(Error::NotCommuting {
                i,
                j: i,
                defect: off,
            });
        }
        for (x, v) in row.iter_mut().enumerate() {
            *v = rotated[(x, x)].re;
        }
    }

    let mut elements = vec![ComplexMatrix::zeros(n); m];
    for x in 0..n {
        let mut best = 0;
        for i in 1..m {
            if likelihood[i][x] > likelihood[best][x] {
                best = i;
            }
        }
        let v: Vec<Complex64> = basis.column(x);
        elements[best] = &elements[best] + &ComplexMatrix::projector(&v);
    }
    let povm = Povm::new(PovmKind::Ambiguous, elements, tol)?;
    certified(e, povm, ExactMethod::CommutingClassical, tol)
}

/// Per-`k` data from the attainability check.
#[derive(Debug, Clone)]
pub struct AttainabilityEntry {
    pub k: usize,
    /// `max_{j != j'} ||P_j P_j'||` over support projectors of `(p_j rho_j - p_k rho_k)_+`.
    pub max_overlap: f64,
    pub orthogonal: bool,
    /// Whether `k` attains the minimum in `L4`.
    pub attains_minimum: bool,
}

#[derive(Debug, Clone)]
pub struct AttainabilityReport {
    pub per_k: Vec<AttainabilityEntry>,
    pub attained: bool,
    pub l4: f64,
    /// `E_j = P_j (j != k)`, `E_k = I - sum_j P_j` for the first attaining `k`.
    pub povm: Option<Povm>,
    pub certificate: Option<Certificate>,
}

/// Whether `Q_E = L4`: some `k` both attains the `L4` minimum and has
/// mutually orthogonal supports for `{(p_j rho_j - p_k rho_k)_+}_{j != k}`.
pub fn check_l4_attainability(e: &Ensemble, tol: &Tolerances) -> Result<AttainabilityReport> {
    let m = e.m();
    let n = e.dim();
    let l4 = bound_l4(e, tol)?;
    let best_cap = l4.success_caps[l4.k_min];
    let weighted: Vec<ComplexMatrix> = (0..m).map(|i| e.weighted(i)).collect();

    let mut per_k = Vec::with_capacity(m);
    let mut chosen: Option<(usize, Vec<ComplexMatrix>)> = None;
    for k in 0..m {
        let mut projectors = Vec::with_capacity(m - 1);
        for (j, wj) in weighted.iter().enumerate() {
            if j != k {
                projectors.push(support_projector(&positive_part(&(wj - &weighted[k]), tol)?, tol)?);
            }
        }
        let mut max_overlap: f64 = 0.0;
        for a in 0..projectors.len() {
            for b in (a + 1)..projectors.len() {
                // ||P_a P_b||^2 = ||P_b P_a P_b||
                let sandwich = (&(&projectors[b] * &projectors[a]) * &projectors[b]).hermitian_part();
                max_overlap = max_overlap.max(operator_norm(&sandwich, tol)?.max(0.0).sqrt());
            }
        }
        let orthogonal = max_overlap <= ORTHOGONALITY_TOLERANCE;
        let attains_minimum = (l4.success_caps[k] - best_cap).abs() <= CONSISTENCY_SLACK;
        if orthogonal && attains_minimum && chosen.is_none() {
            chosen = Some((k, projectors));
        }
        per_k.push(AttainabilityEntry {
            k,
            max_overlap,
            orthogonal,
            attains_minimum,
        });
    }

    let (povm, certificate) = match chosen {
        Some((k, projectors)) => {
            let total = sum_matrices(n, &projectors);
            let mut elements = Vec::with_capacity(m);
            let mut it = projectors.into_iter();
            for j in 0..m {
                if j == k {
                    elements.push(&ComplexMatrix::identity(n) - &total);
                } else {
                    elements.push(it.next().expect("one projector per j != k"));
                }
            }
            let povm = Povm::new(PovmKind::Ambiguous, elements, tol)?;
            let cert = certify_optimal(e, &povm, tol)?;
            (Some(povm), Some(cert))
        }
        None => (None, None),
    };
    Ok(AttainabilityReport {
        attained: povm.is_some(),
        per_k,
        l4: l4.value,
        povm,
        certificate,
    })
}

/// `Q_U / Q_E`, with explicit cases for a vanishing denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    /// `Q_E = 0 < Q_U`.
    Infinite,
    /// `Q_E = Q_U = 0`.
    Undefined,
}

impl Ratio {
    pub fn value(self) -> f64 {
        match self {
            Ratio::Finite(v) => v,
            Ratio::Infinite => f64::INFINITY,
            Ratio::Undefined => f64::NAN,
        }
    }

    pub fn exceeds(self, threshold: f64) -> bool {
        match self {
            Ratio::Finite(v) => v > threshold,
            Ratio::Infinite => true,
            Ratio::Undefined => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StructuredSolution {
    pub qe: f64,
    pub qu: f64,
    pub ratio: Ratio,
    /// `Q_U >= 2 Q_E`.
    pub twice_qe_holds: bool,
    /// Set when `Q_E = 0`, so the ratio carries no information.
    pub degenerate_ratio: bool,
    /// Index maximizing `p_i alpha_i` (smallest on ties).
    pub dominant: usize,
    pub ambiguous_povm: Povm,
    pub unambiguous_povm: Povm,
    pub certificate: Certificate,
}

/// Closed-form solution of the structured family.
///
/// `Q_U = sum_i p_i alpha_i` is the inconclusive probability of the measurement
/// `Pi_0 = |0><0|`, `Pi_i = |i><i|`. `Q_E = Q_U - max_i p_i alpha_i`, realized by
/// giving `|0><0|` to the state with the largest `p_i alpha_i`.
pub fn solve_structured(s: &StructuredEnsemble, tol: &Tolerances) -> Result<StructuredSolution> {
    let m = s.m();
    let n = m + 1;
    let w = s.shared_weights();
    let mut dominant = 0;
    for i in 1..m {
        if w[i] > w[dominant] {
            dominant = i;
        }
    }
    let qu: f64 = w.iter().sum();
    // Sum the non-dominant weights directly so tiny Q_E keeps its relative precision.
    let qe: f64 = w
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != dominant)
        .map(|(_, x)| x)
        .sum();

    let elements: Vec<ComplexMatrix> = (0..m)
        .map(|i| {
            let own = ComplexMatrix::basis_projector(n, i + 1);
            if i == dominant {
                &own + &ComplexMatrix::basis_projector(n, 0)
            } else {
                own
            }
        })
        .collect();
    let ambiguous_povm = Povm::new(PovmKind::Ambiguous, elements, tol)?;
    let unambiguous_povm = Povm::new(
        PovmKind::Unambiguous,
        (0..n).map(|i| ComplexMatrix::basis_projector(n, i)).collect(),
        tol,
    )?;

    let e = structured_to_ensemble(s);
    let certificate = certify_optimal(&e, &ambiguous_povm, tol)?;
    if !certificate.passed {
        return Err(Error::CertificateFailed {
            hermiticity_defect: certificate.hermiticity_defect,
            min_margin: certificate.min_margin,
        });
    }
    let failure = unambiguous_feasibility(&e, &unambiguous_povm)?;
    if (failure - qu).abs() > CONSISTENCY_SLACK {
        return Err(Error::InternalInconsistency(format!(
            "unambiguous failure probability {failure} differs from {qu}"
        )));
    }

    let ratio = if qe > 0.0 {
        Ratio::Finite(qu / qe)
    } else if qu > 0.0 {
        Ratio::Infinite
    } else {
        Ratio::Undefined
    };
    Ok(StructuredSolution {
        qe,
        qu,
        ratio,
        twice_qe_holds: qu >= 2.0 * qe,
        degenerate_ratio: qe == 0.0,
        dominant,
        ambiguous_povm,
        unambiguous_povm,
        certificate,
    })
}

/// Failure probability `sum_i p_i Tr(rho_i Pi_0)` of an unambiguous measurement,
/// after checking that no conclusive outcome ever misidentifies a state.
pub fn unambiguous_feasibility(e: &Ensemble, povm: &Povm) -> Result<f64> {
    if povm.kind() != PovmKind::Unambiguous || povm.len() != e.m() + 1 {
        return Err(Error::WrongArity {
            expected: e.m() + 1,
            found: povm.len(),
        });
    }
    if povm.dim() != e.dim() {
        return Err(Error::DimMismatch {
            expected: e.dim(),
            found: povm.dim(),
        });
    }
    let mut worst = (0, 0, f64::NEG_INFINITY);
    for i in 1..=e.m() {
        for j in 0..e.m() {
            if i == j + 1 {
                continue;
            }
            let v = povm.elements()[i].matmul(e.state(j)).trace().re;
            if v > worst.2 {
                worst = (i, j + 1, v);
            }
        }
    }
    if worst.2 > UNAMBIGUOUS_TOLERANCE {
        return Err(Error::NotUnambiguous {
            i: worst.0,
            j: worst.1,
            value: worst.2,
        });
    }
    Ok((0..e.m())
        .map(|i| e.priors()[i] * e.state(i).matmul(&povm.elements()[0]).trace().re)
        .sum())
}
