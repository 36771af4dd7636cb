//! Functional calculus on Hermitian matrices.

use super::{hermitian_eig, ComplexMatrix, HermitianEigensystem, Tolerances};
use crate::error::{Error, Result};

/// `A_+`: keeps the spectral components with `lambda > tol.rank * max|lambda|`.
pub fn positive_part(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let es = hermitian_eig(a, tol)?;
    let cutoff = es.rank_cutoff(tol);
    Ok(es.map(|l| if l > cutoff { l } else { 0.0 }))
}

/// Trace norm of a Hermitian matrix, `sum |lambda_k|`.
pub fn trace_norm(a: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    let es = hermitian_eig(a, tol)?;
    Ok(es.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Operator norm of a Hermitian matrix, `max |lambda_k|`.
pub fn operator_norm(a: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(hermitian_eig(a, tol)?.spectral_radius())
}

fn psd_eig(a: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigensystem> {
    let es = hermitian_eig(a, tol)?;
    let min = es.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(es)
}

/// Principal square root of a PSD matrix.
///
/// Eigenvalues below `tol.psd` are set to zero first: the square root would
/// otherwise lift rounding noise of order `1e-17` to `1e-9`.
pub fn matrix_sqrt_psd(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let es = psd_eig(a, tol)?;
    Ok(es.map(|l| clamped_sqrt(l, tol)))
}

fn clamped_sqrt(l: f64, tol: &Tolerances) -> f64 {
    if l < tol.psd {
        0.0
    } else {
        l.sqrt()
    }
}

/// `F(rho, sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho))`.
///
/// Accepts any pair of PSD operators, not only unit-trace states.
pub fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    psd_eig(sigma, tol)?;
    let root = matrix_sqrt_psd(rho, tol)?;
    let inner = (&(&root * sigma) * &root).hermitian_part();
    let es = psd_eig(&inner, tol)?;
    Ok(es.eigenvalues.iter().map(|&l| clamped_sqrt(l, tol)).sum())
}

/// Inverse square root on the support of a PSD matrix, zero on its kernel.
pub fn pseudo_inverse_sqrt(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let es = psd_eig(a, tol)?;
    let cutoff = es.rank_cutoff(tol);
    if es.spectral_radius() == 0.0 || es.eigenvalues.iter().all(|&l| l <= cutoff) {
        return Err(Error::ZeroMatrix);
    }
    Ok(es.map(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Orthogonal projector onto the span of eigenvectors with `lambda > tol.rank * max|lambda|`.
///
/// The zero matrix maps to the zero projector.
pub fn support_projector(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let es = psd_eig(a, tol)?;
    let cutoff = es.rank_cutoff(tol);
    Ok(es.map(|l| if l > cutoff && l > 0.0 { 1.0 } else { 0.0 }))
}

/// Number of eigenvalues above the relative rank cutoff.
pub fn numerical_rank(a: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    let es = hermitian_eig(a, tol)?;
    let cutoff = es.rank_cutoff(tol);
    Ok(es.eigenvalues.iter().filter(|l| l.abs() > cutoff).count())
}
