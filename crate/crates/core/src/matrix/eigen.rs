use num_complex::Complex64;

use super::{ComplexMatrix, Tolerances};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// Threshold below which an eigenvalue counts as zero.
    pub fn rank_cutoff(&self, tol: &Tolerances) -> f64 {
        tol.rank * self.spectral_radius()
    }

    /// `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |r, c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(r, k)] * v[(c, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each step applies a 2x2 unitary rotation (a phase on column `q` followed by
/// a real Givens rotation) that annihilates the `(p, q)` entry. Sweeps run in
/// row-major pair order until the largest off-diagonal modulus drops to
/// `tol.eig * ||A||_F`.
pub fn hermitian_eig(a: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigensystem> {
    let defect = a.hermiticity_defect();
    if defect > tol.recon {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.dim();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.eig * m.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if m.max_off_diagonal() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && m.max_off_diagonal() > threshold {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Phase making the (p, q) entry real and positive.
    let phase = (apq / mag).conj();
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = [[c, s], [-s * phase, c * phase]] acting on columns p, q.
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = phase * (-s);
    let gqq = phase * c;

    let n = m.dim();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * gpp + mkq * gqp;
        m[(k, q)] = mkp * gpq + mkq * gqq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = gpp.conj() * mpk + gqp.conj() * mqk;
        m[(q, k)] = gpq.conj() * mpk + gqq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn assert_orthonormal(es: &HermitianEigensystem) {
        let v = &es.eigenvectors;
        let gram = &v.adjoint() * v;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(es.dim())) <= 1e-10);
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let es = hermitian_eig(&ComplexMatrix::from_diag(&[3.0, 1.0, 2.0]), &tol()).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_orthonormal(&es);
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let es = hermitian_eig(&x, &tol()).unwrap();
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(es.reconstruct().max_abs_diff(&x) < 1e-14);
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let y = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let es = hermitian_eig(&y, &tol()).unwrap();
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(es.reconstruct().max_abs_diff(&y) < 1e-14);
        assert_orthonormal(&es);
    }

    #[test]
    fn pure_state_difference_matches_closed_form() {
        // p1 |psi1><psi1| - p2 |psi2><psi2| with psi2 = cos(t)|0> + sin(t)|1>.
        // Oracle: 2x2 eigenvalues (tr/2) +- sqrt((a - d)^2 / 4 + b^2).
        let (p1, p2, theta) = (0.5_f64, 0.5_f64, std::f64::consts::FRAC_PI_4);
        let (cs, sn) = (theta.cos(), theta.sin());
        let (a, b, d) = (p1 - p2 * cs * cs, -p2 * cs * sn, -p2 * sn * sn);
        let mid = (a + d) / 2.0;
        let rad = (((a - d) / 2.0).powi(2) + b * b).sqrt();
        let oracle = [mid - rad, mid + rad];
        assert!((oracle[1] - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(mid.abs() < 1e-15);

        let m = ComplexMatrix::from_real_rows(&[&[a, b], &[b, d]]);
        let es = hermitian_eig(&m, &tol()).unwrap();
        for (got, want) in es.eigenvalues.iter().zip(oracle) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eig(&m, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn zero_matrix_and_one_by_one() {
        let es = hermitian_eig(&ComplexMatrix::zeros(3), &tol()).unwrap();
        assert_eq!(es.eigenvalues, vec![0.0; 3]);
        let es = hermitian_eig(&ComplexMatrix::from_diag(&[-2.5]), &tol()).unwrap();
        assert_eq!(es.eigenvalues, vec![-2.5]);
    }

    #[test]
    fn degenerate_spectrum() {
        // J - I for the all-ones 4x4 J: eigenvalues -1 (x3), 3.
        let m = ComplexMatrix::from_fn(4, |r, c| {
            Complex64::new(if r == c { 0.0 } else { 1.0 }, 0.0)
        });
        let es = hermitian_eig(&m, &tol()).unwrap();
        for l in &es.eigenvalues[..3] {
            assert!((l + 1.0).abs() < 1e-13);
        }
        assert!((es.eigenvalues[3] - 3.0).abs() < 1e-13);
        assert_orthonormal(&es);
        assert!(es.reconstruct().max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn deterministic() {
        let m = ComplexMatrix::from_fn(5, |r, c| {
            let x = (r * 7 + c * 3) as f64;
            let y = (c * 7 + r * 3) as f64;
            Complex64::new((x.sin() + y.sin()) / 2.0, if r == c { 0.0 } else { (x.cos() - y.cos()) / 2.0 })
        });
        let a = hermitian_eig(&m, &tol()).unwrap();
        let b = hermitian_eig(&m, &tol()).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }
}
