//! Seeded random instances.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, which is portable across platforms.
//! Distributions are fixed here rather than borrowed from `rand_distr` so the
//! streams stay stable:
//!
//! - uniform `(0, 1]`: `1 - u` for `u` from `Rng::gen::<f64>()` (53-bit);
//! - standard normal: Box–Muller, `sqrt(-2 ln u1) * (cos, sin)(2 pi u2)`;
//! - standard complex normal: one Box–Muller pair scaled by `1/sqrt(2)`;
//! - uniform point on the simplex: normalized `-ln u` exponentials;
//! - states: Ginibre `G G^dag / Tr(G G^dag)` with complex normal `G`;
//! - commuting states: `U diag(q) U^dag` for a simplex point `q` and a unitary
//!   `U` from Gram–Schmidt on a complex normal matrix.
//!
//! Per-trial generators use the seed `seed ^ trial_index`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{Ensemble, StructuredEnsemble};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerances};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Generator for trial `index` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        Self::new(trial_seed(seed, index))
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.rng.gen::<f64>()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        (r * angle.cos(), r * angle.sin())
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let (a, b) = self.normal_pair();
        Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -self.uniform_open0().ln()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }

    pub fn ginibre(&mut self, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| self.complex_normal())
    }

    /// Random mixed state from the Ginibre ensemble.
    pub fn density_matrix(&mut self, dim: usize) -> ComplexMatrix {
        let g = self.ginibre(dim);
        let w = (&g * &g.adjoint()).hermitian_part();
        let tr = w.trace().re;
        w.scale(1.0 / tr)
    }

    /// Random unitary: orthonormalized columns of a complex normal matrix.
    pub fn unitary(&mut self, dim: usize) -> ComplexMatrix {
        let g = self.ginibre(dim);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for c in 0..dim {
            let mut v = g.column(c);
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for q in &cols {
                    let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= overlap * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        ComplexMatrix::from_fn(dim, |r, c| cols[c][r])
    }
}

pub fn trial_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

fn check_shape(m: usize, dim: usize) -> Result<()> {
    if m < 2 || dim < 2 {
        return Err(Error::InvalidConfig(format!(
            "random ensembles need m >= 2 and dim >= 2, got m = {m}, dim = {dim}"
        )));
    }
    Ok(())
}

/// `m` Ginibre states of dimension `dim` with simplex-uniform priors.
pub fn random_ensemble(seed: u64, m: usize, dim: usize) -> Result<Ensemble> {
    check_shape(m, dim)?;
    sample_ensemble(&mut Sampler::new(seed), m, dim)
}

pub fn sample_ensemble(s: &mut Sampler, m: usize, dim: usize) -> Result<Ensemble> {
    check_shape(m, dim)?;
    let states = (0..m).map(|_| s.density_matrix(dim)).collect();
    let priors = s.simplex(m);
    Ensemble::new(states, priors, &Tolerances::default())
}

/// `m` states diagonal in one shared random basis.
pub fn random_commuting_ensemble(seed: u64, m: usize, dim: usize) -> Result<Ensemble> {
    check_shape(m, dim)?;
    sample_commuting_ensemble(&mut Sampler::new(seed), m, dim)
}

pub fn sample_commuting_ensemble(s: &mut Sampler, m: usize, dim: usize) -> Result<Ensemble> {
    check_shape(m, dim)?;
    let u = s.unitary(dim);
    let ud = u.adjoint();
    let states = (0..m)
        .map(|_| {
            let d = ComplexMatrix::from_diag(&s.simplex(dim));
            (&(&u * &d) * &ud).hermitian_part()
        })
        .collect();
    let priors = s.simplex(m);
    Ensemble::new(states, priors, &Tolerances::default())
}

/// Structured family with uniform `alpha_i` in `[0, 1)` and simplex priors.
pub fn sample_structured(s: &mut Sampler, m: usize) -> Result<StructuredEnsemble> {
    if m < 2 {
        return Err(Error::InvalidConfig(format!("structured family needs m >= 2, got {m}")));
    }
    let alphas = (0..m).map(|_| s.uniform()).collect();
    let priors = s.simplex(m);
    StructuredEnsemble::new(alphas, priors, &Tolerances::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_eig;

    #[test]
    fn same_seed_same_ensemble() {
        let a = random_ensemble(7, 3, 3).unwrap();
        let b = random_ensemble(7, 3, 3).unwrap();
        assert_eq!(a, b);
        let c = random_ensemble(8, 3, 3).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn outputs_are_valid_states() {
        let tol = Tolerances::default();
        for seed in 0..20 {
            let e = random_ensemble(seed, 4, 3).unwrap();
            for s in e.states() {
                let es = hermitian_eig(s.matrix(), &tol).unwrap();
                assert!(es.eigenvalues[0] >= -tol.psd);
            }
            let revalidated =
                Ensemble::new(e.states().iter().map(|s| s.matrix().clone()).collect(), e.priors().to_vec(), &tol);
            assert!(revalidated.is_ok());
        }
    }

    #[test]
    fn commuting_states_commute() {
        for seed in 0..20 {
            let e = random_commuting_ensemble(seed, 3, 4).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert!(e.state(i).commutator(e.state(j)).max_abs() <= 1e-10);
                }
            }
        }
        assert_eq!(
            random_commuting_ensemble(5, 2, 2).unwrap(),
            random_commuting_ensemble(5, 2, 2).unwrap()
        );
    }

    #[test]
    fn unitary_is_unitary() {
        let u = Sampler::new(3).unitary(5);
        let gram = &u.adjoint() * &u;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-13);
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(random_ensemble(0, 1, 3).is_err());
        assert!(random_commuting_ensemble(0, 3, 1).is_err());
    }

    #[test]
    fn box_muller_moments() {
        let mut s = Sampler::new(11);
        let n = 20_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let (a, b) = s.normal_pair();
            sum += a + b;
            sq += a * a + b * b;
        }
        let mean = sum / (2.0 * n as f64);
        let var = sq / (2.0 * n as f64);
        assert!(mean.abs() < 0.03, "{mean}");
        assert!((var - 1.0).abs() < 0.03, "{var}");
    }
}
