//! Lower bounds on the minimum error probability `Q_E`.
//!
//! | bound | ingredient |
//! |-------|------------|
//! | `L0`  | largest priors vs. effective dimension |
//! | `L1`  | operator norms of `p_i rho_i` |
//! | `L2`  | pairwise trace distances |
//! | `L3`  | pairwise fidelities |
//! | `L4`  | positive parts of `p_j rho_j - p_k rho_k` |
//! | `L5`  | `Tr sqrt(sum p_i^2 rho_i^2)` |
//! | `L6`  | pretty-good-measurement overlaps of the eigen-decomposed ensemble |
//!
//! Values are reported unclamped; `L1` in particular can be negative.

use std::fmt;

use crate::ensemble::{effective_dimension, Ensemble};
use crate::error::{Error, Result};
use crate::matrix::{
    fidelity, hermitian_eig, matrix_sqrt_psd, operator_norm, positive_part, pseudo_inverse_sqrt,
    sum_matrices, trace_norm, ComplexMatrix, Tolerances,
};

/// Slack used for the report's self-consistency checks.
pub const CONSISTENCY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    L0,
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
}

impl Bound {
    pub const ALL: [Bound; 7] = [
        Bound::L0,
        Bound::L1,
        Bound::L2,
        Bound::L3,
        Bound::L4,
        Bound::L5,
        Bound::L6,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["L0", "L1", "L2", "L3", "L4", "L5", "L6"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `L4` together with the per-`k` success-probability caps it minimizes over.
#[derive(Debug, Clone, PartialEq)]
pub struct L4Detail {
    pub value: f64,
    /// Smallest index attaining the minimum.
    pub k_min: usize,
    /// `p_k + sum_{j != k} Tr(p_j rho_j - p_k rho_k)_+` for every `k`.
    pub success_caps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `L0..L6`, unclamped.
    pub values: [f64; 7],
    /// Present iff `m = 2`.
    pub helstrom: Option<f64>,
    pub effective_dim: usize,
    pub l4: L4Detail,
    /// Sum of the `min(d, m)` largest priors.
    pub l0_top_mass: f64,
}

impl BoundReport {
    pub fn get(&self, b: Bound) -> f64 {
        self.values[b.index()]
    }

    /// `max(L_i, 0)`: the usable value of each bound.
    pub fn clamped(&self) -> [f64; 7] {
        self.values.map(|v| v.max(0.0))
    }

    /// The bound values as `(bound, value)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Bound, f64)> + '_ {
        Bound::ALL.into_iter().map(|b| (b, self.get(b)))
    }

    /// Largest lower bound.
    pub fn best(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn require_pair(e: &Ensemble) -> Result<()> {
    if e.m() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: e.m(),
        });
    }
    Ok(())
}

/// `(1 - Tr|p2 rho2 - p1 rho1|) / 2` for two states.
pub fn helstrom(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    require_pair(e)?;
    let diff = &e.weighted(1) - &e.weighted(0);
    Ok((1.0 - trace_norm(&diff, tol)?) / 2.0)
}

fn sorted_priors_desc(e: &Ensemble) -> Vec<f64> {
    let mut p = e.priors().to_vec();
    p.sort_by(|a, b| b.total_cmp(a));
    p
}

/// `1 - (sum of the min(d, m) largest priors)`, `d` the effective dimension.
pub fn bound_l0(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let d = effective_dimension(e, tol)?;
    Ok(1.0 - top_mass(e, d))
}

fn top_mass(e: &Ensemble, d: usize) -> f64 {
    sorted_priors_desc(e).iter().take(d.min(e.m())).sum()
}

/// `1 - d max_i ||p_i rho_i||`.
pub fn bound_l1(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let d = effective_dimension(e, tol)?;
    let mut largest: f64 = 0.0;
    for i in 0..e.m() {
        largest = largest.max(operator_norm(&e.weighted(i), tol)?);
    }
    Ok(1.0 - d as f64 * largest)
}

fn pairwise_trace_norm_sum(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..e.m() {
        for j in (i + 1)..e.m() {
            total += trace_norm(&(&e.weighted(j) - &e.weighted(i)), tol)?;
        }
    }
    Ok(total)
}

/// `(1 - sum_{i<j} Tr|p_j rho_j - p_i rho_i| / (m - 1)) / 2`.
pub fn bound_l2(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let sum = pairwise_trace_norm_sum(e, tol)?;
    Ok(0.5 * (1.0 - sum / (e.m() - 1) as f64))
}

/// Symmetric matrix of pairwise fidelities `F(rho_i, rho_j)` (diagonal = 1).
pub fn pairwise_fidelities(e: &Ensemble, tol: &Tolerances) -> Result<Vec<Vec<f64>>> {
    let m = e.m();
    let mut f = vec![vec![1.0; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let v = fidelity(e.state(i), e.state(j), tol)?;
            f[i][j] = v;
            f[j][i] = v;
        }
    }
    Ok(f)
}

/// `sum_{i<j} p_i p_j F^2(rho_i, rho_j)`.
pub fn bound_l3(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let f = pairwise_fidelities(e, tol)?;
    Ok(l3_from_fidelities(e.priors(), &f))
}

fn l3_from_fidelities(p: &[f64], f: &[Vec<f64>]) -> f64 {
    let m = p.len();
    let mut total = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            total += p[i] * p[j] * f[i][j] * f[i][j];
        }
    }
    total
}

/// `1 - min_k (p_k + sum_{j != k} Tr(p_j rho_j - p_k rho_k)_+)`.
pub fn bound_l4(e: &Ensemble, tol: &Tolerances) -> Result<L4Detail> {
    let m = e.m();
    let weighted: Vec<ComplexMatrix> = (0..m).map(|i| e.weighted(i)).collect();
    let mut caps = Vec::with_capacity(m);
    for k in 0..m {
        let mut cap = e.priors()[k];
        for (j, wj) in weighted.iter().enumerate() {
            if j != k {
                cap += positive_part(&(wj - &weighted[k]), tol)?.trace().re;
            }
        }
        caps.push(cap);
    }
    let mut k_min = 0;
    for (k, &c) in caps.iter().enumerate() {
        if c < caps[k_min] {
            k_min = k;
        }
    }
    Ok(L4Detail {
        value: 1.0 - caps[k_min],
        k_min,
        success_caps: caps,
    })
}

/// `1 - Tr sqrt(sum_i p_i^2 rho_i^2)`.
pub fn bound_l5(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let squares: Vec<ComplexMatrix> = (0..e.m())
        .map(|i| {
            let w = e.weighted(i);
            (&w * &w).hermitian_part()
        })
        .collect();
    let total = sum_matrices(e.dim(), &squares);
    Ok(1.0 - matrix_sqrt_psd(&total, tol)?.trace().re)
}

/// `1 - (sum_{i,k} <psi'_ik| rho^{-1/2} |psi'_ik>^2)^{1/4}` with
/// `psi'_ik = sqrt(p_i lambda_ik) psi_ik` over the eigenpairs of each `rho_i`
/// above the rank cutoff and `rho = sum_i p_i rho_i`.
pub fn bound_l6(e: &Ensemble, tol: &Tolerances) -> Result<f64> {
    let inv_sqrt = pseudo_inverse_sqrt(&e.average_state(), tol)?;
    let mut total = 0.0;
    for i in 0..e.m() {
        let es = hermitian_eig(e.state(i), tol)?;
        let cutoff = es.rank_cutoff(tol);
        for (k, &lambda) in es.eigenvalues.iter().enumerate() {
            if lambda <= cutoff {
                continue;
            }
            let psi = es.vector(k);
            let overlap = e.priors()[i] * lambda * inv_sqrt.sandwich(&psi, &psi).re;
            total += overlap * overlap;
        }
    }
    Ok(1.0 - total.powf(0.25))
}

/// Every bound plus the Helstrom limit for pairs, with self-consistency checks.
///
/// Fails with [`Error::InternalInconsistency`] if a bound exceeds one, if
/// `L4 < L2`, or if `L4`, `L2` and the Helstrom limit disagree for `m = 2`.
pub fn all_bounds(e: &Ensemble, tol: &Tolerances) -> Result<BoundReport> {
    let d = effective_dimension(e, tol)?;
    let l4 = bound_l4(e, tol)?;
    let values = [
        bound_l0(e, tol)?,
        bound_l1(e, tol)?,
        bound_l2(e, tol)?,
        bound_l3(e, tol)?,
        l4.value,
        bound_l5(e, tol)?,
        bound_l6(e, tol)?,
    ];
    let helstrom = if e.m() == 2 {
        Some(helstrom(e, tol)?)
    } else {
        None
    };
    let report = BoundReport {
        values,
        helstrom,
        effective_dim: d,
        l4,
        l0_top_mass: top_mass(e, d),
    };
    check_report(&report, tol)?;
    Ok(report)
}

fn check_report(r: &BoundReport, tol: &Tolerances) -> Result<()> {
    for (b, v) in r.iter() {
        if v > 1.0 + tol.recon {
            return Err(Error::InternalInconsistency(format!("{b} = {v} exceeds 1")));
        }
    }
    let (l2, l4) = (r.get(Bound::L2), r.get(Bound::L4));
    if l4 < l2 - CONSISTENCY_SLACK {
        return Err(Error::InternalInconsistency(format!("L4 = {l4} < L2 = {l2}")));
    }
    if let Some(h) = r.helstrom {
        if (l4 - h).abs() > CONSISTENCY_SLACK || (l2 - h).abs() > CONSISTENCY_SLACK {
            return Err(Error::InternalInconsistency(format!(
                "two-state collapse failed: L2 = {l2}, L4 = {l4}, Helstrom = {h}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::pure_state;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn helstrom_identical_states() {
        let rho = &pure_state(&[0.6, 0.8]).scale(0.5) + &ComplexMatrix::from_diag(&[0.25, 0.25]);
        let e = Ensemble::new(vec![rho.clone(), rho], vec![0.3, 0.7], &tol()).unwrap();
        assert!((helstrom(&e, &tol()).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn helstrom_orthogonal_states() {
        let e = Ensemble::new(
            vec![pure_state(&[1.0, 0.0]), pure_state(&[0.0, 1.0])],
            vec![0.2, 0.8],
            &tol(),
        )
        .unwrap();
        assert!(helstrom(&e, &tol()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn helstrom_zero_plus() {
        // Oracle: eigenvalues of the 2x2 real symmetric p2 |+><+| - p1 |0><0|.
        let (a, b, d) = (0.25 - 0.5, 0.25, 0.25);
        let rad = (((a - d) / 2.0f64).powi(2) + b * b).sqrt();
        let mid = (a + d) / 2.0;
        let oracle = (1.0 - ((mid + rad).abs() + (mid - rad).abs())) / 2.0;
        assert!((oracle - (1.0 - std::f64::consts::FRAC_1_SQRT_2) / 2.0).abs() < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let e = Ensemble::new(
            vec![pure_state(&[1.0, 0.0]), pure_state(&[h, h])],
            vec![0.5, 0.5],
            &tol(),
        )
        .unwrap();
        assert!((helstrom(&e, &tol()).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn helstrom_needs_two_states() {
        let e = Ensemble::new(
            vec![pure_state(&[1.0, 0.0]); 3],
            vec![0.2, 0.3, 0.5],
            &tol(),
        )
        .unwrap();
        assert_eq!(
            helstrom(&e, &tol()),
            Err(Error::WrongArity {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn l0_vanishes_when_dimension_covers_all_states() {
        let e = Ensemble::new(
            vec![pure_state(&[1.0, 0.0, 0.0]), pure_state(&[0.0, 1.0, 0.0])],
            vec![0.4, 0.6],
            &tol(),
        )
        .unwrap();
        assert_eq!(bound_l0(&e, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn l3_vanishes_for_orthogonal_states() {
        let e = Ensemble::new(
            vec![
                pure_state(&[1.0, 0.0, 0.0]),
                pure_state(&[0.0, 1.0, 0.0]),
                pure_state(&[0.0, 0.0, 1.0]),
            ],
            vec![0.2, 0.3, 0.5],
            &tol(),
        )
        .unwrap();
        assert!(bound_l3(&e, &tol()).unwrap().abs() < 1e-15);
        let r = all_bounds(&e, &tol()).unwrap();
        assert!(r.get(Bound::L4).abs() < 1e-15);
    }

    #[test]
    fn l4_ties_pick_the_smallest_index() {
        let rho = ComplexMatrix::from_diag(&[0.5, 0.5]);
        let e = Ensemble::new(vec![rho.clone(), rho], vec![0.5, 0.5], &tol()).unwrap();
        let d = bound_l4(&e, &tol()).unwrap();
        assert_eq!(d.k_min, 0);
        assert!((d.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn clamped_values() {
        let e = Ensemble::new(
            vec![
                ComplexMatrix::from_diag(&[0.9, 0.1, 0.0, 0.0]),
                ComplexMatrix::from_diag(&[0.9, 0.0, 0.1, 0.0]),
                ComplexMatrix::from_diag(&[0.9, 0.0, 0.0, 0.1]),
            ],
            vec![0.1, 0.1, 0.8],
            &tol(),
        )
        .unwrap();
        let r = all_bounds(&e, &tol()).unwrap();
        assert!(r.get(Bound::L1) < 0.0);
        assert_eq!(r.clamped()[1], 0.0);
        assert_eq!(r.clamped()[4], r.get(Bound::L4));
    }
}
