use num_complex::Complex64;
use proptest::prelude::*;

use qdisc::bounds::{all_bounds, pairwise_fidelities, Bound};
use qdisc::ensemble::structured_to_ensemble;
use qdisc::io::{ensemble_to_string, parse_ensemble};
use qdisc::matrix::{
    fidelity, hermitian_eig, operator_norm, positive_part, support_projector, trace_norm,
};
use qdisc::random::{random_ensemble, sample_structured, Sampler};
use qdisc::{ComplexMatrix, StructuredEnsemble, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Hermitian matrix from `n^2` raw reals: the upper triangle takes
/// real/imaginary parts from consecutive entries.
fn hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=8).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |raw| {
            ComplexMatrix::from_fn(n, |r, c| {
                let (i, j) = if r <= c { (r, c) } else { (c, r) };
                let k = 2 * (i * n + j);
                let z = if i == j {
                    Complex64::new(raw[k], 0.0)
                } else {
                    Complex64::new(raw[k], raw[k + 1])
                };
                if r <= c {
                    z
                } else {
                    z.conj()
                }
            })
        })
    })
}

/// PSD matrix of the given rank with trace `trace`.
fn psd_with_rank(s: &mut Sampler, n: usize, rank: usize, trace: f64) -> ComplexMatrix {
    let g = s.ginibre(n);
    let g = ComplexMatrix::from_fn(n, |r, c| if c < rank { g[(r, c)] } else { Complex64::new(0.0, 0.0) });
    let w = (&g * &g.adjoint()).hermitian_part();
    let t = w.trace().re;
    w.scale(trace / t)
}

fn state_pair() -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (any::<u64>(), 2usize..=5).prop_flat_map(|(seed, n)| {
        (Just(seed), Just(n), 1..=n, 1..=n).prop_map(|(seed, n, r1, r2)| {
            let mut s = Sampler::new(seed);
            (psd_with_rank(&mut s, n, r1, 1.0), psd_with_rank(&mut s, n, r2, 1.0))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigen_reconstruction(a in hermitian()) {
        let es = hermitian_eig(&a, &tol()).unwrap();
        prop_assert!(es.reconstruct().max_abs_diff(&a) <= 1e-10);
        let gram = &es.eigenvectors.adjoint() * &es.eigenvectors;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(a.dim())) <= 1e-10);
        prop_assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn positive_part_decomposition(a in hermitian()) {
        let plus = positive_part(&a, &tol()).unwrap();
        let minus = positive_part(&(-&a), &tol()).unwrap();
        prop_assert!((&plus - &minus).max_abs_diff(&a) <= 1e-10);
        let tn = trace_norm(&a, &tol()).unwrap();
        prop_assert!((plus.trace().re - (tn + a.trace().re) / 2.0).abs() <= 1e-10);
    }

    #[test]
    fn norm_relations(a in hermitian()) {
        let op = operator_norm(&a, &tol()).unwrap();
        let tn = trace_norm(&a, &tol()).unwrap();
        prop_assert!(op <= tn + 1e-12);
        prop_assert!(tn <= a.dim() as f64 * op + 1e-12);
    }

    #[test]
    fn fidelity_trace_distance_bounds((rho, sigma) in state_pair()) {
        let f = fidelity(&rho, &sigma, &tol()).unwrap();
        let d = trace_norm(&(&rho - &sigma), &tol()).unwrap();
        prop_assert!(2.0 * (1.0 - f) <= d + 1e-9);
        prop_assert!(d <= 2.0 * (1.0 - f * f).max(0.0).sqrt() + 1e-9);
    }

    #[test]
    fn subnormalized_trace_distance_bounds(seed in any::<u64>(), n in 2usize..=5, t1 in 0.05f64..1.0, t2 in 0.05f64..1.0) {
        let mut s = Sampler::new(seed);
        let rank = 1 + (seed as usize % n);
        let rho = psd_with_rank(&mut s, n, rank, t1);
        let sigma = psd_with_rank(&mut s, n, n, t2);
        let f = fidelity(&rho, &sigma, &tol()).unwrap();
        let d = trace_norm(&(&rho - &sigma), &tol()).unwrap();
        prop_assert!(t1 + t2 - 2.0 * f <= d + 1e-9);
        prop_assert!(d <= t1 + t2 + 1e-9);
    }

    #[test]
    fn orthogonal_supports_saturate_trace_distance(seed in any::<u64>(), n in 2usize..=6, split in 1usize..6, t1 in 0.05f64..1.0, t2 in 0.05f64..1.0) {
        let split = split.min(n - 1);
        let mut s = Sampler::new(seed);
        let u = s.unitary(n);
        let block = |lo: usize, hi: usize, t: f64, s: &mut Sampler| {
            let w = s.simplex(hi - lo);
            let mut d = vec![0.0; n];
            for (k, x) in w.into_iter().enumerate() {
                d[lo + k] = t * x;
            }
            (&(&u * &ComplexMatrix::from_diag(&d)) * &u.adjoint()).hermitian_part()
        };
        let rho = block(0, split, t1, &mut s);
        let sigma = block(split, n, t2, &mut s);
        let d = trace_norm(&(&rho - &sigma), &tol()).unwrap();
        prop_assert!((d - (t1 + t2)).abs() <= 1e-9);
        prop_assert!(fidelity(&rho, &sigma, &tol()).unwrap() <= 1e-6);
    }

    #[test]
    fn measurement_success_capped_by_positive_part(seed in any::<u64>(), n in 2usize..=5) {
        let mut s = Sampler::new(seed);
        let (t1, t2) = (s.uniform() + 0.1, s.uniform() + 0.1);
        let rho = psd_with_rank(&mut s, n, n, t1);
        let sigma = psd_with_rank(&mut s, n, 1 + seed as usize % n, t2);
        let u = s.unitary(n);
        let weights: Vec<f64> = (0..n).map(|_| s.uniform()).collect();
        let e = (&(&u * &ComplexMatrix::from_diag(&weights)) * &u.adjoint()).hermitian_part();
        let diff = &rho - &sigma;
        let plus = positive_part(&diff, &tol()).unwrap();
        let cap = plus.trace().re;
        prop_assert!(e.matmul(&diff).trace().re <= cap + 1e-9);
        let projector = support_projector(&plus, &tol()).unwrap();
        prop_assert!((projector.matmul(&diff).trace().re - cap).abs() <= 1e-9);
    }

    #[test]
    fn bound_report_invariants(seed in any::<u64>(), m in 2usize..=4, n in 2usize..=4) {
        let e = random_ensemble(seed, m, n).unwrap();
        let r = all_bounds(&e, &tol()).unwrap();
        for (_, v) in r.iter() {
            prop_assert!(v <= 1.0 + 1e-9);
        }
        prop_assert!(r.get(Bound::L4) >= r.get(Bound::L2) - 1e-9);
        prop_assert!(r.get(Bound::L2) >= r.get(Bound::L3) / (m - 1) as f64 - 1e-9);
        prop_assert!(r.l4.success_caps[r.l4.k_min] <= 1.0 + 1e-9);
        prop_assert!(r.l0_top_mass <= 1.0 + 1e-12);
        if let Some(h) = r.helstrom {
            prop_assert!((h - r.get(Bound::L4)).abs() <= 1e-9);
            prop_assert!(h >= r.get(Bound::L3) - 1e-9);
        }
        let f = pairwise_fidelities(&e, &tol()).unwrap();
        for i in 0..m {
            for j in 0..m {
                prop_assert!((f[i][j] - f[j][i]).abs() <= 1e-12);
                prop_assert!(f[i][j] <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn ensemble_file_round_trip(seed in any::<u64>(), m in 2usize..=4, n in 1usize..=4) {
        let n = n.max(2);
        let e = random_ensemble(seed, m, n).unwrap();
        let text = ensemble_to_string(&e);
        let back = parse_ensemble(&text, &tol()).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(ensemble_to_string(&back), text);
    }

    #[test]
    fn structured_states_share_only_the_zero_direction(seed in any::<u64>(), m in 2usize..=6) {
        let s: StructuredEnsemble = sample_structured(&mut Sampler::new(seed), m).unwrap();
        let e = structured_to_ensemble(&s);
        for j in 0..m {
            for i in 1..=m {
                if i != j + 1 {
                    prop_assert_eq!(e.state(j)[(i, i)].norm(), 0.0);
                }
            }
        }
    }
}
