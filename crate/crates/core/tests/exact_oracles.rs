use num_complex::Complex64;
use qdisc::bounds::all_bounds;
use qdisc::catalog::{ex1, ex1_uniform_povm, ex2, ex6_family};
use qdisc::ensemble::structured_to_ensemble;
use qdisc::exact::{certify_optimal, check_l4_attainability, solve_commuting, solve_structured, solve_two_state, Ratio};
use qdisc::random::{random_ensemble, sample_structured, Sampler};
use qdisc::{ComplexMatrix, Ensemble, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Commuting ensemble built from explicit eigenvalues in a random basis, so the
/// classical likelihoods are known without diagonalizing anything.
fn commuting_with_likelihoods(seed: u64, m: usize, n: usize) -> (Ensemble, Vec<Vec<f64>>) {
    let mut s = Sampler::new(seed);
    let u = s.unitary(n);
    let ud = u.adjoint();
    let mut diagonals = Vec::new();
    let mut states = Vec::new();
    for _ in 0..m {
        let mut d = s.simplex(n);
        // Zero some weights so ties and rank deficiency show up.
        if s.uniform() < 0.3 {
            d[0] = 0.0;
            let t: f64 = d.iter().sum();
            d.iter_mut().for_each(|x| *x /= t);
        }
        states.push((&(&u * &ComplexMatrix::from_diag(&d)) * &ud).hermitian_part());
        diagonals.push(d);
    }
    let priors = s.simplex(m);
    let e = Ensemble::new(states, priors.clone(), &tol()).unwrap();
    let likelihood = (0..m).map(|i| diagonals[i].iter().map(|a| priors[i] * a).collect()).collect();
    (e, likelihood)
}

/// Best success probability over all m^n deterministic decision rules.
fn brute_force_success(likelihood: &[Vec<f64>]) -> f64 {
    let m = likelihood.len();
    let n = likelihood[0].len();
    let mut best: f64 = 0.0;
    for code in 0..m.pow(n as u32) {
        let mut c = code;
        let mut total = 0.0;
        for x in 0..n {
            total += likelihood[c % m][x];
            c /= m;
        }
        best = best.max(total);
    }
    best
}

#[test]
fn commuting_solver_matches_enumerated_decision_rules() {
    for seed in 0..60 {
        let m = 2 + (seed as usize % 2);
        let n = 2 + (seed as usize % 3);
        let (e, likelihood) = commuting_with_likelihoods(seed, m, n);
        let oracle = 1.0 - brute_force_success(&likelihood);
        let r = solve_commuting(&e, &tol()).unwrap();
        assert!((r.qe - oracle).abs() < 1e-10, "seed {seed}: {} vs {oracle}", r.qe);
        assert!(r.certificate.passed);
        let report = all_bounds(&e, &tol()).unwrap();
        assert!(report.best() <= r.qe + 1e-9, "seed {seed}");
    }
}

#[test]
fn uniform_measurement_margin() {
    // R = avg(p_i rho_i) = diag(13/108, 1/18, 2/27, 1/12); the worst gap is
    // R - p_3 rho_3 on |3>: 1/12 - 1/4 = -1/6.
    let c = certify_optimal(&ex1(), &ex1_uniform_povm(), &tol()).unwrap();
    let r_expected = ComplexMatrix::from_diag(&[13.0 / 108.0, 1.0 / 18.0, 2.0 / 27.0, 1.0 / 12.0]);
    assert!(c.r_matrix.max_abs_diff(&r_expected) < 1e-15);
    let margins = [-1.0 / 9.0, -4.0 / 27.0, -1.0 / 6.0];
    for (got, want) in c.margins.iter().zip(margins) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    assert!((c.min_margin + 1.0 / 6.0).abs() < 1e-12);
    assert!(!c.passed);
    assert!((c.error_probability - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn ex2_attainability_regression() {
    // Positive parts are rank one, along directions at angles -pi/8 and 5pi/8
    // for k = 1; for k = 0 and k = 2 the two directions are pi/8 apart.
    let report = check_l4_attainability(&ex2(), &tol()).unwrap();
    let overlaps: Vec<f64> = report.per_k.iter().map(|k| k.max_overlap).collect();
    let wide = (std::f64::consts::PI / 8.0).cos();
    let expected = [wide, std::f64::consts::FRAC_1_SQRT_2, wide];
    for (got, want) in overlaps.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    let attains: Vec<bool> = report.per_k.iter().map(|k| k.attains_minimum).collect();
    assert_eq!(attains, [false, true, false]);
    assert!(!report.attained);
    assert!(report.povm.is_none());
}

#[test]
fn two_states_are_always_attained() {
    for seed in 0..30 {
        let e = random_ensemble(seed, 2, 3).unwrap();
        let report = check_l4_attainability(&e, &tol()).unwrap();
        assert!(report.attained, "seed {seed}");
        assert!(report.certificate.as_ref().unwrap().passed);
        let exact = solve_two_state(&e, &tol()).unwrap();
        assert!((exact.qe - report.l4).abs() < 1e-9);
    }
}

#[test]
fn structured_family_agrees_with_commuting_solver() {
    let mut s = Sampler::new(2024);
    for trial in 0..200 {
        let m = 2 + trial % 3;
        let st = sample_structured(&mut s, m).unwrap();
        let sol = solve_structured(&st, &tol()).unwrap();
        let w: Vec<f64> = st.alphas().iter().zip(st.priors()).map(|(a, p)| a * p).collect();
        let qu: f64 = w.iter().sum();
        let top = w.iter().copied().fold(0.0, f64::max);
        assert!((sol.qu - qu).abs() <= 1e-12);
        assert!((sol.qe - (qu - top)).abs() <= 1e-12);
        assert!(sol.certificate.passed);

        let e = structured_to_ensemble(&st);
        let classical = solve_commuting(&e, &tol()).unwrap();
        assert!((classical.qe - sol.qe).abs() <= 1e-9, "trial {trial}");

        let att = check_l4_attainability(&e, &tol()).unwrap();
        if att.attained {
            assert!((att.l4 - sol.qe).abs() <= 1e-9, "trial {trial}");
            assert!(att.certificate.unwrap().passed);
        }
        let report = all_bounds(&e, &tol()).unwrap();
        assert!(report.best() <= sol.qe + 1e-9);
    }
}

#[test]
fn ratio_family_closed_form() {
    for (a, eps) in [(0.1, 1e-2), (0.2, 1e-3), (0.3, 1e-7)] {
        let sol = solve_structured(&ex6_family(a, eps).unwrap(), &tol()).unwrap();
        let want = (a + 2.0 * eps) / (2.0 * eps);
        match sol.ratio {
            Ratio::Finite(r) => assert!((r - want).abs() <= 1e-9 * want),
            other => panic!("{other:?}"),
        }
        assert!(sol.twice_qe_holds);
    }
}

#[test]
fn complex_phases_do_not_change_commuting_answer() {
    let (e, likelihood) = commuting_with_likelihoods(77, 3, 4);
    let phase = ComplexMatrix::from_diag(&[1.0; 4]);
    let mut phased = phase.clone();
    phased[(1, 1)] = Complex64::from_polar(1.0, 0.7);
    phased[(3, 3)] = Complex64::from_polar(1.0, -2.1);
    let states = e
        .states()
        .iter()
        .map(|s| (&(&phased * s.matrix()) * &phased.adjoint()).hermitian_part())
        .collect();
    let rotated = Ensemble::new(states, e.priors().to_vec(), &tol()).unwrap();
    let oracle = 1.0 - brute_force_success(&likelihood);
    assert!((solve_commuting(&rotated, &tol()).unwrap().qe - oracle).abs() < 1e-10);
}
