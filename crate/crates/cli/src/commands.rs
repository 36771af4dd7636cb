use std::fmt::Write;
use std::path::Path;

use qdisc::bounds::all_bounds;
use qdisc::catalog::{evaluate, CatalogEntry, Expectation};
use qdisc::compare::{rank_bounds, run_sweep, SweepConfig, SweepKind};
use qdisc::exact::{
    certify_optimal, check_l4_attainability, solve_commuting, solve_structured, solve_two_state,
    AttainabilityReport, Certificate, ExactResult, Ratio,
};
use qdisc::io::{ensemble_to_string, matrix_value, parse_ensemble, parse_povm, povm_to_value};
use qdisc::json::{number, numbers};
use qdisc::random::{random_commuting_ensemble, random_ensemble};
use qdisc::{Bound, Error, StructuredEnsemble, Tolerances};
use serde_json::{json, Map, Value};

use crate::report::{real, CliError, Exit, Input, Outcome};

fn per_bound(values: &[f64; 7]) -> Value {
    let mut map = Map::new();
    for b in Bound::ALL {
        map.insert(b.name().into(), number(values[b.index()]));
    }
    Value::Object(map)
}

fn certificate_value(c: &Certificate) -> Value {
    json!({
        "passed": c.passed,
        "min_margin": number(c.min_margin),
        "hermiticity_defect": number(c.hermiticity_defect),
        "margins": numbers(&c.margins),
        "error_probability": number(c.error_probability),
        "r_matrix": matrix_value(&c.r_matrix),
    })
}

fn attainability_value(a: &AttainabilityReport) -> Value {
    let per_k: Vec<Value> = a
        .per_k
        .iter()
        .map(|k| {
            json!({
                "k": k.k,
                "max_overlap": number(k.max_overlap),
                "orthogonal": k.orthogonal,
                "attains_minimum": k.attains_minimum,
            })
        })
        .collect();
    json!({
        "attained": a.attained,
        "per_k": per_k,
        "povm": a.povm.as_ref().map(povm_to_value),
        "certificate": a.certificate.as_ref().map(certificate_value),
    })
}

pub fn bounds(path: &Path, tol: &Tolerances) -> Result<Outcome, CliError> {
    let input = Input::read(path)?;
    let e = parse_ensemble(&input.text, tol)?;
    let report = all_bounds(&e, tol)?;
    let ranking = rank_bounds(&report);
    let attainability = check_l4_attainability(&e, tol)?;

    let mut results = Map::new();
    results.insert("m".into(), json!(e.m()));
    results.insert("dim".into(), json!(e.dim()));
    results.insert("effective_dim".into(), json!(report.effective_dim));
    results.insert("bounds".into(), per_bound(&report.values));
    results.insert("clamped".into(), per_bound(&report.clamped()));
    if let Some(h) = report.helstrom {
        results.insert("helstrom".into(), number(h));
    }
    results.insert(
        "l4_detail".into(),
        json!({"k_min": report.l4.k_min, "success_caps": numbers(&report.l4.success_caps)}),
    );
    results.insert("l0_top_mass".into(), number(report.l0_top_mass));
    results.insert("ranking".into(), json!(ranking.to_string()));
    results.insert("attainability".into(), attainability_value(&attainability));

    let mut human = String::new();
    let _ = writeln!(
        human,
        "ensemble: m = {}, dim = {}, effective dim = {}",
        e.m(),
        e.dim(),
        report.effective_dim
    );
    for (b, v) in report.iter() {
        let _ = writeln!(human, "{:<9}{:>25}", b.name(), real(v));
    }
    if let Some(h) = report.helstrom {
        let _ = writeln!(human, "{:<9}{:>25}", "helstrom", real(h));
    }
    let _ = writeln!(human, "ranking: {ranking}");
    let _ = writeln!(
        human,
        "L4 attained: {} (minimizing k = {})",
        if attainability.attained { "yes" } else { "no" },
        report.l4.k_min
    );
    Ok(Outcome {
        inputs: vec![input],
        results: Value::Object(results),
        human,
        exit: Exit::Ok,
    })
}

fn exact_value(r: &ExactResult) -> Value {
    json!({
        "method": r.method.as_str(),
        "qe": number(r.qe),
        "optimal_povm": povm_to_value(&r.optimal_povm),
        "certificate": certificate_value(&r.certificate),
    })
}

pub fn exact(path: &Path, tol: &Tolerances) -> Result<Outcome, CliError> {
    let input = Input::read(path)?;
    let e = parse_ensemble(&input.text, tol)?;
    let solved = if e.m() == 2 {
        solve_two_state(&e, tol)
    } else {
        solve_commuting(&e, tol)
    };
    let r = match solved {
        Err(err @ Error::NotCommuting { .. }) => {
            return Err(CliError::new(
                Exit::Unsupported,
                format!(
                    "unsupported: {err}; exact minimum error for non-commuting ensembles of more \
                     than two states requires a general semidefinite program, which is out of scope"
                ),
            ))
        }
        other => other?,
    };
    let mut human = String::new();
    let _ = writeln!(human, "method: {}", r.method.as_str());
    let _ = writeln!(human, "Q_E = {}", real(r.qe));
    let _ = writeln!(
        human,
        "certificate: {} (min margin {}, hermiticity defect {})",
        if r.certificate.passed { "pass" } else { "fail" },
        real(r.certificate.min_margin),
        real(r.certificate.hermiticity_defect)
    );
    Ok(Outcome {
        inputs: vec![input],
        results: exact_value(&r),
        human,
        exit: Exit::Ok,
    })
}

pub fn certify(ensemble: &Path, povm: &Path, tol: &Tolerances) -> Result<Outcome, CliError> {
    let e_in = Input::read(ensemble)?;
    let p_in = Input::read(povm)?;
    let e = parse_ensemble(&e_in.text, tol)?;
    let p = parse_povm(&p_in.text, tol)?;
    let c = certify_optimal(&e, &p, tol)?;
    let mut human = String::new();
    let _ = writeln!(human, "verdict: {}", if c.passed { "pass" } else { "fail" });
    let _ = writeln!(human, "min margin: {}", real(c.min_margin));
    let _ = writeln!(human, "hermiticity defect: {}", real(c.hermiticity_defect));
    let _ = writeln!(human, "error probability: {}", real(c.error_probability));
    Ok(Outcome {
        inputs: vec![e_in, p_in],
        results: certificate_value(&c),
        human,
        exit: if c.passed { Exit::Ok } else { Exit::CheckFailed },
    })
}

/// Parses `0.5,1/3,0.25`.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let bad = || CliError::new(Exit::Validation, format!("error: `{item}` is not a number"));
            match item.split_once('/') {
                Some((a, b)) => {
                    let a: f64 = a.trim().parse().map_err(|_| bad())?;
                    let b: f64 = b.trim().parse().map_err(|_| bad())?;
                    Ok(a / b)
                }
                None => item.parse().map_err(|_| bad()),
            }
        })
        .collect()
}

pub fn structured(
    alphas: &str,
    priors: &str,
    ratio_threshold: Option<f64>,
    tol: &Tolerances,
) -> Result<Outcome, CliError> {
    let alphas = parse_reals(alphas)?;
    let priors = if priors.trim() == "uniform" {
        vec![1.0 / alphas.len() as f64; alphas.len()]
    } else {
        parse_reals(priors)?
    };
    let s = StructuredEnsemble::new(alphas, priors, tol)?;
    let sol = solve_structured(&s, tol)?;
    let ratio_kind = match sol.ratio {
        Ratio::Finite(_) => "finite",
        Ratio::Infinite => "infinite",
        Ratio::Undefined => "undefined",
    };
    let mut results = Map::new();
    results.insert("alphas".into(), numbers(s.alphas()));
    results.insert("priors".into(), numbers(s.priors()));
    results.insert("qe".into(), number(sol.qe));
    results.insert("qu".into(), number(sol.qu));
    results.insert("ratio".into(), number(sol.ratio.value()));
    results.insert("ratio_kind".into(), json!(ratio_kind));
    results.insert("twice_qe_holds".into(), json!(sol.twice_qe_holds));
    results.insert("degenerate_ratio".into(), json!(sol.degenerate_ratio));
    results.insert("dominant".into(), json!(sol.dominant));
    results.insert("ambiguous_povm".into(), povm_to_value(&sol.ambiguous_povm));
    results.insert("unambiguous_povm".into(), povm_to_value(&sol.unambiguous_povm));
    results.insert("certificate".into(), certificate_value(&sol.certificate));

    let mut human = String::new();
    let _ = writeln!(human, "Q_E = {}", real(sol.qe));
    let _ = writeln!(human, "Q_U = {}", real(sol.qu));
    let _ = writeln!(human, "Q_U / Q_E = {} ({ratio_kind})", real(sol.ratio.value()));
    let _ = writeln!(human, "Q_U >= 2 Q_E: {}", sol.twice_qe_holds);
    let mut exit = Exit::Ok;
    if let Some(t) = ratio_threshold {
        let exceeds = sol.ratio.exceeds(t);
        results.insert("ratio_threshold".into(), number(t));
        results.insert("exceeds_threshold".into(), json!(exceeds));
        let _ = writeln!(human, "ratio exceeds {}: {exceeds}", real(t));
        if !exceeds {
            exit = Exit::CheckFailed;
        }
    }
    Ok(Outcome {
        inputs: Vec::new(),
        results: Value::Object(results),
        human,
        exit,
    })
}

pub fn compare(cfg: &SweepConfig) -> Result<Outcome, CliError> {
    let s = run_sweep(cfg)?;
    let mut human = String::new();
    let _ = writeln!(
        human,
        "{} trials, kind {}, m = {}, dim = {}, seed {} (config {})",
        cfg.trials,
        cfg.kind.as_str(),
        cfg.m,
        cfg.dim,
        cfg.seed,
        &s.config_hash[..12]
    );
    let _ = writeln!(human, "{:<6}{:>8}{:>8}", "bound", "wins", "shared");
    for b in Bound::ALL {
        let _ = writeln!(human, "{:<6}{:>8}{:>8}", b.name(), s.wins[b.index()], s.shared_wins[b.index()]);
    }
    let _ = writeln!(human, "tied trials: {}", s.tied_trials);
    let _ = writeln!(human, "{:<26}{:>10}{:>12}{:>26}", "check", "evaluated", "violations", "worst margin");
    for (c, st) in &s.checks {
        let _ = writeln!(
            human,
            "{:<26}{:>10}{:>12}{:>26}",
            c.name(),
            st.evaluated,
            st.violations,
            real(st.worst_margin)
        );
    }
    let exit = if s.total_violations() == 0 { Exit::Ok } else { Exit::CheckFailed };
    Ok(Outcome {
        inputs: Vec::new(),
        results: s.to_value(),
        human,
        exit,
    })
}

fn entry_value(e: &CatalogEntry) -> Value {
    let mut map = Map::new();
    map.insert("instance".into(), json!(e.instance));
    map.insert("quantity".into(), json!(e.quantity));
    match &e.expectation {
        Expectation::Value { expected, actual, tolerance } => {
            map.insert("expected".into(), number(*expected));
            map.insert("actual".into(), number(*actual));
            map.insert("tolerance".into(), number(*tolerance));
        }
        Expectation::Ordering { expected, actual } => {
            map.insert("expected".into(), json!(expected));
            map.insert("actual".into(), json!(actual));
        }
        Expectation::Flag { expected, actual } => {
            map.insert("expected".into(), json!(expected));
            map.insert("actual".into(), json!(actual));
        }
    }
    map.insert("passed".into(), json!(e.passed()));
    Value::Object(map)
}

pub fn examples(tol: &Tolerances) -> Result<Outcome, CliError> {
    let entries = evaluate(tol)?;
    let failed = entries.iter().filter(|e| !e.passed()).count();
    let mut human = String::new();
    for e in &entries {
        let _ = writeln!(human, "{e}");
    }
    let _ = writeln!(human, "{} of {} entries passed", entries.len() - failed, entries.len());
    Ok(Outcome {
        inputs: Vec::new(),
        results: json!({
            "entries": entries.iter().map(entry_value).collect::<Vec<_>>(),
            "passed": entries.len() - failed,
            "failed": failed,
        }),
        human,
        exit: if failed == 0 { Exit::Ok } else { Exit::CheckFailed },
    })
}

/// Writes a random ensemble document to `output`, or returns it for stdout.
pub fn random(
    seed: u64,
    m: usize,
    dim: usize,
    kind: SweepKind,
    output: Option<&Path>,
    tol: &Tolerances,
) -> Result<(Outcome, Option<String>), CliError> {
    let e = match kind {
        SweepKind::General => random_ensemble(seed, m, dim)?,
        SweepKind::Commuting => random_commuting_ensemble(seed, m, dim)?,
        SweepKind::Equiprobable => random_ensemble(seed, m, dim)?.with_priors(vec![1.0 / m as f64; m], tol)?,
        SweepKind::Structured => {
            return Err(CliError::new(
                Exit::Validation,
                "error: use `structured` for the structured family",
            ))
        }
    };
    let text = ensemble_to_string(&e);
    let digest = {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(text.as_bytes()))
    };
    let results = json!({"seed": seed, "m": m, "dim": dim, "kind": kind.as_str(), "sha256": digest});
    match output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::new(Exit::Io, format!("i/o error: {}: {e}", path.display())))?;
            Ok((
                Outcome {
                    inputs: Vec::new(),
                    results,
                    human: format!("wrote {}\n", path.display()),
                    exit: Exit::Ok,
                },
                None,
            ))
        }
        None => Ok((
            Outcome {
                inputs: Vec::new(),
                results,
                human: String::new(),
                exit: Exit::Ok,
            },
            Some(text),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_accept_fractions() {
        let v = parse_reals("0.5, 1/3,2e-1").unwrap();
        assert_eq!(v, vec![0.5, 1.0 / 3.0, 0.2]);
        assert!(parse_reals("1/x").is_err());
        assert!(parse_reals("").is_err());
    }
}
