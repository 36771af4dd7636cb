//! Browser bindings for the static demo in `www/`. Every export returns a JSON
//! string; the pure functions underneath are tested natively.

use qdisc::ensemble::{pure_state, structured_to_ensemble};
use qdisc::exact::solve_structured;
use qdisc::json::{number, numbers, render};
use qdisc::{all_bounds, Bound, BoundReport, Ensemble, StructuredEnsemble, Tolerances};
use serde_json::{json, Map, Value};
use wasm_bindgen::prelude::*;

fn bounds_value(r: &BoundReport) -> Value {
    let mut map = Map::new();
    for (b, v) in r.iter() {
        map.insert(b.name().into(), number(v));
    }
    Value::Object(map)
}

/// Bounds and the closed-form solution for the structured family.
pub fn structured_report(alphas: &[f64], priors: &[f64]) -> qdisc::Result<Value> {
    let tol = Tolerances::default();
    let s = StructuredEnsemble::new(alphas.to_vec(), priors.to_vec(), &tol)?;
    let sol = solve_structured(&s, &tol)?;
    let report = all_bounds(&structured_to_ensemble(&s), &tol)?;
    Ok(json!({
        "qe": number(sol.qe),
        "qu": number(sol.qu),
        "ratio": number(sol.ratio.value()),
        "twice_qe_holds": sol.twice_qe_holds,
        "bounds": bounds_value(&report),
        "best_bound": number(report.best()),
    }))
}

/// `Q_U / Q_E` for equal priors and `p_i a_i = (a, eps, eps)`, with `eps`
/// log-spaced from `10^-min_exp` down to `10^-max_exp`.
pub fn ratio_curve(a: f64, min_exp: f64, max_exp: f64, points: usize) -> qdisc::Result<Value> {
    let tol = Tolerances::default();
    let points = points.max(2);
    let mut eps = Vec::with_capacity(points);
    let mut ratio = Vec::with_capacity(points);
    for k in 0..points {
        let e = 10f64.powf(-(min_exp + (max_exp - min_exp) * k as f64 / (points - 1) as f64));
        let s = StructuredEnsemble::new(vec![3.0 * a, 3.0 * e, 3.0 * e], vec![1.0 / 3.0; 3], &tol)?;
        eps.push(e);
        ratio.push(solve_structured(&s, &tol)?.ratio.value());
    }
    Ok(json!({"eps": numbers(&eps), "ratio": numbers(&ratio)}))
}

/// All bounds for `|0>` and `cos t |0> + sin t |1>` with priors `(p, 1 - p)`,
/// `t` evenly spaced over `[0, pi/2]`.
pub fn pure_pair_curve(p: f64, points: usize) -> qdisc::Result<Value> {
    let tol = Tolerances::default();
    let points = points.max(2);
    let mut theta = Vec::with_capacity(points);
    let mut series: Vec<Vec<f64>> = (0..7).map(|_| Vec::with_capacity(points)).collect();
    let mut helstrom = Vec::with_capacity(points);
    for k in 0..points {
        let t = std::f64::consts::FRAC_PI_2 * k as f64 / (points - 1) as f64;
        let e = Ensemble::new(
            vec![pure_state(&[1.0, 0.0]), pure_state(&[t.cos(), t.sin()])],
            vec![p, 1.0 - p],
            &tol,
        )?;
        let r = all_bounds(&e, &tol)?;
        theta.push(t);
        for b in Bound::ALL {
            series[b.index()].push(r.get(b));
        }
        helstrom.push(r.helstrom.unwrap_or(f64::NAN));
    }
    let mut bounds = Map::new();
    for b in Bound::ALL {
        bounds.insert(b.name().into(), numbers(&series[b.index()]));
    }
    Ok(json!({"theta": numbers(&theta), "bounds": bounds, "helstrom": numbers(&helstrom)}))
}

fn to_js(r: qdisc::Result<Value>) -> Result<String, JsValue> {
    r.map(|v| render(&v)).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = structuredReport)]
pub fn structured_report_js(alphas: Vec<f64>, priors: Vec<f64>) -> Result<String, JsValue> {
    to_js(structured_report(&alphas, &priors))
}

#[wasm_bindgen(js_name = ratioCurve)]
pub fn ratio_curve_js(a: f64, min_exp: f64, max_exp: f64, points: usize) -> Result<String, JsValue> {
    to_js(ratio_curve(a, min_exp, max_exp, points))
}

#[wasm_bindgen(js_name = purePairCurve)]
pub fn pure_pair_curve_js(p: f64, points: usize) -> Result<String, JsValue> {
    to_js(pure_pair_curve(p, points))
}
