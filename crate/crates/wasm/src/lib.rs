//! Browser bindings: a Wigner grid, a quadrature curve and the detector
//! coincidence priors. Each export has a plain Rust twin so it can be tested
//! natively.

use heralded_cat::detection::{coincidence_prior, default_m_max, DetectorModel};
use heralded_cat::phasespace::{quadrature_closed, wigner_closed, EvalContext};
use heralded_cat::states::ConditionalState;
use wasm_bindgen::prelude::*;

fn axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    if n < 2 || !(hi > lo) {
        return Err(format!("axis needs hi > lo and at least 2 points, got [{lo}, {hi}] x {n}"));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn context(alpha: f64, m: usize) -> Result<EvalContext, String> {
    let state = ConditionalState::new(alpha, m).map_err(|e| e.to_string())?;
    EvalContext::new(&state).map_err(|e| e.to_string())
}

/// W(x, p) on the square [−half, half]², row-major in p (one row per p,
/// x increasing along a row) so it maps straight onto image rows.
pub fn wigner_square(alpha: f64, m: usize, half: f64, n: usize) -> Result<Vec<f64>, String> {
    let ctx = context(alpha, m)?;
    let xs = axis(-half, half, n)?;
    let mut out = Vec::with_capacity(n * n);
    for p in xs.iter().rev() {
        out.extend(xs.iter().map(|&x| wigner_closed(&ctx, x, *p)));
    }
    Ok(out)
}

/// p(x, φ) at n points across [x_min, x_max].
pub fn quadrature_samples(alpha: f64, m: usize, phi: f64, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let ctx = context(alpha, m)?;
    Ok(axis(x_min, x_max, n)?.into_iter().map(|x| quadrature_closed(&ctx, phi, x)).collect())
}

/// Probability of k = 0..=N coincidences.
pub fn priors(kappa: f64, t2: f64, diodes: usize, eta: f64) -> Result<Vec<f64>, String> {
    let det = DetectorModel::new(diodes, eta).map_err(|e| e.to_string())?;
    let m_max = default_m_max(kappa, t2, diodes).map_err(|e| e.to_string())?;
    (0..=diodes)
        .map(|k| coincidence_prior(&det, kappa, t2, k, m_max).map_err(|e| e.to_string()))
        .collect()
}

#[wasm_bindgen(js_name = wignerGrid)]
pub fn wigner_grid(alpha: f64, m: usize, half: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    wigner_square(alpha, m, half, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = quadratureCurve)]
pub fn quadrature_curve(alpha: f64, m: usize, phi: f64, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    quadrature_samples(alpha, m, phi, x_min, x_max, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = coincidencePriors)]
pub fn coincidence_priors(kappa: f64, t2: f64, diodes: usize, eta: f64) -> Result<Vec<f64>, JsValue> {
    priors(kappa, t2, diodes, eta).map_err(|e| JsValue::from_str(&e))
}
