use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::conditional::{ln_coefficient, ln_normalization_closed, truncation, TAIL_TARGET};
use super::FockVector;
use crate::error::{Error, Result};
use crate::specfun::{gauss_2f1, ln_factorial, ln_gamma};
use crate::C64;

fn check_positive_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "component alpha = {alpha} must lie in (0, 1); fold a sign into a phase-space rotation"
        )));
    }
    Ok(())
}

/// One of the two branches whose half-sum is the conditional state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentState {
    sign: i8,
    alpha: f64,
    m: usize,
    norm: f64,
    raw: Vec<f64>,
    coefficients: FockVector,
}

impl ComponentState {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// 𝒩_m^{(±)}.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Unnormalised c^{(±)}_{m,n}.
    pub fn unnormalized(&self) -> &[f64] {
        &self.raw
    }

    pub fn coefficients(&self) -> &FockVector {
        &self.coefficients
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.n_max()
    }
}

/// ℐ_m = (m!)²(−α)^m/(√π·2^m·Γ(m+3/2))·₂F₁((m+1)/2, (m+1)/2; m+3/2; 1−α²),
/// the overlap sum Σₙ (−1)^{n+m}|c^{(+)}_{m,n}|².
fn overlap_sum(alpha: f64, m: usize) -> Result<f64> {
    let a = alpha.abs();
    let p = (m as f64 + 1.0) / 2.0;
    let f = gauss_2f1(p, p, m as f64 + 1.5, 1.0 - a * a)?;
    let ln_mag = 2.0 * ln_factorial(m) + m as f64 * a.ln()
        - 0.5 * PI.ln()
        - m as f64 * 2f64.ln()
        - ln_gamma(m as f64 + 1.5);
    let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
    Ok(sign * ln_mag.exp() * f)
}

/// 𝒩_m^{(±)} = 2𝒩_m − ℐ_m; the same for both signs.
pub fn component_norm_closed(alpha: f64, m: usize) -> Result<f64> {
    if !(alpha.abs() > 0.0 && alpha.abs() < 1.0) {
        return Err(Error::domain(format!(
            "|alpha| = {} must lie in (0, 1)",
            alpha.abs()
        )));
    }
    let norm = ln_normalization_closed(alpha, m)?.exp();
    Ok(2.0 * norm - overlap_sum(alpha, m)?)
}

/// A = ½·√(𝒩_m^{(±)}/𝒩_m), the weight in |Ψ_m⟩ = A(|Ψ⁺⟩ + |Ψ⁻⟩).
pub fn superposition_constant(alpha: f64, m: usize) -> Result<f64> {
    let ratio = component_norm_closed(alpha, m)? / ln_normalization_closed(alpha, m)?.exp();
    Ok(0.5 * ratio.sqrt())
}

/// Cutoff at which both parity classes of a component have a dropped
/// probability below the conditional-state tail target; at least the conditional-state cutoff.
pub fn component_truncation(alpha: f64, m: usize) -> Result<usize> {
    check_positive_alpha(alpha)?;
    let ln_norm = component_norm_closed(alpha, m)?.ln();
    let mut n = truncation(alpha, m)?;
    loop {
        let bounded = [n - 1, n].iter().all(|&last| {
            let ln_p = 2.0 * ln_coefficient(alpha, m, last) - ln_norm;
            let step = alpha * alpha * ((last + m + 1) as f64).powi(2)
                / ((last + 1) as f64 * (last + 2) as f64);
            let r = step.max(alpha * alpha);
            r < 1.0 && ln_p + (r / (1.0 - r)).ln() < TAIL_TARGET.ln()
        });
        if bounded {
            return Ok(n);
        }
        n += 2;
    }
}

/// Component amplitudes c^{(±)}_{m,n} = (n+m)!/(Γ((n+m)/2+1)√n!)·(±√(α/2))^{n+m}.
pub fn component_state(sign: i8, alpha: f64, m: usize, n_max: usize) -> Result<ComponentState> {
    if sign != 1 && sign != -1 {
        return Err(Error::domain(format!(
            "component sign must be ±1, got {sign}"
        )));
    }
    check_positive_alpha(alpha)?;
    let norm = component_norm_closed(alpha, m)?;
    let raw: Vec<f64> = (0..=n_max)
        .map(|n| {
            let v = ln_coefficient(alpha, m, n).exp();
            if sign < 0 && (n + m) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let scale = norm.sqrt().recip();
    let coefficients = FockVector::new(raw.iter().map(|&c| C64::new(c * scale, 0.0)).collect());
    Ok(ComponentState {
        sign,
        alpha,
        m,
        norm,
        raw,
        coefficients,
    })
}
