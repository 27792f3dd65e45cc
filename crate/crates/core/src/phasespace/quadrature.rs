use std::f64::consts::PI;

use super::EvalContext;
use crate::error::Result;
use crate::specfun::hermite_complex;
use crate::states::{ConditionalState, FockVector};
use crate::C64;

/// Oscillator eigenfunctions ψₙ(x) = π^{−1/4}e^{−x²/2}Hₙ(x)/√(2ⁿn!) for
/// n = 0..=n_max, by the normalised three-term recurrence.
pub fn hermite_functions(x: f64, n_max: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(n_max + 1);
    psi.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n_max >= 1 {
        psi.push(2f64.sqrt() * x * psi[0]);
    }
    for n in 1..n_max {
        let next = (2.0 / (n + 1) as f64).sqrt() * x * psi[n]
            - (n as f64 / (n + 1) as f64).sqrt() * psi[n - 1];
        psi.push(next);
    }
    psi
}

/// |⟨x, φ|ψ⟩|² with ⟨x, φ|n⟩ = e^{−inφ}ψₙ(x).
pub fn quadrature_oracle(state: &FockVector, phi: f64, x: f64) -> f64 {
    let psi = hermite_functions(x, state.n_max());
    let mut sum = C64::new(0.0, 0.0);
    for (n, (&c, &h)) in state.amplitudes().iter().zip(&psi).enumerate() {
        if c != C64::new(0.0, 0.0) {
            sum += c * C64::from_polar(h, -(n as f64) * phi);
        }
    }
    sum.norm_sqr()
}

/// p(x, φ|m) = |α|^m/(𝒩_m√(πΔ^{m+1})2^m)·e^{−(1−α²)x²/Δ}·|H_m(√((αe^{2iφ}−α²)/Δ)·x)|².
pub fn quadrature_closed(ctx: &EvalContext, phi: f64, x: f64) -> f64 {
    let a = ctx.alpha;
    let m = ctx.m;
    let phi = ctx.quadrature_phase(phi);
    let delta = ctx.delta(phi);
    let ln_alpha_m = if m == 0 { 0.0 } else { m as f64 * a.ln() };
    let ln_pref = ln_alpha_m
        - ctx.ln_norm
        - 0.5 * PI.ln()
        - 0.5 * (m + 1) as f64 * delta.ln()
        - m as f64 * 2f64.ln();
    let arg = ((C64::from_polar(a, 2.0 * phi) - a * a) / delta).sqrt() * x;
    let h = hermite_complex(m, arg).norm_sqr();
    (ln_pref - (1.0 - a * a) * x * x / delta).exp() * h
}

/// Closed-form quadrature distribution of a conditional state.
pub fn quadrature_distribution(state: &ConditionalState, phi: f64, x: f64) -> Result<f64> {
    Ok(quadrature_closed(&EvalContext::new(state)?, phi, x))
}

/// Number of interior local maxima of a sampled curve. Samples below
/// 1e−12 of the largest value are treated as flat tails.
pub fn count_local_maxima(values: &[f64]) -> usize {
    let top = values.iter().copied().fold(0.0, f64::max);
    let floor = 1e-12 * top;
    values
        .windows(3)
        .filter(|w| w[1] > floor && w[1] > w[0] && w[1] >= w[2])
        .count()
}
