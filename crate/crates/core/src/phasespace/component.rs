use std::f64::consts::{FRAC_PI_2, PI};

use super::{husimi_oracle, unturn, wigner_oracle};
use crate::specfun::{ln_factorial, parabolic_cylinder_neg};
use crate::states::{ComponentState, FockVector};
use crate::C64;

/// Component coefficients in the phase-space frame (quarter turn).
pub fn component_frame_vector(comp: &ComponentState) -> FockVector {
    comp.coefficients().rotated(FRAC_PI_2)
}

/// Q^{(±)} = α^m(m!)²/(π²𝒩^{(±)})·e^{−|β|²}·e^{α(β² + β*²)/4}·|D_{−m−1}(∓√α·β)|²,
/// β = (x + ip)/√2 read in the unturned orientation.
pub fn component_husimi(comp: &ComponentState, x: f64, p: f64) -> f64 {
    let (xu, pu) = unturn(FRAC_PI_2, x, p);
    let beta = C64::new(xu, pu) / 2f64.sqrt();
    let (a, m) = (comp.alpha(), comp.m());
    let ln_pref = m as f64 * a.ln() + 2.0 * ln_factorial(m) - 2.0 * PI.ln() - comp.norm().ln();
    let gauss = -beta.norm_sqr() + 0.5 * a * (beta * beta).re;
    let z = -(comp.sign() as f64) * a.sqrt() * beta;
    (ln_pref + gauss).exp() * parabolic_cylinder_neg(m, z).norm_sqr()
}

/// Series form (2π)⁻¹|⟨β|Ψ^{(±)}⟩|² of the component Husimi function.
pub fn component_husimi_oracle(comp: &ComponentState, x: f64, p: f64) -> f64 {
    husimi_oracle(&component_frame_vector(comp), x, p)
}

/// Husimi function (2π)⁻¹e^{−|β−γ|²} of a coherent state |γ⟩.
pub fn coherent_husimi(gamma: C64, x: f64, p: f64) -> f64 {
    let beta = C64::new(x, p) / 2f64.sqrt();
    (-(beta - gamma).norm_sqr()).exp() / (2.0 * PI)
}

/// Coherent amplitude the (+) component is usually said to approach for
/// large m, √(αm), placed in the frame orientation (on the +p axis).
pub fn component_coherent_limit(alpha: f64, m: usize) -> C64 {
    C64::new(0.0, (alpha * m as f64).sqrt())
}

/// Large-m centre of the (+) component, √(αm/(1−α)) on the +p axis.
///
/// The photon-number distribution of a component approaches a negative
/// binomial with mean ≈ mα/(1−α), so the coherent state it resembles has
/// that mean photon number rather than αm.
pub fn component_coherent_centre(alpha: f64, m: usize) -> C64 {
    C64::new(0.0, (alpha * m as f64 / (1.0 - alpha)).sqrt())
}

/// Location (x, p) of the maximum of the (+) component's Husimi function.
/// The maximum lies on the +p axis; it is bracketed on a 0.01 grid and
/// refined by golden-section search.
pub fn component_husimi_peak(comp: &ComponentState) -> (f64, f64) {
    let direction = comp.sign() as f64;
    let f = |t: f64| component_husimi(comp, 0.0, direction * t);
    let reach =
        4.0 * (2.0 * comp.alpha() * (comp.m() as f64 + 1.0) / (1.0 - comp.alpha())).sqrt() + 4.0;
    let steps = (reach / 0.01).ceil() as usize;
    let mut best = (0.0, f64::MIN);
    for i in 0..=steps {
        let t = i as f64 * 0.01;
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let (mut lo, mut hi) = ((best.0 - 0.01).max(0.0), best.0 + 0.01);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(a) > f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    (0.0, direction * 0.5 * (lo + hi))
}

/// Wigner function of a component via the Fock-basis evaluator.
pub fn wigner_of_component(comp: &ComponentState, x: f64, p: f64) -> f64 {
    wigner_oracle(&component_frame_vector(comp), x, p)
}
