use std::f64::consts::PI;

use super::{unturn, EvalContext};
use crate::error::Result;
use crate::specfun::{hermite_sequence, ln_factorial};
use crate::states::{ConditionalState, FockVector};
use crate::C64;

/// W(x, p) = (π𝒩₁ₘ)⁻¹·e^{−λx² − p²/λ}·Σₖ (−2α)ᵏ/(k!((m−k)!)²)·|H_{m−k}(i√(αλ)(x + ip/λ))|²,
/// 𝒩₁ₘ = Σₖ (2α)^{m−2k}/((m−2k)!(k!)²), in the unturned orientation.
fn w4(ctx: &EvalContext, x: f64, p: f64) -> f64 {
    let (a, m, lambda) = (ctx.alpha, ctx.m, ctx.lambda);
    let norm1: f64 = (0..=m / 2)
        .map(|k| {
            let e = m - 2 * k;
            (2.0 * a).powi(e as i32) * (-ln_factorial(e) - 2.0 * ln_factorial(k)).exp()
        })
        .sum();
    let z = C64::new(0.0, (a * lambda).sqrt()) * C64::new(x, p / lambda);
    let h = hermite_sequence(z, m);
    let mut sum = 0.0;
    for k in 0..=m {
        let weight =
            (-2.0 * a).powi(k as i32) * (-ln_factorial(k) - 2.0 * ln_factorial(m - k)).exp();
        sum += weight * h.get(m - k).norm_sqr();
    }
    (-lambda * x * x - p * p / lambda).exp() * sum / (PI * norm1)
}

/// Closed-form Wigner function in the frame orientation.
pub fn wigner_closed(ctx: &EvalContext, x: f64, p: f64) -> f64 {
    let (xu, pu) = unturn(ctx.theta, x, p);
    w4(ctx, xu, pu)
}

/// Wigner function of a pure Fock-basis state, W = Σ ρ_{kl}W_{kl}(x, p),
/// normalised so ∬W dx dp = 1 (vacuum: e^{−x²−p²}/π).
///
/// With A = (x + ip)/√2 the matrix elements are
/// W_{k,k+d} = (−1)ᵏ/π·√(k!/(k+d)!)·(2A)ᵈ·e^{−2|A|²}·L_k^{(d)}(4|A|²).
/// Each diagonal d runs the forward recurrence for the normalised
/// polynomials ℓ_k = √(k!d!/(k+d)!)·L_k^{(d)}(u), ℓ₀ = 1, and applies the
/// common prefactor (2|A|)ᵈe^{−2|A|²}/(π√d!) once per rescale, so nothing is
/// formed as a difference of large matrix elements.
pub fn wigner_oracle(state: &FockVector, x: f64, p: f64) -> f64 {
    let c = state.amplitudes();
    let dim = c.len();
    let zero = C64::new(0.0, 0.0);
    let a = C64::new(x, p) / 2f64.sqrt();
    let r2 = a.norm_sqr();
    let u = 4.0 * r2;
    let phase = if r2 == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        a / a.norm()
    };
    let root: Vec<f64> = (0..=dim).map(|i| (i as f64).sqrt()).collect();
    let mut w = 0.0;
    let mut phase_d = C64::new(1.0, 0.0);
    for d in 0..dim {
        let phase_here = phase_d;
        phase_d *= phase;
        let len = dim - d;
        let Some(last) = (0..len).rev().find(|&k| c[k] != zero && c[k + d] != zero) else {
            continue;
        };
        let ln_base = if d == 0 {
            0.0
        } else {
            d as f64 * (2.0 * a.norm()).ln()
        } - 0.5 * ln_factorial(d)
            - 2.0 * r2
            - PI.ln();
        let df = d as f64;
        let mut factor = ln_base.exp();
        let mut ln_scale = 0.0f64;
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        let mut sum = zero;
        for k in 0..=last {
            if k > 0 {
                let kf = (k - 1) as f64;
                let next = ((2.0 * kf + 1.0 + df - u) * cur - root[k - 1] * root[k - 1 + d] * prev)
                    / (root[k] * root[k + d]);
                prev = cur;
                cur = next;
                if cur.abs() > 1e150 {
                    let size = cur.abs();
                    cur /= size;
                    prev /= size;
                    ln_scale += size.ln();
                    factor = (ln_base + ln_scale).exp();
                }
            }
            let rho = c[k] * c[k + d].conj();
            if rho != zero {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sum += rho * (sign * cur * factor);
            }
        }
        let term = sum * phase_here;
        w += if d == 0 { term.re } else { 2.0 * term.re };
    }
    w
}

/// Closed-form Wigner function of a conditional state.
pub fn wigner_state(state: &ConditionalState, x: f64, p: f64) -> Result<f64> {
    Ok(wigner_closed(&EvalContext::new(state)?, x, p))
}

#[cfg(test)]
mod tests {
    use super::super::{frame_vector, quadrature_closed, PhaseSpaceGrid};
    use super::*;
    use crate::quad::{integrate_plane, integrate_real_line};
    use crate::specfun::ln_factorial;
    use std::f64::consts::FRAC_PI_2;

    fn coherent(beta: C64, n_max: usize) -> FockVector {
        let amps = (0..=n_max)
            .map(|n| {
                let mag = (-0.5 * beta.norm_sqr() + n as f64 * beta.norm().ln()
                    - 0.5 * ln_factorial(n))
                .exp();
                C64::from_polar(
                    if n == 0 {
                        (-0.5 * beta.norm_sqr()).exp()
                    } else {
                        mag
                    },
                    n as f64 * beta.arg(),
                )
            })
            .collect();
        FockVector::new(amps)
    }

    #[test]
    fn oracle_reference_states() {
        let vac = FockVector::vacuum(5);
        for &(x, p) in &[(0.0f64, 0.0f64), (0.7, -1.2)] {
            let expect = (-x * x - p * p).exp() / PI;
            assert!((wigner_oracle(&vac, x, p) - expect).abs() < 1e-15);
        }
        let one = FockVector::number_state(1, 5);
        assert!((wigner_oracle(&one, 0.0, 0.0) + 1.0 / PI).abs() < 1e-15);
        // a coherent state sits at (x, p) = √2(Re β, Im β)
        let beta = C64::new(1.1, -0.6);
        let v = coherent(beta, 60);
        let (x0, p0) = (2f64.sqrt() * beta.re, 2f64.sqrt() * beta.im);
        for &(dx, dp) in &[(0.0f64, 0.0f64), (0.3, 0.1), (-0.5, 0.4)] {
            let expect = (-dx * dx - dp * dp).exp() / PI;
            assert!((wigner_oracle(&v, x0 + dx, p0 + dp) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezed_vacuum_matches_gaussian() {
        let s = ConditionalState::new(0.6, 0).unwrap();
        let ctx = EvalContext::new(&s).unwrap();
        let v = frame_vector(&s);
        let lambda = 0.25;
        for &(x, p) in &[(0.0, 0.0), (0.5, -0.3), (-1.0, 1.4)] {
            let closed = wigner_closed(&ctx, x, p);
            assert!((closed - wigner_oracle(&v, x, p)).abs() < 1e-12);
            // unturned Gaussian e^{−λx² − p²/λ}/π read at the quarter turn
            let expect = (-lambda * p * p - x * x / lambda).exp() / PI;
            assert!((closed - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_state_negative_at_origin() {
        let s = ConditionalState::new(0.6, 1).unwrap();
        let w = wigner_state(&s, 0.0, 0.0).unwrap();
        assert!((w + 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn closed_matches_oracle() {
        let grid = PhaseSpaceGrid::square(6.0, 25).unwrap();
        for &alpha in &[0.3, 0.6, 0.8, -0.6] {
            for m in 0..=5 {
                let s = ConditionalState::new(alpha, m).unwrap();
                let ctx = EvalContext::new(&s).unwrap();
                let v = frame_vector(&s);
                for (x, p) in grid.points() {
                    let a = wigner_closed(&ctx, x, p);
                    let b = wigner_oracle(&v, x, p);
                    assert!(
                        (a - b).abs() < 1e-9,
                        "alpha={alpha} m={m} ({x},{p}): {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn normalised() {
        for &alpha in &[0.3, 0.6, 0.8] {
            for m in 0..=5 {
                let ctx = EvalContext::new(&ConditionalState::new(alpha, m).unwrap()).unwrap();
                let total = integrate_plane(|x, p| wigner_closed(&ctx, x, p), 1e-10);
                assert!((total - 1.0).abs() < 1e-7, "alpha={alpha} m={m}: {total}");
            }
        }
    }

    #[test]
    fn marginals_are_quadrature_distributions() {
        for &alpha in &[0.3, 0.6, 0.8] {
            for m in 0..=5 {
                let ctx = EvalContext::new(&ConditionalState::new(alpha, m).unwrap()).unwrap();
                for &u in &[-2.5, -0.8, 0.0, 0.6, 1.9] {
                    let over_p = integrate_real_line(|p| wigner_closed(&ctx, u, p), 1e-12).value;
                    assert!((over_p - quadrature_closed(&ctx, 0.0, u)).abs() < 1e-6);
                    let over_x = integrate_real_line(|x| wigner_closed(&ctx, x, u), 1e-12).value;
                    assert!((over_x - quadrature_closed(&ctx, FRAC_PI_2, u)).abs() < 1e-6);
                }
            }
        }
    }
}
