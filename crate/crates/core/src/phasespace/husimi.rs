use std::f64::consts::PI;

use super::{unturn, EvalContext};
use crate::error::Result;
use crate::specfun::hermite_complex;
use crate::states::{ConditionalState, FockVector};
use crate::C64;

/// Q(x, p) = |α|^m/(π𝒩_m2^{m+1})·|H_m(½i√α(x+ip))|²·e^{−[(1−α)x² + (1+α)p²]/2},
/// unturned orientation.
fn q3(ctx: &EvalContext, x: f64, p: f64) -> f64 {
    let (a, m) = (ctx.alpha, ctx.m);
    let ln_alpha_m = if m == 0 { 0.0 } else { m as f64 * a.ln() };
    let ln_pref = ln_alpha_m - PI.ln() - ctx.ln_norm - (m + 1) as f64 * 2f64.ln();
    let z = C64::new(0.0, 0.5 * a.sqrt()) * C64::new(x, p);
    let gauss = -0.5 * ((1.0 - a) * x * x + (1.0 + a) * p * p);
    (ln_pref + gauss).exp() * hermite_complex(m, z).norm_sqr()
}

/// Closed-form Husimi function in the frame orientation.
pub fn husimi_closed(ctx: &EvalContext, x: f64, p: f64) -> f64 {
    let (xu, pu) = unturn(ctx.theta, x, p);
    q3(ctx, xu, pu)
}

/// (2π)⁻¹|⟨β|ψ⟩|² with β = (x + ip)/√2, summed over the Fock expansion of
/// the coherent state.
pub fn husimi_oracle(state: &FockVector, x: f64, p: f64) -> f64 {
    let beta = C64::new(x, p) / 2f64.sqrt();
    let mut term = C64::new(1.0, 0.0); // β*ⁿ/√n!
    let mut overlap = C64::new(0.0, 0.0);
    for (n, &c) in state.amplitudes().iter().enumerate() {
        if n > 0 {
            term *= beta.conj() / (n as f64).sqrt();
        }
        overlap += term * c;
    }
    (-beta.norm_sqr()).exp() * overlap.norm_sqr() / (2.0 * PI)
}

/// Closed-form Husimi function of a conditional state.
pub fn husimi_state(state: &ConditionalState, x: f64, p: f64) -> Result<f64> {
    Ok(husimi_closed(&EvalContext::new(state)?, x, p))
}

#[cfg(test)]
mod tests {
    use super::super::{frame_vector, wigner_oracle, PhaseSpaceGrid};
    use super::*;
    use crate::quad::integrate_plane;

    #[test]
    fn m0_is_gaussian() {
        let s = ConditionalState::new(0.6, 0).unwrap();
        let ctx = EvalContext::new(&s).unwrap();
        // unturned: e^{−[(1−α)x² + (1+α)p²]/2}·√(1−α²)/(2π)
        for &(x, p) in &[(0.0f64, 0.0f64), (0.4, 1.1), (-2.0, 0.3)] {
            let expect = (-0.5 * (0.4 * p * p + 1.6 * x * x)).exp() * 0.8 / (2.0 * PI);
            assert!((husimi_closed(&ctx, x, p) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_state_zero_at_origin() {
        let s = ConditionalState::new(0.6, 1).unwrap();
        assert!(husimi_state(&s, 0.0, 0.0).unwrap().abs() < 1e-300);
    }

    #[test]
    fn closed_matches_oracle_and_is_nonnegative() {
        let grid = PhaseSpaceGrid::square(6.0, 31).unwrap();
        for &alpha in &[0.3, 0.6, 0.8, -0.6] {
            for m in 0..=5 {
                let s = ConditionalState::new(alpha, m).unwrap();
                let ctx = EvalContext::new(&s).unwrap();
                let v = frame_vector(&s);
                for (x, p) in grid.points() {
                    let a = husimi_closed(&ctx, x, p);
                    let b = husimi_oracle(&v, x, p);
                    assert!(
                        (a - b).abs() < 1e-10,
                        "alpha={alpha} m={m} ({x},{p}): {a} vs {b}"
                    );
                    assert!(a >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn normalised() {
        for &alpha in &[0.3, 0.6, 0.8] {
            for m in 0..=5 {
                let ctx = EvalContext::new(&ConditionalState::new(alpha, m).unwrap()).unwrap();
                let total = integrate_plane(|x, p| husimi_closed(&ctx, x, p), 1e-10);
                assert!((total - 1.0).abs() < 1e-7, "alpha={alpha} m={m}: {total}");
            }
        }
    }

    #[test]
    fn wigner_smoothed_by_vacuum_is_husimi() {
        // Q = W ∗ e^{−x²−p²}/π, discretised on a fine grid around each point
        let s = ConditionalState::new(0.6, 2).unwrap();
        let ctx = EvalContext::new(&s).unwrap();
        let v = frame_vector(&s);
        let h = 0.1;
        let reach = 60;
        let mut w = vec![vec![0.0; 2 * reach + 1]; 2 * reach + 1];
        for &(x, p) in &[(0.0, 0.0), (1.0, -0.5), (-0.6, 2.0)] {
            for i in 0..=2 * reach {
                for j in 0..=2 * reach {
                    let (u, q) = (
                        x + (i as f64 - reach as f64) * h,
                        p + (j as f64 - reach as f64) * h,
                    );
                    w[i][j] = wigner_oracle(&v, u, q);
                }
            }
            let mut total = 0.0;
            for i in 0..=2 * reach {
                for j in 0..=2 * reach {
                    let (du, dq) = ((i as f64 - reach as f64) * h, (j as f64 - reach as f64) * h);
                    total += w[i][j] * (-du * du - dq * dq).exp() / PI * h * h;
                }
            }
            assert!(
                (total - husimi_closed(&ctx, x, p)).abs() < 1e-4,
                "({x},{p})"
            );
        }
    }
}
