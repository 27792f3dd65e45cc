//! Single-state observables: photon statistics, homodyne quadrature
//! distributions, Wigner and Husimi functions.
//!
//! Quadratures follow x̂(φ) = (e^{−iφ}â + e^{iφ}â†)/√2, so the vacuum has
//! variance ½ and phase-space points map to coherent amplitudes by
//! β = (x + ip)/√2.
//!
//! Orientation: the closed forms for the Wigner and Husimi functions are
//! written for the coefficients c_{m,n} as they come out of the
//! beam-splitter calculation, while the closed quadrature form corresponds
//! to those coefficients turned by a quarter period, e^{inπ/2}·c_{m,n}. All
//! observables here use the turned vector (the "frame vector") so that the
//! marginals of the Wigner function are the quadrature distributions at
//! φ = 0 and φ = π/2. Negative α and a complex-α rotation add to the same
//! turn angle.

mod component;
mod husimi;
mod photon;
mod quadrature;
mod wigner;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

pub use component::{
    coherent_husimi, component_coherent_centre, component_coherent_limit, component_frame_vector,
    component_husimi, component_husimi_oracle, component_husimi_peak, wigner_of_component,
};
pub use husimi::{husimi_closed, husimi_oracle, husimi_state};
pub use photon::{
    mandel_q, mandel_q_derivative, mean_photon_number, mean_photon_number_closed,
    photon_number_distribution,
};
pub use quadrature::{
    count_local_maxima, hermite_functions, quadrature_closed, quadrature_distribution,
    quadrature_oracle,
};
pub use wigner::{wigner_closed, wigner_oracle, wigner_state};

use crate::error::{Error, Result};
use crate::states::{ConditionalState, FockVector};
use crate::C64;

/// Largest photon count accepted by the closed forms.
pub const MAX_CLOSED_M: usize = 20;

/// Rectangular evaluation grid; points are listed x-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl Default for PhaseSpaceGrid {
    fn default() -> Self {
        PhaseSpaceGrid {
            x_min: -5.0,
            x_max: 5.0,
            p_min: -5.0,
            p_max: 5.0,
            nx: 161,
            np: 161,
        }
    }
}

impl PhaseSpaceGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        p_min: f64,
        p_max: f64,
        nx: usize,
        np: usize,
    ) -> Result<Self> {
        let grid = PhaseSpaceGrid {
            x_min,
            x_max,
            p_min,
            p_max,
            nx,
            np,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn square(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, -half_width, half_width, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.np < 2 {
            return Err(Error::domain(format!(
                "grid needs at least 2×2 points, got {}×{}",
                self.nx, self.np
            )));
        }
        if !(self.x_max > self.x_min) || !(self.p_max > self.p_min) {
            return Err(Error::domain("grid bounds must be increasing"));
        }
        if ![self.x_min, self.x_max, self.p_min, self.p_max]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::domain("grid bounds must be finite"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx)
            .map(|i| self.x_min + i as f64 * self.dx())
            .collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        (0..self.np)
            .map(|j| self.p_min + j as f64 * self.dp())
            .collect()
    }

    /// All (x, p) pairs, x-major.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let ps = self.ps();
        self.xs()
            .into_iter()
            .flat_map(|x| ps.iter().map(move |&p| (x, p)))
            .collect()
    }

    pub fn evaluate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> Vec<f64> {
        self.points().into_iter().map(|(x, p)| f(x, p)).collect()
    }

    pub fn try_evaluate<F: FnMut(f64, f64) -> Result<f64>>(&self, mut f: F) -> Result<Vec<f64>> {
        self.points().into_iter().map(|(x, p)| f(x, p)).collect()
    }
}

/// Turn angle taking the real-α, unturned coefficients of |α| to the frame
/// vector of `state`.
pub fn frame_angle(state: &ConditionalState) -> f64 {
    let sign_turn = if state.alpha() < 0.0 { FRAC_PI_2 } else { 0.0 };
    FRAC_PI_2 + state.rotation() + sign_turn
}

/// Coefficients the phase-space observables are built from.
pub fn frame_vector(state: &ConditionalState) -> FockVector {
    state.coefficients().rotated(FRAC_PI_2 + state.rotation())
}

/// Coordinates at which an unturned closed form has to be evaluated:
/// x' + ip' = e^{−iθ}(x + ip).
pub(crate) fn unturn(theta: f64, x: f64, p: f64) -> (f64, f64) {
    let z = C64::from_polar(1.0, -theta) * C64::new(x, p);
    (z.re, z.im)
}

/// Quantities shared by every closed-form evaluation for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalContext {
    /// |α|; the sign is carried by `theta`.
    pub alpha: f64,
    pub m: usize,
    /// λ = (1−α)/(1+α).
    pub lambda: f64,
    /// ln 𝒩_m.
    pub ln_norm: f64,
    /// Frame turn angle.
    pub theta: f64,
}

impl EvalContext {
    pub fn new(state: &ConditionalState) -> Result<Self> {
        if state.m() > MAX_CLOSED_M {
            return Err(Error::Range(format!(
                "closed forms support m ≤ {MAX_CLOSED_M}, got m = {}; use the Fock-basis evaluators",
                state.m()
            )));
        }
        let alpha = state.alpha().abs();
        Ok(EvalContext {
            alpha,
            m: state.m(),
            lambda: (1.0 - alpha) / (1.0 + alpha),
            ln_norm: state.ln_norm(),
            theta: frame_angle(state),
        })
    }

    /// Δ(φ) = 1 + α² − 2α·cos 2φ.
    pub fn delta(&self, phi: f64) -> f64 {
        1.0 + self.alpha * self.alpha - 2.0 * self.alpha * (2.0 * phi).cos()
    }

    /// Quadrature phase at which the unturned closed form is evaluated.
    pub fn quadrature_phase(&self, phi: f64) -> f64 {
        phi - (self.theta - FRAC_PI_2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_are_x_major() {
        let g = PhaseSpaceGrid::new(-1.0, 1.0, 0.0, 2.0, 3, 2).unwrap();
        assert_eq!(
            g.points(),
            vec![
                (-1.0, 0.0),
                (-1.0, 2.0),
                (0.0, 0.0),
                (0.0, 2.0),
                (1.0, 0.0),
                (1.0, 2.0)
            ]
        );
        assert!(PhaseSpaceGrid::new(0.0, 1.0, 0.0, 1.0, 1, 4).is_err());
        assert!(PhaseSpaceGrid::new(1.0, 1.0, 0.0, 1.0, 4, 4).is_err());
        let d = PhaseSpaceGrid::default();
        assert_eq!((d.nx, d.np, d.x_min, d.p_max), (161, 161, -5.0, 5.0));
    }

    #[test]
    fn context_quantities() {
        let s = ConditionalState::new(0.6, 2).unwrap();
        let c = EvalContext::new(&s).unwrap();
        assert!((c.lambda - 0.25).abs() < 1e-15);
        assert!(c.delta(0.3) > 0.0);
        assert!((c.delta(0.0) - 0.16).abs() < 1e-15);
        let big = ConditionalState::new(0.6, 21).unwrap();
        assert!(matches!(EvalContext::new(&big), Err(Error::Range(_))));
    }

    #[test]
    fn negative_alpha_is_a_quarter_turn() {
        let pos = ConditionalState::new(0.5, 3).unwrap();
        let neg = ConditionalState::new(-0.5, 3).unwrap();
        let turned = frame_vector(&pos).rotated(FRAC_PI_2).canonical_phase();
        assert!(turned.max_abs_diff(&frame_vector(&neg).canonical_phase()) < 1e-14);
    }
}
