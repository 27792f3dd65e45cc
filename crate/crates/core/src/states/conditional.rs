use serde::{Deserialize, Serialize};

use super::{squeezed_truncation, FockVector};
use crate::error::{Error, Result};
use crate::specfun::{ln_factorial, log_gamma_half};
use crate::C64;

/// Dropped probability the truncation rule aims for. Far below 10⁻¹⁴ so
/// that the dropped amplitudes (≈ √tail) are also negligible pointwise.
pub(crate) const TAIL_TARGET: f64 = 1e-20;

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha.abs() >= 1.0 {
        return Err(Error::domain(format!(
            "|alpha| = {} must be below 1",
            alpha.abs()
        )));
    }
    Ok(())
}

fn ln_sum_exp(terms: &[f64]) -> f64 {
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

/// ln of the coefficient magnitude (n+m)!/(Γ((n+m)/2+1)·√n!)·(|α|/2)^{(n+m)/2}
/// without the parity mask; shared with the cat components so the
/// superposition identity holds bit for bit.
pub(crate) fn ln_coefficient(alpha_abs: f64, m: usize, n: usize) -> f64 {
    let k = n + m;
    let ln_gamma = log_gamma_half(k as i64 + 2).expect("argument is positive");
    let power = if k == 0 {
        0.0
    } else {
        0.5 * k as f64 * (alpha_abs / 2.0).ln()
    };
    ln_factorial(k) - ln_gamma - 0.5 * ln_factorial(n) + power
}

/// Fock cutoff for the conditional state with parameters (α, m).
///
/// Starts from max(64, ⌈ln 10⁻¹⁴/ln|α|⌉ + 2m + 16) rounded up to even and
/// then grows it until the geometric bound on the dropped probability is
/// below 10⁻²⁰. The squared ratio of amplitudes two steps apart is
/// α²(n+m+1)²/((n+1)(n+2)), which never increases past max(α², that value)
/// further out, so the tail after n is at most p_n·r/(1−r) with r that max.
pub fn truncation(alpha: f64, m: usize) -> Result<usize> {
    check_alpha(alpha)?;
    let a = alpha.abs();
    if a == 0.0 {
        return Ok(64usize.max(2 * m + 16));
    }
    let ln_norm = ln_normalization_closed(alpha, m)?;
    let mut n = ((TAIL_TARGET.ln() / a.ln()).ceil() as usize + 2 * m + 16).max(64);
    n += n % 2;
    loop {
        // the last kept index with nonzero amplitude
        let last = if (n + m) % 2 == 0 { n } else { n - 1 };
        let ln_p = 2.0 * ln_coefficient(a, m, last) - ln_norm;
        let step =
            a * a * ((last + m + 1) as f64).powi(2) / ((last + 1) as f64 * (last + 2) as f64);
        let r = step.max(a * a);
        if r < 1.0 && ln_p + (r / (1.0 - r)).ln() < TAIL_TARGET.ln() {
            return Ok(n);
        }
        n += 2;
    }
}

/// Input cutoff for the two-mode oracle so that every conditional column
/// up to m_max keeps the photon numbers the closed form keeps.
pub fn oracle_truncation(kappa: f64, t_abs2: f64, m_max: usize) -> Result<usize> {
    let alpha = t_abs2 * kappa;
    let conditional = if alpha == 0.0 {
        0
    } else {
        truncation(alpha, m_max)?
    };
    let n = squeezed_truncation(kappa.abs()).max(conditional + m_max);
    Ok(n + n % 2)
}

/// ln 𝒩_m, the squared norm of the unnormalised coefficient vector.
pub fn ln_normalization_closed(alpha: f64, m: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let a2 = alpha * alpha;
    if a2 == 0.0 {
        return if m == 0 {
            Ok(0.0)
        } else {
            Err(Error::zero_probability(format!(
                "alpha = 0 leaves nothing to detect at m = {m}"
            )))
        };
    }
    let lf_m = ln_factorial(m);
    let terms: Vec<f64> = (0..=m / 2)
        .map(|k| {
            2.0 * lf_m
                - ln_factorial(m - 2 * k)
                - 2.0 * ln_factorial(k)
                - 2.0 * k as f64 * (2.0 * alpha.abs()).ln()
        })
        .collect();
    Ok(-0.5 * (1.0 - a2).ln() + m as f64 * (a2 / (1.0 - a2)).ln() + ln_sum_exp(&terms))
}

/// 𝒩_m = (1−α²)^{−1/2}·[α²/(1−α²)]^m·Σₖ (m!)²/((m−2k)!(k!)²(2α)^{2k}).
pub fn normalization_closed(alpha: f64, m: usize) -> Result<f64> {
    ln_normalization_closed(alpha, m).map(f64::exp)
}

/// Probability that m photons reach the detector,
/// √((1−κ²)/(1−α²))·[α²(1−|T|²)/(|T|²(1−α²))]^m·Σₖ m!/((m−2k)!(k!)²(2α)^{2k})
/// with α = |T|²κ.
pub fn event_probability(kappa: f64, t_abs2: f64, m: usize) -> Result<f64> {
    if !kappa.is_finite() || kappa.abs() >= 1.0 {
        return Err(Error::domain(format!(
            "|kappa| = {} must be below 1",
            kappa.abs()
        )));
    }
    if !(t_abs2 > 0.0 && t_abs2 <= 1.0) {
        return Err(Error::domain(format!("|T|² = {t_abs2} outside (0, 1]")));
    }
    if m == 0 {
        let alpha = t_abs2 * kappa;
        return Ok(((1.0 - kappa * kappa) / (1.0 - alpha * alpha)).sqrt());
    }
    if kappa == 0.0 || t_abs2 == 1.0 {
        return Ok(0.0);
    }
    let alpha = t_abs2 * kappa;
    let a2 = alpha * alpha;
    // α²(1−|T|²)/|T|² = |T|²κ²(1−|T|²) stays finite as |T| → 0
    let ln_base = (t_abs2 * kappa * kappa * (1.0 - t_abs2) / (1.0 - a2)).ln();
    let lf_m = ln_factorial(m);
    let terms: Vec<f64> = (0..=m / 2)
        .map(|k| {
            lf_m - ln_factorial(m - 2 * k)
                - 2.0 * ln_factorial(k)
                - 2.0 * k as f64 * (2.0 * alpha.abs()).ln()
        })
        .collect();
    let ln_p =
        0.5 * ((1.0 - kappa * kappa) / (1.0 - a2)).ln() + m as f64 * ln_base + ln_sum_exp(&terms);
    Ok(ln_p.exp().min(1.0))
}

/// Single-mode state left behind after m photons were counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalState {
    alpha: f64,
    m: usize,
    norm: f64,
    ln_norm: f64,
    /// Phase-space rotation φ_α/2 carried by a complex α.
    rotation: f64,
    coefficients: FockVector,
}

impl ConditionalState {
    /// State for real α with the cutoff from [`truncation`].
    pub fn new(alpha: f64, m: usize) -> Result<Self> {
        let n_max = truncation(alpha, m)?;
        conditional_coefficients(alpha, m, n_max)
    }

    /// State for complex α = |α|e^{iφ_α}, reduced to the real parameter |α|
    /// and a phase-space rotation by φ_α/2.
    pub fn from_complex(alpha: C64, m: usize) -> Result<Self> {
        let mut state = Self::new(alpha.norm(), m)?;
        state.rotation = if alpha.norm() == 0.0 {
            0.0
        } else {
            alpha.arg() / 2.0
        };
        Ok(state)
    }

    /// State heralded by m photons for squeezing κ = |κ|e^{iφ_ξ} and a beam
    /// splitter with transmittance phase φ_T: α = |T|²|κ|·e^{i(φ_ξ + 2φ_T)}.
    /// The reflectance phase only changes the global phase.
    pub fn from_setup(kappa_abs: f64, t_abs2: f64, phi_t: f64, phi_xi: f64, m: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&kappa_abs) {
            return Err(Error::domain(format!("|kappa| = {kappa_abs} outside [0, 1)")));
        }
        if !(t_abs2 > 0.0 && t_abs2 <= 1.0) {
            return Err(Error::domain(format!("|T|² = {t_abs2} outside (0, 1]")));
        }
        Self::from_complex(C64::from_polar(t_abs2 * kappa_abs, phi_xi + 2.0 * phi_t), m)
    }

    pub fn with_rotation(mut self, rotation: f64) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// 𝒩_m.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn ln_norm(&self) -> f64 {
        self.ln_norm
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.n_max()
    }

    /// Normalised amplitudes c_{m,n}/√𝒩_m (before the rotation).
    pub fn coefficients(&self) -> &FockVector {
        &self.coefficients
    }

    /// Amplitudes including the rotation e^{inφ_α/2}.
    pub fn fock_vector(&self) -> FockVector {
        self.coefficients.rotated(self.rotation)
    }
}

/// Normalised conditional amplitudes for real α, truncated at n_max.
pub fn conditional_coefficients(alpha: f64, m: usize, n_max: usize) -> Result<ConditionalState> {
    let ln_norm = ln_normalization_closed(alpha, m)?;
    let a = alpha.abs();
    let mut amplitudes = vec![C64::new(0.0, 0.0); n_max + 1];
    for (n, amp) in amplitudes.iter_mut().enumerate() {
        let k = n + m;
        if k % 2 == 1 {
            continue;
        }
        let value = (ln_coefficient(a, m, n) - 0.5 * ln_norm).exp();
        // (α/2)^{k/2} carries the sign of α to the power k/2
        let sign = if alpha < 0.0 && (k / 2) % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        *amp = C64::new(sign * value, 0.0);
    }
    Ok(ConditionalState {
        alpha,
        m,
        norm: ln_norm.exp(),
        ln_norm,
        rotation: 0.0,
        coefficients: FockVector::new(amplitudes),
    })
}
