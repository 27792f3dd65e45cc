use serde::{Deserialize, Serialize};

use super::FockVector;
use crate::error::{Error, Result};
use crate::specfun::ln_factorial;
use crate::C64;

/// Truncated norm deficit targeted by [`squeezed_truncation`].
const SQUEEZE_TAIL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    /// Squeeze magnitude |ξ|.
    pub xi_abs: f64,
    /// Squeeze phase φ_ξ.
    pub phi_xi: f64,
}

impl SqueezeParams {
    pub fn new(xi_abs: f64, phi_xi: f64) -> Result<Self> {
        if !(xi_abs >= 0.0) || !xi_abs.is_finite() {
            return Err(Error::domain(format!(
                "squeeze magnitude {xi_abs} must be finite and non-negative"
            )));
        }
        Ok(SqueezeParams { xi_abs, phi_xi })
    }

    /// Parameters reproducing a given κ = e^{iφ}·tanh|ξ|.
    pub fn from_kappa(kappa: C64) -> Result<Self> {
        let r = kappa.norm();
        if r >= 1.0 || !r.is_finite() {
            return Err(Error::domain(format!("|kappa| = {r} must be below 1")));
        }
        Ok(SqueezeParams {
            xi_abs: r.atanh(),
            phi_xi: if r == 0.0 { 0.0 } else { kappa.arg() },
        })
    }

    pub fn from_real_kappa(kappa: f64) -> Result<Self> {
        Self::from_kappa(C64::new(kappa, 0.0))
    }

    pub fn kappa(&self) -> C64 {
        C64::from_polar(self.xi_abs.tanh(), self.phi_xi)
    }
}

/// Smallest even n_max whose dropped tail of the squeezed-vacuum photon
/// distribution is below 1e−14.
///
/// Successive even-n probabilities shrink by |κ|²(2j+1)/(2j+2) < |κ|², so the
/// tail after term j is at most p_j·|κ|²/(1−|κ|²).
pub fn squeezed_truncation(kappa_abs: f64) -> usize {
    let k2 = kappa_abs * kappa_abs;
    if k2 == 0.0 {
        return 0;
    }
    let mut ln_p = 0.5 * (1.0 - k2).ln();
    let ln_ratio_bound = (k2 / (1.0 - k2)).ln();
    let mut j = 0usize;
    while ln_p + ln_ratio_bound > SQUEEZE_TAIL.ln() {
        ln_p += (k2 * (2 * j + 1) as f64 / (2 * j + 2) as f64).ln();
        j += 1;
    }
    2 * j
}

/// Squeezed vacuum amplitudes ⟨2j|S(ξ)|0⟩ = (1−|κ|²)^{1/4}·√((2j)!)/(2ʲ j!)·κʲ.
pub fn squeezed_vacuum(params: &SqueezeParams, n_max: usize) -> Result<FockVector> {
    let kappa = params.kappa();
    let r = kappa.norm();
    if r >= 1.0 {
        return Err(Error::domain(format!("|kappa| = {r} must be below 1")));
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); n_max + 1];
    let ln_pref = 0.25 * (1.0 - r * r).ln();
    let phase = if r == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        kappa / r
    };
    let mut phase_j = C64::new(1.0, 0.0);
    for j in 0..=n_max / 2 {
        let ln_mag = if j == 0 {
            ln_pref
        } else {
            ln_pref + 0.5 * ln_factorial(2 * j) - j as f64 * 2f64.ln() - ln_factorial(j)
                + j as f64 * r.ln()
        };
        amplitudes[2 * j] = phase_j * ln_mag.exp();
        phase_j *= phase;
    }
    Ok(FockVector::new(amplitudes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_roundtrip() {
        let p = SqueezeParams::new(0.8, 0.3).unwrap();
        assert!((p.kappa().norm() - 0.8f64.tanh()).abs() < 1e-14);
        let q = SqueezeParams::from_kappa(p.kappa()).unwrap();
        assert!((q.xi_abs - 0.8).abs() < 1e-12 && (q.phi_xi - 0.3).abs() < 1e-12);
        assert!(SqueezeParams::from_real_kappa(1.0).is_err());
        assert!(SqueezeParams::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn zero_squeezing_is_vacuum() {
        let v = squeezed_vacuum(&SqueezeParams::new(0.0, 1.0).unwrap(), 10).unwrap();
        assert_eq!(v.get(0), C64::new(1.0, 0.0));
        assert!(v.amplitudes()[1..].iter().all(|a| *a == C64::new(0.0, 0.0)));
        assert_eq!(squeezed_truncation(0.0), 0);
    }

    #[test]
    fn normalised_at_documented_cutoffs() {
        let p = SqueezeParams::from_real_kappa(0.75).unwrap();
        assert!((squeezed_vacuum(&p, 200).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        for &k in &[0.1, 0.5, 0.75, 0.9, 0.97] {
            let p = SqueezeParams::from_real_kappa(k).unwrap();
            let n = squeezed_truncation(k);
            assert_eq!(n % 2, 0);
            let v = squeezed_vacuum(&p, n).unwrap();
            assert!((1.0 - v.norm_sqr()).abs() < 1e-12, "kappa={k}");
        }
    }

    #[test]
    fn term_ratio_follows_recurrence() {
        // c_{2j+2}/c_{2j} = κ·√((2j+1)(2j+2))/(2(j+1)), evaluated independently
        let kappa = C64::from_polar(0.75, 0.4);
        let v = squeezed_vacuum(&SqueezeParams::from_kappa(kappa).unwrap(), 40).unwrap();
        for j in 0..20 {
            let expect = kappa * (((2 * j + 1) * (2 * j + 2)) as f64).sqrt() / (2 * (j + 1)) as f64;
            let got = v.get(2 * j + 2) / v.get(2 * j);
            assert!((got - expect).norm() < 1e-13);
            assert_eq!(v.get(2 * j + 1), C64::new(0.0, 0.0));
        }
        // first ratio is κ·√2/2
        let r = v.get(2) / v.get(0);
        assert!((r - kappa * std::f64::consts::FRAC_1_SQRT_2).norm() < 1e-15);
    }
}
