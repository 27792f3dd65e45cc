use crate::error::{Error, Result};
use crate::specfun::ln_factorial;
use crate::states::ConditionalState;

/// P(n|m) = |c_{m,n}|²/𝒩_m over the state's truncation.
pub fn photon_number_distribution(state: &ConditionalState) -> Vec<f64> {
    state.coefficients().probabilities()
}

/// ⟨n̂⟩ = α²/(1−α²) + m(1+α²)/(1−α²) − 2·Σₖ k·aₖ/Σₖ aₖ,
/// aₖ = (2α)^{−2k}/((m−2k)!(k!)²).
pub fn mean_photon_number_closed(alpha: f64, m: usize) -> Result<f64> {
    if !(alpha.abs() < 1.0) {
        return Err(Error::domain(format!(
            "|alpha| = {} must be below 1",
            alpha.abs()
        )));
    }
    let a2 = alpha * alpha;
    if a2 == 0.0 {
        return if m == 0 {
            Ok(0.0)
        } else {
            Err(Error::zero_probability("alpha = 0 with m > 0"))
        };
    }
    let ln_w: Vec<f64> = (0..=m / 2)
        .map(|k| {
            -2.0 * k as f64 * (2.0 * alpha.abs()).ln()
                - ln_factorial(m - 2 * k)
                - 2.0 * ln_factorial(k)
        })
        .collect();
    let top = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (k, lw) in ln_w.iter().enumerate() {
        let w = (lw - top).exp();
        num += k as f64 * w;
        den += w;
    }
    Ok(a2 / (1.0 - a2) + m as f64 * (1.0 + a2) / (1.0 - a2) - 2.0 * num / den)
}

pub fn mean_photon_number(state: &ConditionalState) -> Result<f64> {
    mean_photon_number_closed(state.alpha(), state.m())
}

fn moments(state: &ConditionalState) -> (f64, f64) {
    let p = photon_number_distribution(state);
    let first = p.iter().enumerate().map(|(n, q)| n as f64 * q).sum();
    let second = p.iter().enumerate().map(|(n, q)| (n * n) as f64 * q).sum();
    (first, second)
}

/// Mandel Q = (⟨n̂²⟩ − ⟨n̂⟩²)/⟨n̂⟩ − 1 from the photon-number moments.
pub fn mandel_q(state: &ConditionalState) -> Result<f64> {
    let (n1, n2) = moments(state);
    if n1 <= 0.0 {
        return Err(Error::domain("Mandel Q is undefined for the vacuum"));
    }
    Ok((n2 - n1 * n1) / n1 - 1.0)
}

/// Q = (α/⟨n̂⟩)·∂⟨n̂⟩/∂α − 1, with the derivative taken by central
/// differences of the closed mean (step 10⁻⁵).
pub fn mandel_q_derivative(alpha: f64, m: usize) -> Result<f64> {
    let h = 1e-5;
    let mean = mean_photon_number_closed(alpha, m)?;
    if mean <= 0.0 {
        return Err(Error::domain("Mandel Q is undefined for the vacuum"));
    }
    let up = mean_photon_number_closed(alpha + h, m)?;
    let down = mean_photon_number_closed(alpha - h, m)?;
    Ok(alpha / mean * (up - down) / (2.0 * h) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_examples() {
        let p = photon_number_distribution(&ConditionalState::new(0.6, 0).unwrap());
        assert!((p[0] - 0.8).abs() < 1e-14);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let p = photon_number_distribution(&ConditionalState::new(0.6, 2).unwrap());
        assert_eq!(p[1], 0.0);
    }

    #[test]
    fn mean_examples() {
        assert!((mean_photon_number_closed(0.6, 0).unwrap() - 0.5625).abs() < 1e-14);
        assert_eq!(mean_photon_number_closed(0.0, 0).unwrap(), 0.0);
    }

    #[test]
    fn closed_mean_against_moments() {
        for &alpha in &[0.1, 0.3, 0.6, 0.8, 0.9, -0.6] {
            for m in 0..=10 {
                let s = ConditionalState::new(alpha, m).unwrap();
                let direct = moments(&s).0;
                let closed = mean_photon_number(&s).unwrap();
                assert!(
                    (closed / direct - 1.0).abs() < 1e-9,
                    "alpha={alpha} m={m}: {closed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn mandel_sign_pattern() {
        for &alpha in &[0.2, 0.4, 0.6, 0.8] {
            assert!(mandel_q(&ConditionalState::new(alpha, 2).unwrap()).unwrap() > 0.0);
        }
        assert!(mandel_q(&ConditionalState::new(0.1, 1).unwrap()).unwrap() < 0.0);
        assert!(mandel_q(&ConditionalState::new(0.0, 0).unwrap()).is_err());
    }

    #[test]
    fn squeezed_vacuum_q() {
        // for a squeezed vacuum Q = 1 + 2⟨n̂⟩
        let s = ConditionalState::new(0.6, 0).unwrap();
        let q = mandel_q(&s).unwrap();
        assert!((q - (1.0 + 2.0 * 0.5625)).abs() < 1e-10);
    }

    #[test]
    fn derivative_form_agrees() {
        for &alpha in &[0.2, 0.5, 0.8] {
            for m in 0..=6 {
                let direct = mandel_q(&ConditionalState::new(alpha, m).unwrap()).unwrap();
                let fd = mandel_q_derivative(alpha, m).unwrap();
                assert!(
                    (direct - fd).abs() < 1e-4,
                    "alpha={alpha} m={m}: {direct} vs {fd}"
                );
            }
        }
    }
}
