//! Closed forms of Hermite-polynomial sums that turn photon-number
//! summations into elementary functions.

use crate::error::{Error, Result};
use crate::specfun::{hermite, ln_binomial, ln_factorial};

fn check_unit_disc(z: f64) -> Result<()> {
    if z.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("|z| = {} must be below 1", z.abs())))
    }
}

/// Mehler's formula: Σₖ Hₖ(x)Hₖ(y)(z/2)ᵏ/k!.
pub fn mehler_sum(x: f64, y: f64, z: f64) -> Result<f64> {
    check_unit_disc(z)?;
    let one_minus = 1.0 - z * z;
    Ok(((2.0 * x * y * z - (x * x + y * y) * z * z) / one_minus).exp() / one_minus.sqrt())
}

/// Σₖ H_{k+l}(x)H_{k+j}(y)(z/2)ᵏ/k!, the l-th x- and j-th y-derivative of
/// Mehler's formula.
pub fn shifted_mehler_sum(x: f64, y: f64, z: f64, l: usize, j: usize) -> Result<f64> {
    let base = mehler_sum(x, y, z)?;
    let one_minus = 1.0 - z * z;
    let root = one_minus.sqrt();
    let u = (x - z * y) / root;
    let v = (y - z * x) / root;
    let mut finite = 0.0;
    for k in 0..=l.min(j) {
        let weight = (ln_binomial(l, k) + ln_binomial(j, k) + ln_factorial(k)).exp()
            * (2.0 * z).powi(k as i32);
        finite += weight * hermite(l - k, u) * hermite(j - k, v);
    }
    Ok(base * one_minus.powf(-((l + j) as f64) / 2.0) * finite)
}

/// Shifted Hermite generating function Σₖ H_{k+j}(x)·tᵏ/k! = e^{2xt−t²}·H_j(x−t).
pub fn hermite_generating_function(x: f64, t: f64, j: usize) -> f64 {
    (2.0 * x * t - t * t).exp() * hermite(j, x - t)
}

/// Σₖ H_{k+j}(x)(z/2)ᵏ/k! = e^{xz − z²/4}·H_j(x − z/2).
pub fn hermite_generating_sum(x: f64, z: f64, j: usize) -> f64 {
    hermite_generating_function(x, z / 2.0, j)
}

/// Term-by-term sum of Σₖ H_{k+l}(x)H_{k+j}(y)(z/2)ᵏ/k!, stopped once the
/// terms have fallen below 1e−18 of the running sum for a while.
pub fn shifted_mehler_series(x: f64, y: f64, z: f64, l: usize, j: usize) -> f64 {
    shifted_mehler_series_with_mass(x, y, z, l, j).0
}

/// Same sum, also returning Σ|term| so that callers can size the
/// cancellation error of the oracle itself.
pub fn shifted_mehler_series_with_mass(x: f64, y: f64, z: f64, l: usize, j: usize) -> (f64, f64) {
    let mut sum = 0.0;
    let mut mass = 0.0;
    let mut coeff = 1.0;
    let mut quiet = 0;
    for k in 0..2000usize {
        if k > 0 {
            coeff *= z / 2.0 / k as f64;
        }
        let term = coeff * hermite(k + l, x) * hermite(k + j, y);
        sum += term;
        mass += term.abs();
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            quiet += 1;
            if quiet > 20 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (sum, mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generating_series(x: f64, t: f64, j: usize) -> f64 {
        let mut coeff = 1.0;
        let mut sum = 0.0;
        for k in 0..150usize {
            if k > 0 {
                coeff *= t / k as f64;
            }
            sum += coeff * hermite(k + j, x);
        }
        sum
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn mehler_trivial_point() {
        assert_eq!(mehler_sum(0.0, 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn mehler_against_series() {
        for &(x, y, z) in &[(1.0, 1.0, 0.3), (0.5, -0.5, 0.5)] {
            let a = mehler_sum(x, y, z).unwrap();
            assert!(rel(a, shifted_mehler_series(x, y, z, 0, 0)) < 1e-10);
        }
    }

    #[test]
    fn shifted_reduces_to_mehler() {
        for &(x, y, z) in &[(1.0, 1.0, 0.3), (-1.2, 0.4, -0.6), (0.0, 2.0, 0.75)] {
            assert_eq!(
                shifted_mehler_sum(x, y, z, 0, 0).unwrap(),
                mehler_sum(x, y, z).unwrap()
            );
        }
    }

    #[test]
    fn shifted_against_series() {
        let a = shifted_mehler_sum(0.7, 0.2, 0.4, 1, 0).unwrap();
        assert!(rel(a, shifted_mehler_series(0.7, 0.2, 0.4, 1, 0)) < 1e-10);
        let b = shifted_mehler_sum(0.3, 0.6, 0.5, 2, 1).unwrap();
        assert!(rel(b, shifted_mehler_series(0.3, 0.6, 0.5, 2, 1)) < 1e-9);
    }

    #[test]
    fn grid_against_series() {
        let axis = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let zs = [-0.8, -0.4, 0.0, 0.4, 0.8];
        for &x in &axis {
            for &y in &axis {
                for &z in &zs {
                    for &(l, j) in &[(0, 0), (1, 0), (2, 1), (3, 3)] {
                        let closed = shifted_mehler_sum(x, y, z, l, j).unwrap();
                        let (series, mass) = shifted_mehler_series_with_mass(x, y, z, l, j);
                        let tol = 1e-9 * series.abs() + 1e-10 * mass;
                        assert!(
                            (closed - series).abs() <= tol,
                            "{x} {y} {z} {l} {j}: {closed} vs {series}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cancelling_corners_against_reference() {
        // 60-digit term-by-term sums; f64 series lose most digits here
        let cases = [
            ((-2.0, -2.0, -0.8, 3, 3), 1.1122517937311536319e-6),
            ((2.0, -2.0, 0.8, 2, 1), -1.6275797946428308671e-10),
            ((-2.0, 2.0, -0.8, 0, 0), 58.345438409680613591),
            ((1.5, -1.0, 0.9, 1, 3), -5.132733732616311158e-7),
        ];
        for ((x, y, z, l, j), expect) in cases {
            let got = shifted_mehler_sum(x, y, z, l, j).unwrap();
            assert!(
                rel(got, expect) < 1e-11,
                "{x} {y} {z} {l} {j}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn domain_errors() {
        assert!(mehler_sum(0.0, 0.0, 1.0).is_err());
        assert!(shifted_mehler_sum(0.0, 0.0, -1.5, 1, 1).is_err());
    }

    #[test]
    fn generating_sum_values() {
        assert_eq!(hermite_generating_sum(0.5, 0.0, 3), -5.0);
        assert!(rel(hermite_generating_function(0.0, 1.0, 0), (-1f64).exp()) < 1e-15);
        assert!((hermite_generating_function(0.0, 1.0, 0) - 0.3678794412).abs() < 1e-10);
        let a = hermite_generating_sum(0.4, 0.6, 2);
        assert!(rel(a, generating_series(0.4, 0.3, 2)) < 1e-10);
        for &(x, t, j) in &[(1.3, -0.7, 4), (-0.2, 1.5, 1), (0.0, 0.9, 6)] {
            assert!(
                rel(
                    hermite_generating_function(x, t, j),
                    generating_series(x, t, j)
                ) < 1e-10
            );
        }
    }
}
