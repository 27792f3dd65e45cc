//! Adaptive Gauss–Kronrod integration used by the normalisation checks and
//! the integral-representation oracles.

use std::collections::BinaryHeap;

/// Nodes of the 15-point Kronrod rule on [−1, 1] (non-negative half).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
/// Weights of the embedded 7-point Gauss rule (nodes XGK[1], XGK[3], …).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Interval budget of one adaptive integration.
const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// ∫ₐᵇ f, refined by splitting the worst interval until the error estimate
/// is below tol·max(1, |value|) or the interval budget runs out.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Integral {
    let mut evaluations = 15;
    let (value, error) = kronrod(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let (mut total, mut total_err) = (value, error);
    while total_err > tol * total.abs().max(1.0) && heap.len() < MAX_INTERVALS {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (lv, le) = kronrod(&mut f, worst.a, mid);
        let (rv, re) = kronrod(&mut f, mid, worst.b);
        evaluations += 30;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }
    // resum to shed the drift of the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Integral {
        value,
        error,
        evaluations,
    }
}

/// ∫_{−∞}^{∞} f, mapped onto (−1, 1) by x = t/(1−t²).
pub fn integrate_real_line<F: FnMut(f64) -> f64>(mut f: F, tol: f64) -> Integral {
    integrate(
        |t| {
            let s = 1.0 - t * t;
            if s <= 0.0 {
                return 0.0;
            }
            let x = t / s;
            let jac = (1.0 + t * t) / (s * s);
            let v = f(x) * jac;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        -1.0,
        1.0,
        tol,
    )
}

/// ∫₀^∞ f, mapped onto (0, 1) by x = t/(1−t).
pub fn integrate_half_line<F: FnMut(f64) -> f64>(mut f: F, tol: f64) -> Integral {
    integrate(
        |t| {
            let s = 1.0 - t;
            if s <= 0.0 {
                return 0.0;
            }
            let v = f(t / s) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// ∬ f(x, p) over the plane as an iterated integral.
pub fn integrate_plane<F: FnMut(f64, f64) -> f64>(mut f: F, tol: f64) -> f64 {
    integrate_real_line(|x| integrate_real_line(|p| f(x, p), 0.1 * tol).value, tol).value
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid(samples: &[f64], step: f64) -> f64 {
    match samples.len() {
        0 | 1 => 0.0,
        n => step * (samples.iter().sum::<f64>() - 0.5 * (samples[0] + samples[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12);
        assert!((r.value - 16.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_on_real_line() {
        let r = integrate_real_line(|x| (-x * x).exp(), 1e-12);
        assert!((r.value - PI.sqrt()).abs() < 1e-11);
        let r = integrate_real_line(|x| (-(x - 3.0).powi(2) / 0.02).exp(), 1e-12);
        assert!((r.value - (0.02 * PI).sqrt()).abs() < 1e-11);
    }

    #[test]
    fn half_line_moment() {
        let r = integrate_half_line(|t| t * t * (-t).exp(), 1e-12);
        assert!((r.value - 2.0).abs() < 1e-11);
    }

    #[test]
    fn plane_gaussian() {
        let v = integrate_plane(|x, p| (-x * x - p * p).exp() / PI, 1e-10);
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_linear() {
        assert!((trapezoid(&[0.0, 1.0, 2.0], 0.5) - 1.0).abs() < 1e-15);
        assert_eq!(trapezoid(&[3.0], 0.1), 0.0);
    }
}
