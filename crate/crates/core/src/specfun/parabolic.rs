use std::f64::consts::PI;

use crate::specfun::erfc_complex;
use crate::C64;

/// Below this real part the upward recurrence from D₀ and D₋₁ is used.
const BACKWARD_THRESHOLD: f64 = 0.5;

/// Parabolic cylinder function D_{−m−1}(z) for m ≥ 0.
///
/// The sequence D₋ₙ(z), n = 0, 1, 2, … obeys
/// D₋ₙ₊₁ − z·D₋ₙ − n·D₋ₙ₋₁ = 0. For Re z > 0 it is the minimal solution of
/// that recurrence, so it is generated by Miller's backward recurrence and
/// normalised with D₀(z) = e^{−z²/4}. Elsewhere it is dominant and the
/// forward direction from D₀ and D₋₁(z) = √(π/2)·e^{z²/4}·erfc(z/√2) is
/// stable.
pub fn parabolic_cylinder_neg(m: usize, z: C64) -> C64 {
    if z.re >= BACKWARD_THRESHOLD {
        backward(m, z)
    } else {
        forward(m, z)
    }
}

fn forward(m: usize, z: C64) -> C64 {
    let quarter = z * z / 4.0;
    let d0 = (-quarter).exp();
    let d1 = (PI / 2.0).sqrt() * quarter.exp() * erfc_complex(z / 2f64.sqrt());
    if m == 0 {
        return d1;
    }
    let (mut prev, mut cur) = (d0, d1);
    for n in 1..=m {
        let next = (prev - z * cur) / n as f64;
        prev = cur;
        cur = next;
    }
    cur
}

fn backward(m: usize, z: C64) -> C64 {
    // The dominant-to-minimal ratio grows roughly like exp(2·Re z·√n); start
    // far enough above m that the arbitrary seed has died out by then.
    let target = m + 1;
    let lead = (target as f64).sqrt() + 20.0 / z.re;
    let start = (lead * lead).ceil() as usize + 16;

    let mut upper = C64::new(0.0, 0.0); // D₋₍ₙ₊₁₎
    let mut cur = C64::new(1.0, 0.0); // D₋ₙ, arbitrary seed
    let mut at_target = C64::new(0.0, 0.0);
    for n in (1..=start).rev() {
        // D₋₍ₙ₋₁₎ = z·D₋ₙ + n·D₋₍ₙ₊₁₎
        let lower = z * cur + n as f64 * upper;
        upper = cur;
        cur = lower;
        if n == target {
            at_target = upper;
        }
        let size = cur.norm();
        if size > 1e100 {
            cur /= size;
            upper /= size;
            at_target /= size;
        }
    }
    if target > start {
        unreachable!("Miller start lies above the requested order");
    }
    // complex division squares the modulus, so bring cur to unit size first
    let size = cur.norm();
    let d0 = (-z * z / 4.0).exp();
    (at_target / size) * d0 / (cur / size)
}
