use std::f64::consts::PI;

use crate::C64;

/// Complementary error function on the real line.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Complementary error function of a complex argument.
///
/// Left half-plane values come from erfc(−w) = 2 − erfc(w). In the strip
/// 0 ≤ Re w < 1 the Maclaurin series of erf is used; there its terms cancel
/// by at most a factor e^{2(Re w)²}. Further right the Laplace continued
/// fraction converges quickly and keeps full relative accuracy in the tail.
pub fn erfc_complex(w: C64) -> C64 {
    if w.re < 0.0 {
        return C64::new(2.0, 0.0) - erfc_complex(-w);
    }
    if w.im == 0.0 {
        return C64::new(erfc(w.re), 0.0);
    }
    if w.re < 1.0 {
        C64::new(1.0, 0.0) - erf_series(w)
    } else {
        erfc_continued_fraction(w)
    }
}

fn erf_series(w: C64) -> C64 {
    // erf(w) = 2/√π Σ (−1)ⁿ w^{2n+1} / (n!(2n+1))
    let w2 = w * w;
    let mut power = w;
    let mut sum = w;
    let mut n = 0usize;
    loop {
        n += 1;
        power *= -w2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && n as f64 > w2.norm() {
            break;
        }
        if n > 5000 {
            break;
        }
    }
    sum * (2.0 / PI.sqrt())
}

fn erfc_continued_fraction(u: C64) -> C64 {
    // erfc(u) = e^{−u²}/√π · 1/(u + ½/(u + 1/(u + 3/2/(u + ...))))
    // evaluated by the modified Lentz method.
    let tiny = 1e-300;
    let mut f = u;
    let mut c = f;
    let mut d = C64::new(0.0, 0.0);
    for k in 1..20000 {
        let a = k as f64 / 2.0;
        d = u + a * d;
        if d.norm() < tiny {
            d = C64::new(tiny, 0.0);
        }
        c = u + a / c;
        if c.norm() < tiny {
            c = C64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-u * u).exp() / (f * PI.sqrt())
}
