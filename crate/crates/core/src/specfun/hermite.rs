use crate::C64;

/// Physicists' Hermite polynomials H₀(z)..H_max(z) at one (complex) point.
///
/// Values come from the upward recurrence H_{n+1} = 2z·H_n − 2n·H_{n−1} and
/// are never rescaled; for large |z| and high orders they overflow to
/// infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSequence {
    argument: C64,
    values: Vec<C64>,
}

impl HermiteSequence {
    pub fn argument(&self) -> C64 {
        self.argument
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> C64 {
        self.values[n]
    }

    /// Largest scaled residual |H_{n+1} − 2zH_n + 2nH_{n−1}| / max(1, |H_{n+1}|).
    pub fn recurrence_residual(&self) -> f64 {
        let z = self.argument;
        self.values
            .windows(3)
            .enumerate()
            .map(|(i, w)| {
                let n = (i + 1) as f64;
                let r = w[2] - 2.0 * z * w[1] + 2.0 * n * w[0];
                r.norm() / w[2].norm().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

pub fn hermite_sequence(z: C64, n_max: usize) -> HermiteSequence {
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(C64::new(1.0, 0.0));
    if n_max >= 1 {
        values.push(2.0 * z);
    }
    for n in 1..n_max {
        let next = 2.0 * z * values[n] - 2.0 * n as f64 * values[n - 1];
        values.push(next);
    }
    HermiteSequence {
        argument: z,
        values,
    }
}

/// H₀(x)..H_{n_max}(x) for real x.
pub fn hermite_real(x: f64, n_max: usize) -> Vec<f64> {
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    if n_max >= 1 {
        values.push(2.0 * x);
    }
    for n in 1..n_max {
        let next = 2.0 * x * values[n] - 2.0 * n as f64 * values[n - 1];
        values.push(next);
    }
    values
}

pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn hermite_complex(n: usize, z: C64) -> C64 {
    let (mut prev, mut cur) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    for k in 0..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ln_factorial;

    #[test]
    fn values_at_zero() {
        let h = hermite_sequence(C64::new(0.0, 0.0), 4);
        let expect = [1.0, 0.0, -2.0, 0.0, 12.0];
        for (v, e) in h.values().iter().zip(expect) {
            assert_eq!(*v, C64::new(e, 0.0));
        }
    }

    #[test]
    fn even_orders_at_zero_match_factorial_ratio() {
        let h = hermite_real(0.0, 40);
        for n in 0..20 {
            assert_eq!(h[2 * n + 1], 0.0);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let expect = sign * (ln_factorial(2 * n) - ln_factorial(n)).exp();
            assert!((h[2 * n] - expect).abs() <= 1e-13 * expect.abs());
        }
    }

    #[test]
    fn direct_polynomial_values() {
        let h = hermite_sequence(C64::new(1.0, 0.0), 2);
        assert_eq!(
            h.values(),
            &[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(2.0, 0.0)]
        );
        let h = hermite_sequence(C64::new(0.0, 1.0), 2);
        assert_eq!(
            h.values(),
            &[C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-6.0, 0.0)]
        );
        assert_eq!(hermite(3, 0.5), -5.0);
        assert_eq!(hermite_complex(2, C64::new(0.0, 1.0)), C64::new(-6.0, 0.0));
    }

    #[test]
    fn first_two_orders_exact() {
        let z = C64::new(0.37, -1.2);
        let h = hermite_sequence(z, 5);
        assert_eq!(h.get(0), C64::new(1.0, 0.0));
        assert_eq!(h.get(1), 2.0 * z);
        assert_eq!(h.max_order(), 5);
        assert_eq!(h.argument(), z);
        assert_eq!(hermite_sequence(z, 0).values().len(), 1);
    }

    #[test]
    fn recurrence_residual_small_on_disc() {
        for &(re, im) in &[
            (0.0, 5.0),
            (5.0, 0.0),
            (-3.5, 3.5),
            (1.1, -0.4),
            (-5.0, 0.0),
        ] {
            let h = hermite_sequence(C64::new(re, im), 60);
            assert!(h.recurrence_residual() < 1e-11, "{re} {im}");
        }
    }

    #[test]
    fn derivative_rule_by_central_difference() {
        let step = 1e-5;
        for k in 1..=20 {
            for &x in &[-3.0, -1.3, 0.2, 0.9, 2.4, 3.0] {
                let fd = (hermite(k, x + step) - hermite(k, x - step)) / (2.0 * step);
                let exact = 2.0 * k as f64 * hermite(k - 1, x);
                let scale = exact.abs().max(hermite(k, x).abs()).max(1.0);
                assert!(
                    (fd - exact).abs() <= 1e-5 * scale,
                    "k={k} x={x}: {fd} vs {exact}"
                );
            }
        }
    }
}
