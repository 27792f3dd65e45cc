use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Γ(x) for real x.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln|Γ(x)| for real x.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Number of entries kept in the process-wide ln(n!) table.
const SHARED_TABLE_LEN: usize = 4096;

/// ln(n!) for n = 0..=max_n.
///
/// Entries up to 170 are logarithms of exactly rounded f64 factorials; past
/// that the product is accumulated in chunks that stay below f64::MAX so
/// the only rounding is one logarithm per chunk.
#[derive(Debug, Clone, PartialEq)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(max_n: usize) -> Self {
        let mut values = Vec::with_capacity(max_n + 1);
        values.push(0.0);
        let mut product = 1.0f64;
        let mut chunk_base = 0.0f64;
        for n in 1..=max_n {
            let next = product * n as f64;
            if next > 1e290 {
                chunk_base += product.ln();
                product = n as f64;
            } else {
                product = next;
            }
            values.push(chunk_base + product.ln());
        }
        LogFactorialTable { values }
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }
}

fn shared_table() -> &'static LogFactorialTable {
    static TABLE: OnceLock<LogFactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| LogFactorialTable::new(SHARED_TABLE_LEN))
}

/// ln(n!).
pub fn ln_factorial(n: usize) -> f64 {
    if n <= SHARED_TABLE_LEN {
        shared_table().get(n)
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln C(n, k); −∞ when k > n.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// ln Γ(x) at x = two_x / 2, restricted to integers and half-integers.
///
/// Integer x reduces to ln((x−1)!). For x = n + ½ the duplication formula
/// gives Γ(n + ½) = (2n)!·√π / (4ⁿ·n!).
pub fn log_gamma_half(two_x: i64) -> Result<f64> {
    if two_x < 1 {
        return Err(Error::domain(format!(
            "log_gamma_half needs a positive argument, got {}/2",
            two_x
        )));
    }
    let two_x = two_x as usize;
    if two_x % 2 == 0 {
        Ok(ln_factorial(two_x / 2 - 1))
    } else {
        let n = (two_x - 1) / 2;
        Ok(ln_factorial(2 * n) + 0.5 * PI.ln() - n as f64 * 4f64.ln() - ln_factorial(n))
    }
}
