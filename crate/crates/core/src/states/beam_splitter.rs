use serde::{Deserialize, Serialize};

use super::FockVector;
use crate::error::{Error, Result};
use crate::specfun::{ln_binomial, ln_factorial};
use crate::C64;

/// Lossless beam splitter with |T| = cos θ, |R| = sin θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterParams {
    pub theta: f64,
    pub phi_t: f64,
    pub phi_r: f64,
}

impl BeamSplitterParams {
    pub fn new(theta: f64, phi_t: f64, phi_r: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::domain(format!(
                "mixing angle {theta} outside [0, π/2]"
            )));
        }
        Ok(BeamSplitterParams {
            theta,
            phi_t,
            phi_r,
        })
    }

    /// Splitter with the given transmittance |T|² and zero phases.
    pub fn from_transmittance(t_abs2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t_abs2) {
            return Err(Error::domain(format!("|T|² = {t_abs2} outside [0, 1]")));
        }
        Self::new(t_abs2.sqrt().acos(), 0.0, 0.0)
    }

    pub fn t_abs(&self) -> f64 {
        self.theta.cos()
    }

    pub fn r_abs(&self) -> f64 {
        self.theta.sin()
    }

    /// Mode-transformation matrix u: a_j† ↦ Σ_i u[i][j]·a_i†.
    pub fn mode_matrix(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        [
            [
                C64::from_polar(c, self.phi_t),
                C64::from_polar(s, -self.phi_r),
            ],
            [
                -C64::from_polar(s, self.phi_r),
                C64::from_polar(c, -self.phi_t),
            ],
        ]
    }
}

/// Two-mode amplitudes ⟨n₁, n₂|ψ⟩, both axes truncated at n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockMatrix {
    n_max: usize,
    amplitudes: Vec<C64>,
}

impl TwoModeFockMatrix {
    pub fn zeros(n_max: usize) -> Self {
        TwoModeFockMatrix {
            n_max,
            amplitudes: vec![C64::new(0.0, 0.0); (n_max + 1) * (n_max + 1)],
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, n1: usize, n2: usize) -> C64 {
        if n1 > self.n_max || n2 > self.n_max {
            return C64::new(0.0, 0.0);
        }
        self.amplitudes[n1 * (self.n_max + 1) + n2]
    }

    pub fn set(&mut self, n1: usize, n2: usize, value: C64) {
        let stride = self.n_max + 1;
        self.amplitudes[n1 * stride + n2] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Mode-1 amplitudes at fixed n₂ = m, unnormalised. Only n₁ ≤ n_max − m
    /// is kept: larger n₁ would need more photons than the input carried.
    pub fn column(&self, m: usize) -> FockVector {
        FockVector::new((0..=self.n_max - m).map(|n| self.get(n, m)).collect())
    }
}

/// Output amplitudes of |N⟩⊗|0⟩: (u₀₀a₁† + u₁₀a₂†)^N/√N!·|0,0⟩ expanded as
/// √C(N, n₂)·u₀₀^{n₁}·u₁₀^{n₂}.
fn number_state_column(n: usize, u00: C64, u10: C64) -> Vec<C64> {
    let (r0, r1) = (u00.norm(), u10.norm());
    let (p0, p1) = (u00.arg(), u10.arg());
    (0..=n)
        .map(|n2| {
            let n1 = n - n2;
            // 0·ln 0 is taken as 0 so pure transmission or reflection stays exact
            let ln_r = |k: usize, r: f64| if k == 0 { 0.0 } else { k as f64 * r.ln() };
            let ln_mag = 0.5 * ln_binomial(n, n2) + ln_r(n1, r0) + ln_r(n2, r1);
            C64::from_polar(ln_mag.exp(), n1 as f64 * p0 + n2 as f64 * p1)
        })
        .collect()
}

/// Sends `input` through the splitter with vacuum in the second port.
pub fn apply_beam_splitter(input: &FockVector, bs: &BeamSplitterParams) -> TwoModeFockMatrix {
    let u = bs.mode_matrix();
    let n_max = input.n_max();
    let mut out = TwoModeFockMatrix::zeros(n_max);
    for (n, &a) in input.amplitudes().iter().enumerate() {
        if a == C64::new(0.0, 0.0) {
            continue;
        }
        for (n2, amp) in number_state_column(n, u[0][0], u[1][0])
            .into_iter()
            .enumerate()
        {
            out.set(n - n2, n2, a * amp);
        }
    }
    out
}

/// Unitary acting on the (N+1)-dimensional block of total photon number N,
/// indexed by the mode-2 occupation of the output (row) and input (column).
pub fn photon_block(n: usize, bs: &BeamSplitterParams) -> Vec<Vec<C64>> {
    let u = bs.mode_matrix();
    let mut block = vec![vec![C64::new(0.0, 0.0); n + 1]; n + 1];
    for j in 0..=n {
        // (u₀₀a₁† + u₁₀a₂†)^{N−j}·(u₀₁a₁† + u₁₁a₂†)^j, coefficients of a₂†^q
        let first = binomial_expansion(n - j, u[0][0], u[1][0]);
        let second = binomial_expansion(j, u[0][1], u[1][1]);
        let ln_in = ln_factorial(n - j) + ln_factorial(j);
        for (q1, x) in first.iter().enumerate() {
            for (q2, y) in second.iter().enumerate() {
                let q = q1 + q2;
                let scale = (0.5 * (ln_factorial(n - q) + ln_factorial(q) - ln_in)).exp();
                block[q][j] += x * y * scale;
            }
        }
    }
    block
}

/// Coefficients of (a·x + b·y)^k in powers of y.
fn binomial_expansion(k: usize, a: C64, b: C64) -> Vec<C64> {
    (0..=k)
        .map(|q| ln_binomial(k, q).exp() * a.powu((k - q) as u32) * b.powu(q as u32))
        .collect()
}

/// Applies the splitter to an arbitrary two-mode state block by block.
/// Components with total photon number above n_max are dropped.
pub fn apply_beam_splitter_two_mode(
    input: &TwoModeFockMatrix,
    bs: &BeamSplitterParams,
) -> TwoModeFockMatrix {
    let n_max = input.n_max();
    let mut out = TwoModeFockMatrix::zeros(n_max);
    for total in 0..=n_max {
        let block = photon_block(total, bs);
        for j in 0..=total {
            let a = input.get(total - j, j);
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (q, row) in block.iter().enumerate() {
                let prev = out.get(total - q, q);
                out.set(total - q, q, prev + row[j] * a);
            }
        }
    }
    out
}

/// Normalised mode-1 state after m photons were found in mode 2, with the
/// probability of that outcome. The global phase is fixed so the first
/// nonzero amplitude is real and positive.
pub fn conditional_from_oracle(
    two_mode: &TwoModeFockMatrix,
    m: usize,
) -> Result<(FockVector, f64)> {
    if m > two_mode.n_max() {
        return Err(Error::domain(format!(
            "m = {m} exceeds the truncation {}",
            two_mode.n_max()
        )));
    }
    let column = two_mode.column(m);
    let p = column.norm_sqr();
    if p.sqrt() < 1e-300 {
        return Err(Error::zero_probability(format!(
            "no amplitude with {m} photons in mode 2"
        )));
    }
    Ok((column.normalized().canonical_phase(), p))
}

/// Probability of detecting m photons in mode 2: squared column norm.
pub fn oracle_event_probability(two_mode: &TwoModeFockMatrix, m: usize) -> f64 {
    if m > two_mode.n_max() {
        return 0.0;
    }
    two_mode.column(m).norm_sqr()
}
