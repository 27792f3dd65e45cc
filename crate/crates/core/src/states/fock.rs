use serde::{Deserialize, Serialize};

use crate::C64;

/// Single-mode state vector in the photon-number basis, truncated at n_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVector {
    amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        assert!(
            !amplitudes.is_empty(),
            "a Fock vector needs at least the vacuum entry"
        );
        FockVector { amplitudes }
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        Self::new(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// |n⟩ truncated at n_max.
    pub fn number_state(n: usize, n_max: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); n_max.max(n) + 1];
        amplitudes[n] = C64::new(1.0, 0.0);
        FockVector { amplitudes }
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::number_state(0, n_max)
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude of |n⟩; zero beyond the truncation.
    pub fn get(&self, n: usize) -> C64 {
        self.amplitudes.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < 1e-10
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn normalized(&self) -> Self {
        let scale = self.norm_sqr().sqrt().recip();
        FockVector {
            amplitudes: self.amplitudes.iter().map(|a| a * scale).collect(),
        }
    }

    /// Multiplies amplitude n by e^{inθ}: a phase-space rotation by θ.
    pub fn rotated(&self, theta: f64) -> Self {
        if theta == 0.0 {
            return self.clone();
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| a * C64::from_polar(1.0, n as f64 * theta))
            .collect();
        FockVector { amplitudes }
    }

    /// Removes a global phase so the first non-negligible amplitude is real
    /// and positive.
    pub fn canonical_phase(&self) -> Self {
        let scale = self.norm_sqr().sqrt();
        let lead = self.amplitudes.iter().find(|a| a.norm() > 1e-8 * scale);
        match lead {
            Some(a) => {
                let phase = a.conj() / a.norm();
                FockVector {
                    amplitudes: self.amplitudes.iter().map(|x| x * phase).collect(),
                }
            }
            None => self.clone(),
        }
    }

    /// ⟨self|other⟩ over the common support.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest per-amplitude distance, treating missing entries as zero.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let len = self.amplitudes.len().max(other.amplitudes.len());
        (0..len)
            .map(|n| (self.get(n) - other.get(n)).norm())
            .fold(0.0, f64::max)
    }
}
