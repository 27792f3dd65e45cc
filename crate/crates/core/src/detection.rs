//! Realistic photocounting: a mode split over N on/off diodes ("photon
//! chopping"), Bernoulli loss in front of it, and the Bayes posterior over
//! the photon number that turns a coincidence count into a mixed state.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phasespace::{
    frame_vector, husimi_closed, husimi_oracle, quadrature_closed, quadrature_oracle, wigner_closed,
    wigner_oracle, EvalContext, MAX_CLOSED_M,
};
use crate::specfun::ln_binomial;
use crate::states::{event_probability, ConditionalState, FockVector};

/// Photon numbers up to this bound use exact rational arithmetic for the
/// chopping probabilities; beyond it the occupancy recursion takes over.
pub const EXACT_CHOPPING_MAX: usize = 40;

/// Cumulative prior mass the default photon-number cutoff must capture.
pub const PRIOR_MASS_TARGET: f64 = 1.0 - 1e-10;

/// N on/off diodes behind a channel of efficiency η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorModel {
    n_diodes: usize,
    efficiency: f64,
}

impl DetectorModel {
    pub fn new(n_diodes: usize, efficiency: f64) -> Result<Self> {
        if n_diodes == 0 {
            return Err(Error::domain("detector needs at least one diode"));
        }
        check_efficiency(efficiency)?;
        Ok(Self {
            n_diodes,
            efficiency,
        })
    }

    pub fn n_diodes(&self) -> usize {
        self.n_diodes
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    /// Response table R[m][k] = P̃_{N,η}(k|m) for m ≤ m_max, k ≤ min(m, N).
    /// Row m has length min(m, N) + 1.
    pub fn response_table(&self, m_max: usize) -> Result<Vec<Vec<f64>>> {
        let chop: Vec<Vec<f64>> = (0..=m_max)
            .map(|l| chopping_row(self.n_diodes, l))
            .collect();
        (0..=m_max)
            .map(|m| {
                let mut row = vec![0.0; m.min(self.n_diodes) + 1];
                for l in 0..=m {
                    let w = loss_matrix(self.efficiency, l, m)?;
                    if w == 0.0 {
                        continue;
                    }
                    for (k, &c) in chop[l].iter().enumerate() {
                        row[k] += c * w;
                    }
                }
                Ok(row)
            })
            .collect()
    }
}

fn check_efficiency(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("efficiency {eta} outside (0, 1]")))
    }
}

/// Probability that m photons spread uniformly over N diodes fire exactly k,
/// P̃_N(k|m) = N^{−m}·C(N,k)·Σ_l (−1)^l C(k,l)(k−l)^m.
pub fn chopping_probability(n_diodes: usize, k: usize, m: usize) -> Result<f64> {
    if n_diodes == 0 {
        return Err(Error::domain("detector needs at least one diode"));
    }
    if k > n_diodes {
        return Err(Error::domain(format!(
            "{k} coincidences exceed {n_diodes} diodes"
        )));
    }
    if k > m {
        return Ok(0.0);
    }
    if m <= EXACT_CHOPPING_MAX {
        return Ok(chopping_exact(n_diodes, k, m));
    }
    Ok(occupancy_row(n_diodes, m)[k])
}

/// Exact value of the alternating sum as a big rational.
fn chopping_exact(n: usize, k: usize, m: usize) -> f64 {
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one(); // C(k, l)
    for l in 0..=k {
        let term = &binom * BigInt::from(k - l).pow(m as u32);
        if l % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * BigInt::from(k - l) / BigInt::from(l + 1);
    }
    let mut choose = BigInt::one();
    for i in 0..k {
        choose = choose * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    let ratio = BigRational::new(choose * sum, BigInt::from(n).pow(m as u32));
    ratio.to_f64().unwrap_or(f64::NAN)
}

/// Distribution of the number of occupied diodes after m photons, built one
/// photon at a time; every term is nonnegative so nothing cancels.
fn occupancy_row(n: usize, m: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut q = vec![0.0; m.min(n) + 1];
    q[0] = 1.0;
    for photons in 0..m {
        let top = (photons + 1).min(n);
        for j in (1..=top).rev() {
            q[j] = q[j] * j as f64 / nf + q[j - 1] * (n - j + 1) as f64 / nf;
        }
        q[0] = 0.0;
    }
    q
}

fn chopping_row(n: usize, m: usize) -> Vec<f64> {
    if m <= EXACT_CHOPPING_MAX {
        (0..=m.min(n))
            .map(|k| {
                if k == 0 && m > 0 {
                    0.0
                } else {
                    chopping_exact(n, k, m)
                }
            })
            .collect()
    } else {
        occupancy_row(n, m)
    }
}

/// Probability that l of m photons survive a channel of efficiency η.
pub fn loss_matrix(eta: f64, l: usize, m: usize) -> Result<f64> {
    check_efficiency(eta)?;
    if l > m {
        return Ok(0.0);
    }
    if eta == 1.0 {
        return Ok(if l == m { 1.0 } else { 0.0 });
    }
    let lost = (m - l) as f64;
    Ok((ln_binomial(m, l) + l as f64 * eta.ln() + lost * (1.0 - eta).ln()).exp())
}

/// P̃_{N,η}(k|m) = Σ_l P̃_N(k|l)·M_{l,m}(η).
pub fn chopping_with_loss(det: &DetectorModel, k: usize, m: usize) -> Result<f64> {
    if k > det.n_diodes {
        return Err(Error::domain(format!(
            "{k} coincidences exceed {} diodes",
            det.n_diodes
        )));
    }
    let mut total = 0.0;
    for l in k..=m {
        total += chopping_probability(det.n_diodes, k, l)? * loss_matrix(det.efficiency, l, m)?;
    }
    Ok(total)
}

/// Photon-number distribution P(m) of the counted channel for m ≤ m_max.
fn prior_row(kappa: f64, t_abs2: f64, m_max: usize) -> Result<Vec<f64>> {
    (0..=m_max)
        .map(|m| event_probability(kappa, t_abs2, m))
        .collect()
}

/// Smallest m_max ≥ k + 20 whose cumulative prior exceeds 1 − 1e−10.
pub fn default_m_max(kappa: f64, t_abs2: f64, k: usize) -> Result<usize> {
    let mut total = 0.0;
    let mut m = 0;
    loop {
        total += event_probability(kappa, t_abs2, m)?;
        if total > PRIOR_MASS_TARGET && m >= k + 20 {
            return Ok(m);
        }
        m += 1;
        if m > 100_000 {
            return Err(Error::numerical(format!(
                "prior mass {total} not reached by m = {m}"
            )));
        }
    }
}

fn checked_prior(kappa: f64, t_abs2: f64, m_max: usize) -> Result<Vec<f64>> {
    let prior = prior_row(kappa, t_abs2, m_max)?;
    let mass: f64 = prior.iter().sum();
    if mass <= PRIOR_MASS_TARGET {
        return Err(Error::numerical(format!(
            "photon-number cutoff {m_max} keeps prior mass {mass:.12}, missing {:.3e} > 1e-10",
            1.0 - mass
        )));
    }
    Ok(prior)
}

/// Probability of k coincidences, P̃_{N,η}(k) = Σ_m P̃_{N,η}(k|m)·P(m).
pub fn coincidence_prior(
    det: &DetectorModel,
    kappa: f64,
    t_abs2: f64,
    k: usize,
    m_max: usize,
) -> Result<f64> {
    if k > det.n_diodes {
        return Err(Error::domain(format!(
            "{k} coincidences exceed {} diodes",
            det.n_diodes
        )));
    }
    let prior = checked_prior(kappa, t_abs2, m_max)?;
    let table = det.response_table(m_max)?;
    Ok(prior
        .iter()
        .zip(&table)
        .map(|(p, row)| p * row.get(k).copied().unwrap_or(0.0))
        .sum())
}

/// Conditional state after k coincidences: a mixture of the pure
/// m-photon conditional states weighted by P(m|k).
#[derive(Debug, Clone, Serialize)]
pub struct PosteriorMixture {
    k: usize,
    prior_prob: f64,
    m_max: usize,
    weights: Vec<f64>,
    states: Vec<ConditionalState>,
}

impl PosteriorMixture {
    /// Mixture from explicit weights over m = 0..; zero weights carry no state.
    pub fn from_weights(alpha: f64, k: usize, prior_prob: f64, weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::domain(
                "mixture weights must be finite and nonnegative",
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("mixture weights sum to {total}")));
        }
        let states = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(m, _)| ConditionalState::new(alpha, m))
            .collect::<Result<Vec<_>>>()?;
        let m_max = weights.len().saturating_sub(1);
        Ok(Self {
            k,
            prior_prob,
            m_max,
            weights,
            states,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn prior_prob(&self) -> f64 {
        self.prior_prob
    }

    /// Photon-number cutoff used for the posterior.
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// P(m|k) for m = 0..=m_max.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Pure states with nonzero weight, in increasing m.
    pub fn states(&self) -> &[ConditionalState] {
        &self.states
    }

    /// (weight, state) pairs with nonzero weight.
    pub fn components(&self) -> impl Iterator<Item = (f64, &ConditionalState)> {
        self.states.iter().map(|s| (self.weights[s.m()], s))
    }

    /// Same mixture with every component turned in phase space, as produced
    /// by a complex α with phase 2·rotation.
    pub fn with_rotation(mut self, rotation: f64) -> Self {
        self.states = self.states.into_iter().map(|s| s.with_rotation(rotation)).collect();
        self
    }

    /// Photon-number distribution Σ_m P(m|k)·|c_{m,n}|² over the longest support.
    pub fn photon_number_distribution(&self) -> Vec<f64> {
        let len = self.states.iter().map(|s| s.n_max() + 1).max().unwrap_or(0);
        let mut out = vec![0.0; len];
        for (w, s) in self.components() {
            for (n, p) in s.coefficients().probabilities().iter().enumerate() {
                out[n] += w * p;
            }
        }
        out
    }

    /// Per-component evaluation setup, for repeated point evaluation.
    pub fn evaluator(&self) -> Result<MixtureEvaluator> {
        let parts = self
            .components()
            .map(|(w, s)| Ok((w, Evaluator::new(s)?)))
            .collect::<Result<_>>()?;
        Ok(MixtureEvaluator { parts })
    }
}

/// Prepared mixture: closed forms up to the closed-form photon-number cap,
/// Fock-basis sums beyond it.
pub struct MixtureEvaluator {
    parts: Vec<(f64, Evaluator)>,
}

impl MixtureEvaluator {
    pub fn wigner(&self, x: f64, p: f64) -> f64 {
        self.parts.iter().map(|(w, e)| w * e.wigner(x, p)).sum()
    }

    pub fn quadrature(&self, phi: f64, x: f64) -> f64 {
        self.parts
            .iter()
            .map(|(w, e)| w * e.quadrature(phi, x))
            .sum()
    }

    pub fn husimi(&self, x: f64, p: f64) -> f64 {
        self.parts.iter().map(|(w, e)| w * e.husimi(x, p)).sum()
    }
}

/// Closed form where supported, Fock-basis sum beyond the closed-form cap.
enum Evaluator {
    Closed(EvalContext),
    Fock(FockVector),
}

impl Evaluator {
    fn new(state: &ConditionalState) -> Result<Self> {
        if state.m() <= MAX_CLOSED_M {
            Ok(Self::Closed(EvalContext::new(state)?))
        } else {
            Ok(Self::Fock(frame_vector(state)))
        }
    }

    fn wigner(&self, x: f64, p: f64) -> f64 {
        match self {
            Self::Closed(ctx) => wigner_closed(ctx, x, p),
            Self::Fock(v) => wigner_oracle(v, x, p),
        }
    }

    fn quadrature(&self, phi: f64, x: f64) -> f64 {
        match self {
            Self::Closed(ctx) => quadrature_closed(ctx, phi, x),
            Self::Fock(v) => quadrature_oracle(v, phi, x),
        }
    }

    fn husimi(&self, x: f64, p: f64) -> f64 {
        match self {
            Self::Closed(ctx) => husimi_closed(ctx, x, p),
            Self::Fock(v) => husimi_oracle(v, x, p),
        }
    }
}

/// Bayes posterior P(m|k) = P̃_{N,η}(k|m)·P(m)/P̃_{N,η}(k) and the resulting
/// mixture of conditional states with α = |T|²κ.
pub fn posterior_mixture(
    det: &DetectorModel,
    kappa: f64,
    t_abs2: f64,
    k: usize,
    m_max: usize,
) -> Result<PosteriorMixture> {
    if k > det.n_diodes {
        return Err(Error::domain(format!(
            "{k} coincidences exceed {} diodes",
            det.n_diodes
        )));
    }
    let prior = checked_prior(kappa, t_abs2, m_max)?;
    let table = det.response_table(m_max)?;
    let joint: Vec<f64> = prior
        .iter()
        .zip(&table)
        .map(|(p, row)| p * row.get(k).copied().unwrap_or(0.0))
        .collect();
    let evidence: f64 = joint.iter().sum();
    if !(evidence > 0.0) {
        return Err(Error::zero_probability(format!(
            "no probability of recording {k} coincidences (κ = {kappa}, |T|² = {t_abs2})"
        )));
    }
    let weights = joint.iter().map(|j| j / evidence).collect();
    PosteriorMixture::from_weights(t_abs2 * kappa, k, evidence, weights)
}

/// Σ_m P(m|k)·W(x, p|m).
pub fn mixture_wigner(mix: &PosteriorMixture, x: f64, p: f64) -> Result<f64> {
    Ok(mix.evaluator()?.wigner(x, p))
}

/// Σ_m P(m|k)·p(x, φ|m).
pub fn mixture_quadrature(mix: &PosteriorMixture, phi: f64, x: f64) -> Result<f64> {
    Ok(mix.evaluator()?.quadrature(phi, x))
}

/// Tr ϱ² = Σ_{m,m'} P(m|k)P(m'|k)·|⟨Ψ_m|Ψ_{m'}⟩|².
pub fn purity(mix: &PosteriorMixture) -> f64 {
    let parts: Vec<(f64, &FockVector)> = mix
        .components()
        .map(|(w, s)| (w, s.coefficients()))
        .collect();
    let mut total = 0.0;
    for (i, (wi, vi)) in parts.iter().enumerate() {
        total += wi * wi;
        for (wj, vj) in &parts[i + 1..] {
            total += 2.0 * wi * wj * vi.inner(vj).norm_sqr();
        }
    }
    total
}

/// Fringe strength of a mixture: peak-to-trough range of W along the
/// segment between the two lobes (p = 0, |x| ≤ 2 in the phase-space frame),
/// sampled at 401 points.
pub fn fringe_amplitude(mix: &PosteriorMixture) -> Result<f64> {
    let points: Vec<(f64, f64)> = (0..401).map(|i| (-2.0 + 0.01 * i as f64, 0.0)).collect();
    let eval = mix.evaluator()?;
    let w: Vec<f64> = points.iter().map(|&(x, p)| eval.wigner(x, p)).collect();
    let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(hi - lo)
}
