//! Special-function kernel.
//!
//! Everything here is a pure function of its arguments. Factorials and Γ
//! ratios go through log space so that coefficients like (n+m)!/√(n!) can be
//! formed near n ≈ 150 and beyond without overflow.

mod erf;
mod gamma;
mod hermite;
mod hyper;
mod parabolic;
mod sums;

pub use erf::{erfc, erfc_complex};
pub use gamma::{gamma, ln_binomial, ln_factorial, ln_gamma, log_gamma_half, LogFactorialTable};
pub use hermite::{hermite, hermite_complex, hermite_real, hermite_sequence, HermiteSequence};
pub use hyper::{gauss_2f1, MAX_2F1_TERMS};
pub use parabolic::parabolic_cylinder_neg;
pub use sums::{
    hermite_generating_function, hermite_generating_sum, mehler_sum, shifted_mehler_series,
    shifted_mehler_series_with_mass, shifted_mehler_sum,
};
