//! Conditional Schrödinger-cat-like states of a single optical mode.
//!
//! A squeezed vacuum enters one port of a lossless beam splitter, the other
//! port is left in vacuum, and photons are counted in one output channel.
//! The remaining channel is left in a state that superposes two
//! well-separated, nearly coherent components. This crate builds those
//! states, evaluates their photon-number and quadrature distributions and
//! their Wigner and Husimi functions in closed form, and models a realistic
//! multiplexed on/off detector. Every closed form has a brute-force
//! truncated-Fock-space counterpart it is tested against.
//!
//! Modules:
//!
//! * [`specfun`]: Hermite polynomials, log-factorials, ₂F₁, D₋ₘ₋₁ and the
//!   Hermite summation identities.
//! * [`states`]: squeezed vacuum, beam-splitter oracle, conditional and
//!   component states.
//! * [`phasespace`]: photon statistics, quadrature, Wigner and Husimi
//!   functions.
//! * [`detection`]: photon chopping, loss, Bayes posterior and mixed
//!   conditional states.
//! * [`verify`]: the oracle cross-check suite as a runtime report.

pub mod detection;
pub mod error;
pub mod phasespace;
pub mod quad;
pub mod specfun;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
