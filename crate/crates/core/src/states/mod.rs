//! Input, output, conditional and component states.
//!
//! The closed forms for the conditional state are always paired with the
//! brute-force route: squeeze the vacuum, push it through the splitter in a
//! truncated two-mode Fock space, and project the second mode on |m⟩.

mod beam_splitter;
mod component;
mod conditional;
mod fock;
mod squeeze;

pub use beam_splitter::{
    apply_beam_splitter, apply_beam_splitter_two_mode, conditional_from_oracle,
    oracle_event_probability, photon_block, BeamSplitterParams, TwoModeFockMatrix,
};
pub use component::{
    component_norm_closed, component_state, component_truncation, superposition_constant,
    ComponentState,
};
pub use conditional::{
    conditional_coefficients, event_probability, ln_normalization_closed, normalization_closed,
    oracle_truncation, truncation, ConditionalState,
};
pub use fock::FockVector;
pub use squeeze::{squeezed_truncation, squeezed_vacuum, SqueezeParams};
