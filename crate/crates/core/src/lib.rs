//! Single-photon transport through a waveguide chirally coupled to a
//! two-level or laser-driven Λ-type emitter.
//!
//! * [`model`]: coupling rates, laser drive and emitter description.
//! * [`scattering`]: closed-form amplitudes and diode figures of merit.
//! * [`tuner`]: laser settings for blocking and passing at a given detuning.
//! * [`oracle`]: time-domain wavepacket simulation used to check the closed forms.
//! * [`io`]: scenario files, result tables and the command implementations
//!   behind the `chiral-diode` binary.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod io;
pub mod model;
pub mod oracle;
pub mod scattering;
pub mod tuner;

pub use model::{chirality, CouplingRates, Detuning, EmitterSpec, LaserDrive, ModelError};
pub use scattering::{
    amplitudes_lambda, amplitudes_two_level, delta_t_closed_form, max_reflection, scatter, spectrum,
    ScatteringError, ScatteringResult,
};
