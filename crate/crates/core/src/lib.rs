//! Single-photon transport through a one-dimensional waveguide that is
//! side-coupled to a periodic chain of two-level emitters.
//!
//! All rates and detunings are expressed in units of the waveguide decay
//! rate `gamma`, which is nonetheless kept as an explicit field so that the
//! scale invariance of the model can be checked rather than assumed.
//!
//! Module map:
//!
//! * [`model`] – the emitter chain, probe detuning and scattering result types.
//! * [`transfer`] – transfer-matrix products, the commensurate closed form and
//!   two independent oracles (multiple-scattering series, global linear solve).
//! * [`transparency`] – parity-dependent detuning protocols, resonant floor and
//!   collective linewidth extraction.
//! * [`cavity`] – N emitters inside a driven two-mirror cavity.
//! * [`nonreciprocity`] – two-atom reflection asymmetry and its maximisation.
//! * [`optimize`] – grid scan and golden-section search.

pub mod cavity;
mod error;
pub mod grid;
pub mod model;
pub mod nonreciprocity;
pub mod optimize;
pub mod transfer;
pub mod transparency;

pub use error::{Error, Result};
pub use grid::SweepGrid;
pub use model::{build_chain, scaled_detunings, EmitterChain, ProbeDetuning, ScatteringResult, Transfer2x2};
