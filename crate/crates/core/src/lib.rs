//! Stokes/anti-Stokes photon-pair correlations in Raman-active media.
//!
//! * [`spectrum_io`]: Raman spectra, resampling and mode discretization.
//! * [`pairing`]: the perturbative virtual-phonon pairing model and its
//!   g2(0) curve across filter band centers.
//! * [`master_equation`]: non-perturbative single-mode Lindblad model.
//! * [`statistics`]: count estimators, thermal factors, backgrounds and
//!   the Cauchy-Schwarz bound.

pub mod defaults;
mod error;
pub mod exec;
pub mod master_equation;
pub mod pairing;
pub mod spectrum_io;
pub mod statistics;

pub use error::{Error, Result};
pub use exec::ExecMode;
