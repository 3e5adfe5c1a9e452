//! Correlation estimators, thermal occupation, accidental-coincidence
//! background and the Cauchy-Schwarz classicality bound.

mod background;
mod cauchy_schwarz;
mod counts;
pub mod sampling;
mod thermal;

pub use background::{
    accidental_model, anti_stokes_background, AntiStokesModel, BackgroundModel,
    FrequencyPrefactor,
};
pub use cauchy_schwarz::{cauchy_schwarz_check, CsVerdict};
pub use counts::{g2_from_counts, CountEstimates, CountRecord, Estimate};
pub use thermal::{anti_stokes_ratio, bose_einstein};
