//! Virtual-phonon pairing: the bosonic gap, the first-order pair amplitude
//! and the normalized g2(0) curve predicted from a Raman spectrum.

mod curve;
mod filter;
mod gap;
mod single_mode;

pub use curve::{
    evaluate_point, predict_g2_curve, predict_with_modes, CorrelationCurve, CorrelationPoint,
    PointEvaluation, PointFlags, PredictOptions, Regime, Summation,
};
pub use filter::{band_overlap, BandQuadrature, FilterBand, FilterShape};
pub use gap::{gap_delta, pair_amplitude, pair_intensity, GapParameters};
pub use single_mode::{single_mode_g2, SingleModePoint, SingleModeSetup};
