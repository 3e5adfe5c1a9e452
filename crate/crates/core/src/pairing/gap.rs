use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::Summation;
use crate::defaults;
use crate::error::{Error, Result};
use crate::spectrum_io::{VibrationalMode, VibrationalModeSet};

/// Pump-dependent scale of the gap. Frequencies are wavenumbers (cm^-1)
/// with hbar = 1, so the gap carries units of 1/cm^-1 times the weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapParameters {
    /// Squared laser amplitude, relative.
    pub laser_intensity: f64,
}

impl Default for GapParameters {
    fn default() -> Self {
        Self { laser_intensity: defaults::LASER_INTENSITY }
    }
}

impl GapParameters {
    pub fn new(laser_intensity: f64) -> Result<Self> {
        if !(laser_intensity.is_finite() && laser_intensity > 0.0) {
            return Err(Error::InvalidInput(format!(
                "laser intensity {laser_intensity} must be > 0"
            )));
        }
        Ok(Self { laser_intensity })
    }
}

/// Pair coupling mediated by one vibrational mode at symmetric shift `shift`:
///
/// `w L nu / (shift^2 - nu^2 + i nu gamma)`.
///
/// The linewidth removes the pole at `shift = nu`. A negative real part is
/// attractive and occurs for `shift < nu`.
#[inline]
pub fn gap_delta(shift: f64, mode: &VibrationalMode, params: &GapParameters) -> Complex64 {
    let numerator = mode.weight * params.laser_intensity * mode.nu;
    let denominator = Complex64::new(shift * shift - mode.nu * mode.nu, mode.nu * mode.gamma);
    numerator / denominator
}

/// Coherent sum of the gap over all modes: the first-order amplitude of the
/// two-photon state at shifts `±shift`, up to a global constant.
pub fn pair_amplitude(shift: f64, modes: &VibrationalModeSet, params: &GapParameters) -> Complex64 {
    modes.modes().iter().map(|m| gap_delta(shift, m, params)).sum()
}

/// Squared pair amplitude, coherent (|Σ Δ|²) or incoherent (Σ |Δ|²).
pub fn pair_intensity(
    shift: f64,
    modes: &VibrationalModeSet,
    params: &GapParameters,
    summation: Summation,
) -> f64 {
    match summation {
        Summation::Coherent => pair_amplitude(shift, modes, params).norm_sqr(),
        Summation::Incoherent => modes
            .modes()
            .iter()
            .map(|m| gap_delta(shift, m, params).norm_sqr())
            .sum(),
    }
}
