use serde::{Deserialize, Serialize};

use super::thermal::anti_stokes_ratio;
use crate::defaults;
use crate::error::{Error, Result};
use crate::pairing::{BandQuadrature, FilterBand};
use crate::spectrum_io::RamanSpectrum;

/// Optional `((w_L + δ) / (w_L - δ))^k` correction to the thermal ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPrefactor {
    /// Laser line, cm^-1 (absolute wavenumber).
    pub laser_cm1: f64,
    pub exponent: f64,
}

/// How the anti-Stokes intensity is derived from the Stokes spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AntiStokesModel {
    /// Off by default: plain Bose-Einstein ratio.
    pub prefactor: Option<FrequencyPrefactor>,
}

impl AntiStokesModel {
    pub fn ratio(&self, shift: f64, temperature: f64) -> f64 {
        let base = anti_stokes_ratio(shift, temperature);
        match self.prefactor {
            None => base,
            Some(p) => base * ((p.laser_cm1 + shift) / (p.laser_cm1 - shift)).powf(p.exponent),
        }
    }
}

/// Thermal anti-Stokes rate transmitted by `band`:
/// `∫ I_S(δ) n/(n+1) T_aS(δ) dδ`.
pub fn anti_stokes_background(
    spectrum: &RamanSpectrum,
    band: &FilterBand,
    temperature: f64,
    model: &AntiStokesModel,
) -> Result<f64> {
    let (lo, hi) = band.support();
    if !spectrum.covers(lo, hi) {
        return Err(Error::OutsideSupport(format!(
            "band [{lo}, {hi}] outside spectrum `{}`",
            spectrum.medium()
        )));
    }
    let q = BandQuadrature::single(band, defaults::QUADRATURE_NODES);
    Ok(q.integrate(|x| spectrum.intensity_at(x) * model.ratio(x, temperature)))
}

/// Per-window mean rates entering the accidental-coincidence estimate.
/// All rates are per unit laser scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackgroundModel {
    pub stokes_rate: f64,
    pub thermal_as_rate: f64,
    /// Anti-Stokes photons fed by the correlated process itself; 0 disables.
    pub sas_as_rate: f64,
}

impl BackgroundModel {
    pub fn new(stokes_rate: f64, thermal_as_rate: f64, sas_as_rate: f64) -> Result<Self> {
        for (name, v) in [
            ("stokes_rate", stokes_rate),
            ("thermal_as_rate", thermal_as_rate),
            ("sas_as_rate", sas_as_rate),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!("{name} = {v} must be >= 0")));
            }
        }
        Ok(Self { stokes_rate, thermal_as_rate, sas_as_rate })
    }
}

/// Uncorrelated coincidence rate `<n_S><n_aS>` at a given laser scale:
/// Stokes and thermal anti-Stokes grow linearly with the pump, the
/// SaS-fed anti-Stokes quadratically.
pub fn accidental_model(background: &BackgroundModel, laser_scale: f64) -> f64 {
    let s = background.stokes_rate * laser_scale;
    let a = background.thermal_as_rate * laser_scale + background.sas_as_rate * laser_scale * laser_scale;
    s * a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(lo: f64, hi: f64) -> RamanSpectrum {
        let pts: Vec<(f64, f64)> = (0..=100).map(|i| (lo + (hi - lo) * i as f64 / 100.0, 1.0)).collect();
        RamanSpectrum::from_pairs("flat", &pts).unwrap()
    }

    #[test]
    fn zero_temperature_background_vanishes() {
        let s = flat(500.0, 4000.0);
        let band = FilterBand::tophat(2000.0, 100.0).unwrap();
        let m = AntiStokesModel::default();
        assert_eq!(anti_stokes_background(&s, &band, 0.0, &m).unwrap(), 0.0);
    }

    #[test]
    fn narrow_band_at_1640() {
        let s = flat(500.0, 4000.0);
        let band = FilterBand::tophat(1640.0, 2.0).unwrap();
        let bg = anti_stokes_background(&s, &band, 295.0, &AntiStokesModel::default()).unwrap();
        let expected = 3.35994e-4 * 2.0;
        assert!((bg - expected).abs() / expected < 1e-3, "{bg}");
    }

    #[test]
    fn band_outside_support() {
        let s = flat(500.0, 1000.0);
        let band = FilterBand::tophat(2000.0, 100.0).unwrap();
        assert!(matches!(
            anti_stokes_background(&s, &band, 295.0, &AntiStokesModel::default()),
            Err(Error::OutsideSupport(_))
        ));
    }

    #[test]
    fn prefactor_raises_ratio() {
        let m = AntiStokesModel { prefactor: Some(FrequencyPrefactor { laser_cm1: 12500.0, exponent: 4.0 }) };
        let r = m.ratio(1640.0, 295.0) / anti_stokes_ratio(1640.0, 295.0);
        assert!((r - (14140.0f64 / 10860.0).powi(4)).abs() < 1e-12);
    }

    #[test]
    fn pure_thermal_background_is_pump_independent() {
        let bg = BackgroundModel::new(2.0, 0.01, 0.0).unwrap();
        let c = |l: f64| 5.0 * l * l;
        let r1 = c(1.0) / accidental_model(&bg, 1.0);
        let r2 = c(2.0) / accidental_model(&bg, 2.0);
        assert!((r1 - r2).abs() < 1e-12 * r1);
    }

    #[test]
    fn sas_term_lowers_correlation_with_pump() {
        let bg = BackgroundModel::new(2.0, 0.01, 0.3).unwrap();
        let c = |l: f64| 5.0 * l * l;
        assert!(c(2.0) / accidental_model(&bg, 2.0) < c(1.0) / accidental_model(&bg, 1.0));
    }

    #[test]
    fn zero_stokes_gives_zero_rate() {
        let bg = BackgroundModel::new(0.0, 0.01, 0.3).unwrap();
        assert_eq!(accidental_model(&bg, 1.0), 0.0);
        assert!(BackgroundModel::new(-1.0, 0.0, 0.0).is_err());
    }
}
