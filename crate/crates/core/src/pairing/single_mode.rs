//! Perturbative g2 for a single damped vibrational mode coupled to a Stokes
//! and an anti-Stokes photon mode, the setting of the density-matrix model.
//!
//! Leading-order rates over an evolution time `t`, with `d = shift - nu`
//! and `gamma = 1/t1`:
//!
//! * correlated pairs `C = |2 g_s g_as Δ(shift)|² t²`, with `Δ` the
//!   single-mode gap of unit weight;
//! * real Stokes photons `g_s² gamma t / (d² + gamma²/4)` (Lorentzian line);
//! * thermal anti-Stokes `n_th g_as² gamma t / (d² + gamma²/4)`.
//!
//! Every pair also delivers one Stokes and one anti-Stokes photon, so the
//! accidental rate is `(S_real + C)(A_th + C)` and `g2 = 1 + C/U`.

use serde::{Deserialize, Serialize};

use super::gap::{gap_delta, GapParameters};
use crate::error::{Error, Result};
use crate::spectrum_io::VibrationalMode;
use crate::statistics::{accidental_model, BackgroundModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleModeSetup {
    pub nu: f64,
    pub t1: f64,
    pub g_s: f64,
    pub g_as: f64,
    pub n_thermal: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleModePoint {
    pub shift: f64,
    pub g2: f64,
    pub correlated: f64,
    pub stokes: f64,
    pub thermal_as: f64,
}

pub fn single_mode_g2(shift: f64, setup: &SingleModeSetup) -> Result<SingleModePoint> {
    let SingleModeSetup { nu, t1, g_s, g_as, n_thermal, duration } = *setup;
    if !(t1.is_finite() && t1 > 0.0) {
        return Err(Error::Config(format!("perturbative engine needs a finite t1 > 0, got {t1}")));
    }
    if g_s == 0.0 || g_as == 0.0 {
        return Err(Error::Undefined("no pair generation".into()));
    }
    let gamma = 1.0 / t1;
    let mode = VibrationalMode { nu, weight: 1.0, gamma };
    let gap = gap_delta(shift, &mode, &GapParameters::default());
    let correlated = (2.0 * g_s * g_as * duration).powi(2) * gap.norm_sqr();

    let d = shift - nu;
    let line = gamma * duration / (d * d + gamma * gamma / 4.0);
    let stokes_real = g_s * g_s * line;
    let thermal_as = n_thermal * g_as * g_as * line;

    let bg = BackgroundModel::new(stokes_real + correlated, thermal_as, correlated)?;
    let accidental = accidental_model(&bg, 1.0);
    Ok(SingleModePoint {
        shift,
        g2: 1.0 + correlated / accidental,
        correlated,
        stokes: stokes_real + correlated,
        thermal_as,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> SingleModeSetup {
        SingleModeSetup { nu: 1640.0, t1: 0.5, g_s: 0.1, g_as: 0.1, n_thermal: 3.4e-4, duration: 10.0 }
    }

    #[test]
    fn far_detuned_pair_rate_matches_rotating_wave_estimate() {
        // |2 Δ| -> 1/|d| close to the mode, so C -> (g_s g_as t / d)^2
        let p = single_mode_g2(1660.0, &setup()).unwrap();
        let rwa = (0.1f64 * 0.1 * 10.0 / 20.0).powi(2);
        assert!((p.correlated / rwa - 1.0).abs() < 0.02);
    }

    #[test]
    fn g2_grows_with_detuning() {
        let s = setup();
        let near = single_mode_g2(1650.0, &s).unwrap().g2;
        let far = single_mode_g2(1700.0, &s).unwrap().g2;
        assert!(far > near && near > 1.0);
    }

    #[test]
    fn decoupled_is_undefined() {
        let mut s = setup();
        s.g_s = 0.0;
        assert!(single_mode_g2(1700.0, &s).is_err());
    }
}
