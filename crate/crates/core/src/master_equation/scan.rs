use serde::{Deserialize, Serialize};

use super::density::DensityOperator;
use super::integrator::{evolve, EvolveOptions};
use super::model::ModelConfig;
use super::observables::{g2_cross, PhotonMoments};
use crate::defaults;
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::pairing::Regime;
use crate::statistics::bose_einstein;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Sets `n_thermal` from the Bose-Einstein occupation of `nu`; the
    /// template's value is kept when `None`.
    pub temperature: Option<f64>,
    pub dt: Option<f64>,
    pub check_positivity: bool,
    pub exec: ExecMode,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            temperature: Some(defaults::TEMPERATURE_K),
            dt: None,
            check_positivity: true,
            exec: ExecMode::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ScanFlags {
    pub near_resonance: bool,
    /// A photon mode stayed empty; g2 reported as 1.
    pub no_pair_generation: bool,
}

impl ScanFlags {
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.near_resonance {
            parts.push("near_resonance");
        }
        if self.no_pair_generation {
            parts.push("no_pair_generation");
        }
        parts.join("|")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub shift: f64,
    pub g2: f64,
    pub g2_norm: f64,
    pub mean_s: f64,
    pub mean_as: f64,
    pub regime: Regime,
    pub flags: ScanFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCurve {
    pub t1: f64,
    pub points: Vec<ScanPoint>,
}

impl ScanCurve {
    pub fn point_at(&self, shift: f64) -> Option<&ScanPoint> {
        self.points.iter().find(|p| (p.shift - shift).abs() < 1e-9 * shift.abs().max(1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// Template with `n_thermal` resolved; `shift` and `t1` vary per point.
    pub config: ModelConfig,
    pub curves: Vec<ScanCurve>,
}

impl ScanResult {
    /// CSV with columns `shift_cm1,g2_norm,overlap,regime,t1,nu,g_s,g_as,n_max,g2,flags`.
    /// The overlap column is empty: the model has no filter bands.
    pub fn to_csv(&self, preamble: &[String]) -> String {
        let mut out = String::new();
        for line in preamble {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("shift_cm1,g2_norm,overlap,regime,t1,nu,g_s,g_as,n_max,g2,flags\n");
        let c = &self.config;
        for curve in &self.curves {
            for p in &curve.points {
                out.push_str(&format!(
                    "{},{},,{},{},{},{},{},{},{},{}\n",
                    p.shift,
                    p.g2_norm,
                    p.regime.as_str(),
                    curve.t1,
                    c.nu,
                    c.g_s,
                    c.g_as,
                    c.n_max,
                    p.g2,
                    p.flags.label()
                ));
            }
        }
        out
    }
}

/// Whether `|shift - nu|` is within the near-resonance window of `config`.
pub fn is_near_resonance(config: &ModelConfig) -> bool {
    let scale = config.g_s.max(config.g_as).max(config.gamma1());
    config.detuning().abs() <= defaults::NEAR_RESONANCE_FACTOR * scale
}

/// Evolves one configuration from photon vacuum with a thermal phonon and
/// returns g2 at the end of the pulse.
pub fn simulate_point(config: &ModelConfig, dt: Option<f64>, check_positivity: bool) -> Result<ScanPoint> {
    let rho0 = DensityOperator::thermal_phonon(config.n_max, config.n_thermal);
    let opts = EvolveOptions { dt, t_end: config.pulse_duration, store_every: 0, check_positivity };
    let traj = evolve(&rho0, config, &opts)?;
    let rho = traj.last();
    let moments = PhotonMoments::of(rho);
    let near = is_near_resonance(config);
    let (g2, no_pairs) = match g2_cross(rho) {
        Ok(g) => (g, false),
        Err(Error::Undefined(_)) => (1.0, true),
        Err(e) => return Err(e),
    };
    Ok(ScanPoint {
        shift: config.shift,
        g2,
        g2_norm: g2,
        mean_s: moments.mean_s,
        mean_as: moments.mean_as,
        regime: if near { Regime::NearResonance } else { Regime::Virtual },
        flags: ScanFlags { near_resonance: near, no_pair_generation: no_pairs },
    })
}

/// One g2-versus-shift curve per `t1`, each normalized to its maximum.
pub fn scan_resonance(template: &ModelConfig, shifts: &[f64], t1s: &[f64], opts: &ScanOptions) -> Result<ScanResult> {
    if shifts.is_empty() || t1s.is_empty() {
        return Err(Error::Config("scan needs at least one shift and one t1".into()));
    }
    let mut config = *template;
    if let Some(t) = opts.temperature {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Config(format!("temperature {t} must be >= 0")));
        }
        config.n_thermal = bose_einstein(config.nu, t);
    }
    config.validate()?;
    for &t1 in t1s {
        ModelConfig { t1, ..config }.validate()?;
    }

    let jobs: Vec<(f64, f64)> = t1s.iter().flat_map(|&t1| shifts.iter().map(move |&s| (t1, s))).collect();
    let results = opts.exec.map(&jobs, |&(t1, shift)| {
        simulate_point(&ModelConfig { shift, t1, ..config }, opts.dt, opts.check_positivity)
            .map_err(|e| Error::Scan { shift, t1, source: Box::new(e) })
    });
    let mut points = results.into_iter().collect::<Result<Vec<_>>>()?.into_iter();

    let mut curves = Vec::with_capacity(t1s.len());
    for &t1 in t1s {
        let mut curve: Vec<ScanPoint> = points.by_ref().take(shifts.len()).collect();
        let max = curve.iter().map(|p| p.g2).fold(f64::NEG_INFINITY, f64::max);
        for p in &mut curve {
            p.g2_norm = p.g2 / max;
        }
        curves.push(ScanCurve { t1, points: curve });
    }
    Ok(ScanResult { config, curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_scan_is_flat_and_flagged() {
        let template = ModelConfig { g_s: 0.0, g_as: 0.0, pulse_duration: 1.0, ..Default::default() };
        let r = scan_resonance(&template, &[1600.0, 1640.0, 1680.0], &[0.5], &ScanOptions::default()).unwrap();
        for p in &r.curves[0].points {
            assert_eq!(p.g2, 1.0);
            assert!(p.flags.no_pair_generation);
        }
    }

    #[test]
    fn scan_error_names_the_point() {
        let template = ModelConfig { pulse_duration: 1.0, ..Default::default() };
        let opts = ScanOptions { dt: Some(0.5), ..Default::default() };
        match scan_resonance(&template, &[1700.0], &[0.5], &opts) {
            Err(Error::Scan { shift, t1, source }) => {
                assert_eq!((shift, t1), (1700.0, 0.5));
                assert!(matches!(*source, Error::StepSize { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn resonance_window_uses_the_largest_rate() {
        let cfg = ModelConfig { shift: 1649.0, t1: 0.5, ..Default::default() };
        assert!(is_near_resonance(&cfg));
        assert!(!is_near_resonance(&ModelConfig { shift: 1651.0, ..cfg }));
    }
}
