use serde::{Deserialize, Serialize};

use super::filter::{band_overlap, BandQuadrature, FilterBand, FilterShape};
use super::gap::{pair_intensity, GapParameters};
use crate::defaults;
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::spectrum_io::{discretize_modes, RamanSpectrum, VibrationalModeSet};
use crate::statistics::{accidental_model, AntiStokesModel, BackgroundModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Summation {
    #[default]
    Coherent,
    Incoherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// No mode within three linewidths of the band.
    Virtual,
    /// A mode lies inside the band widened by its own linewidth.
    NearResonance,
    /// A mode lies within three linewidths, but not within one.
    Mixed,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Virtual => "virtual",
            Regime::NearResonance => "near_resonance",
            Regime::Mixed => "mixed",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "virtual" => Ok(Regime::Virtual),
            "near_resonance" => Ok(Regime::NearResonance),
            "mixed" => Ok(Regime::Mixed),
            other => Err(Error::InvalidInput(format!("unknown regime `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PointFlags {
    /// Thermal anti-Stokes background per unit bandwidth below the floor.
    pub low_signal: bool,
    /// Accidental rate is zero: g2 cannot be formed.
    pub undefined: bool,
}

impl PointFlags {
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.low_signal {
            parts.push("low_signal");
        }
        if self.undefined {
            parts.push("undefined");
        }
        parts.join("|")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictOptions {
    pub band_width: f64,
    pub shape: FilterShape,
    /// Overrides the spectrum's temperature when set.
    pub temperature: Option<f64>,
    pub threshold: f64,
    pub default_gamma: Option<f64>,
    /// Weight of the SaS-fed anti-Stokes term in the accidental rate.
    pub sas_feedback: f64,
    pub summation: Summation,
    pub anti_stokes: AntiStokesModel,
    pub quadrature_nodes: usize,
    pub low_signal_floor: f64,
}

impl Default for PredictOptions {
    fn default() -> Self {
        Self {
            band_width: defaults::BAND_WIDTH,
            shape: FilterShape::Tophat,
            temperature: None,
            threshold: defaults::THRESHOLD,
            default_gamma: None,
            sas_feedback: defaults::SAS_FEEDBACK,
            summation: Summation::Coherent,
            anti_stokes: AntiStokesModel::default(),
            quadrature_nodes: defaults::QUADRATURE_NODES,
            low_signal_floor: defaults::LOW_SIGNAL_FLOOR,
        }
    }
}

/// Everything computed for one pair of filter bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEvaluation {
    /// Correlated coincidence rate `∫ |A|² T_S T_aS`.
    pub correlated: f64,
    pub background: BackgroundModel,
    /// Uncorrelated rate `<n_S><n_aS>`.
    pub accidental: f64,
    /// `1 + C/U`, absent when `U = 0`.
    pub g2_raw: Option<f64>,
    pub overlap: f64,
    pub low_signal: bool,
}

/// Evaluates one (Stokes, anti-Stokes) band pair. `spectrum` supplies the
/// Stokes intensity, `modes` the pair amplitude.
pub fn evaluate_point(
    spectrum: &RamanSpectrum,
    modes: &VibrationalModeSet,
    stokes: &FilterBand,
    antistokes: &FilterBand,
    params: &GapParameters,
    opts: &PredictOptions,
) -> Result<PointEvaluation> {
    for band in [stokes, antistokes] {
        let (lo, hi) = band.support();
        if !spectrum.covers(lo, hi) {
            let (a, b) = spectrum.shift_range();
            return Err(Error::OutsideSupport(format!(
                "band [{lo}, {hi}] outside spectrum `{}` [{a}, {b}]",
                spectrum.medium()
            )));
        }
    }
    let temperature = opts.temperature.unwrap_or(spectrum.temperature_k());
    let n = opts.quadrature_nodes;

    let pair = BandQuadrature::new(stokes, antistokes, n);
    let correlated = pair.integrate(|x| pair_intensity(x, modes, params, opts.summation));

    let stokes_rate = BandQuadrature::single(stokes, n).integrate(|x| spectrum.intensity_at(x));
    let as_quad = BandQuadrature::single(antistokes, n);
    let thermal_as_rate =
        as_quad.integrate(|x| spectrum.intensity_at(x) * opts.anti_stokes.ratio(x, temperature));
    let as_width = as_quad.integrate(|_| 1.0);

    let laser = params.laser_intensity;
    let per_unit_pump = correlated / (laser * laser);
    let background =
        BackgroundModel::new(stokes_rate, thermal_as_rate, opts.sas_feedback * per_unit_pump)?;
    let accidental = accidental_model(&background, laser);
    let g2_raw = (accidental > 0.0 && accidental.is_finite()).then(|| 1.0 + correlated / accidental);
    Ok(PointEvaluation {
        correlated,
        background,
        accidental,
        g2_raw,
        overlap: band_overlap(stokes, antistokes),
        low_signal: thermal_as_rate / as_width < opts.low_signal_floor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPoint {
    /// Band center, cm^-1.
    pub shift: f64,
    pub g2_raw: Option<f64>,
    /// `g2_raw` over the curve maximum.
    pub g2_norm: Option<f64>,
    pub overlap: f64,
    pub regime: Regime,
    pub correlated: f64,
    pub accidental: f64,
    pub flags: PointFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub medium: String,
    pub points: Vec<CorrelationPoint>,
}

impl CorrelationCurve {
    /// Largest defined raw g2.
    pub fn max_raw(&self) -> Option<f64> {
        self.points.iter().filter_map(|p| p.g2_raw).reduce(f64::max)
    }

    pub fn point_at(&self, shift: f64) -> Option<&CorrelationPoint> {
        self.points.iter().find(|p| (p.shift - shift).abs() < 1e-9 * shift.abs().max(1.0))
    }

    /// CSV with columns `shift_cm1,g2_norm,overlap,regime,flags`. Each
    /// preamble line is written first as a `#` comment.
    pub fn to_csv(&self, preamble: &[String]) -> String {
        let mut out = String::new();
        for line in preamble {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("shift_cm1,g2_norm,overlap,regime,flags\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.shift,
                p.g2_norm.unwrap_or(f64::NAN),
                p.overlap,
                p.regime.as_str(),
                p.flags.label()
            ));
        }
        out
    }
}

fn classify(center: f64, half_width: f64, modes: &VibrationalModeSet) -> Regime {
    let mut regime = Regime::Virtual;
    for m in modes.modes() {
        let distance = (m.nu - center).abs() - half_width;
        if distance <= m.gamma {
            return Regime::NearResonance;
        }
        if distance <= 3.0 * m.gamma {
            regime = Regime::Mixed;
        }
    }
    regime
}

/// Normalized g2(0) across symmetric band centers, with modes discretized
/// from the spectrum itself.
pub fn predict_g2_curve(
    spectrum: &RamanSpectrum,
    grid: &[f64],
    params: &GapParameters,
    opts: &PredictOptions,
    exec: ExecMode,
) -> Result<CorrelationCurve> {
    let spectrum = spectrum.normalized();
    let modes = discretize_modes(&spectrum, opts.threshold, opts.default_gamma)?;
    predict_with_modes(&spectrum, &modes, grid, params, opts, exec)
}

/// As [`predict_g2_curve`] with an explicit mode set.
pub fn predict_with_modes(
    spectrum: &RamanSpectrum,
    modes: &VibrationalModeSet,
    grid: &[f64],
    params: &GapParameters,
    opts: &PredictOptions,
    exec: ExecMode,
) -> Result<CorrelationCurve> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty band-center grid".into()));
    }
    if !(opts.band_width > 0.0) {
        return Err(Error::InvalidInput(format!("band width {}", opts.band_width)));
    }
    let spectrum = spectrum.normalized();
    let evaluated = exec.map(grid, |&center| -> Result<CorrelationPoint> {
        let band = FilterBand::new(center, opts.band_width, opts.shape)?;
        let e = evaluate_point(&spectrum, modes, &band, &band, params, opts)?;
        Ok(CorrelationPoint {
            shift: center,
            g2_raw: e.g2_raw,
            g2_norm: None,
            overlap: e.overlap,
            regime: classify(center, opts.band_width / 2.0, modes),
            correlated: e.correlated,
            accidental: e.accidental,
            flags: PointFlags { low_signal: e.low_signal, undefined: e.g2_raw.is_none() },
        })
    });
    let mut points = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
    let max = points.iter().filter_map(|p| p.g2_raw).fold(f64::NEG_INFINITY, f64::max);
    for p in &mut points {
        p.g2_norm = p.g2_raw.map(|g| g / max);
    }
    Ok(CorrelationCurve { medium: spectrum.medium().to_string(), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum_io::VibrationalMode;

    fn lorentz_spectrum(peaks: &[(f64, f64, f64)]) -> RamanSpectrum {
        let pts: Vec<(f64, f64)> = (0..=800)
            .map(|i| {
                let x = 200.0 + i as f64 * 5.0;
                let y = peaks
                    .iter()
                    .map(|&(c, h, w)| h * (w / 2.0).powi(2) / ((x - c).powi(2) + (w / 2.0).powi(2)))
                    .sum::<f64>();
                (x, y + 1e-3)
            })
            .collect();
        RamanSpectrum::from_pairs("test", &pts).unwrap()
    }

    #[test]
    fn normalized_curve_peaks_at_one() {
        let s = lorentz_spectrum(&[(1640.0, 0.2, 80.0), (3300.0, 1.0, 300.0)]);
        let grid: Vec<f64> = (0..30).map(|i| 1000.0 + 80.0 * i as f64).collect();
        let c = predict_g2_curve(&s, &grid, &GapParameters::default(), &PredictOptions::default(), ExecMode::Sequential).unwrap();
        let ones = c.points.iter().filter(|p| p.g2_norm == Some(1.0)).count();
        assert_eq!(ones, 1);
        assert!(c.points.iter().all(|p| p.g2_norm.unwrap() <= 1.0 && p.g2_norm.unwrap() > 0.0));
    }

    #[test]
    fn asymmetric_bands_give_no_correlation() {
        let s = lorentz_spectrum(&[(1640.0, 0.2, 80.0), (3300.0, 1.0, 300.0)]);
        let modes = discretize_modes(&s, 0.02, None).unwrap();
        let st = FilterBand::tophat(2000.0, 100.0).unwrap();
        let at = FilterBand::tophat(2300.0, 100.0).unwrap();
        let e = evaluate_point(&s, &modes, &st, &at, &GapParameters::default(), &PredictOptions::default()).unwrap();
        assert_eq!(e.overlap, 0.0);
        assert_eq!(e.correlated, 0.0);
        assert_eq!(e.g2_raw, Some(1.0));
    }

    #[test]
    fn zero_background_is_flagged() {
        let mut pts: Vec<(f64, f64)> = (0..=200).map(|i| (1000.0 + 10.0 * i as f64, 0.0)).collect();
        pts[100].1 = 1.0;
        let s = RamanSpectrum::from_pairs("spike", &pts).unwrap();
        let c = predict_g2_curve(&s, &[1500.0, 2000.0], &GapParameters::default(), &PredictOptions::default(), ExecMode::Sequential).unwrap();
        let p = &c.points[0];
        assert!(p.flags.undefined && p.g2_raw.is_none() && p.g2_norm.is_none());
        assert!(!c.points[1].flags.undefined);
    }

    #[test]
    fn regime_flags_follow_linewidth() {
        let modes = VibrationalModeSet::new(vec![VibrationalMode { nu: 1640.0, weight: 1.0, gamma: 20.0 }]).unwrap();
        assert_eq!(classify(1640.0, 50.0, &modes), Regime::NearResonance);
        assert_eq!(classify(1710.0, 50.0, &modes), Regime::NearResonance);
        assert_eq!(classify(1740.0, 50.0, &modes), Regime::Mixed);
        assert_eq!(classify(1800.0, 50.0, &modes), Regime::Virtual);
    }

    #[test]
    fn grid_outside_support_errors() {
        let s = lorentz_spectrum(&[(1640.0, 1.0, 80.0)]);
        let r = predict_g2_curve(&s, &[4500.0], &GapParameters::default(), &PredictOptions::default(), ExecMode::Sequential);
        assert!(matches!(r, Err(Error::OutsideSupport(_))));
    }
}
