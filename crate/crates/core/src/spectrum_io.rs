//! Raman spectrum ingestion, resampling and per-bin mode discretization.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    /// Raman shift, cm^-1.
    pub shift: f64,
    /// Stokes intensity, arbitrary units.
    pub intensity: f64,
}

/// A sampled Stokes Raman spectrum of one medium.
#[derive(Debug, Clone, PartialEq)]
pub struct RamanSpectrum {
    medium: String,
    points: Vec<SpectrumPoint>,
    excitation_power_mw: Option<f64>,
    temperature_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumFormat {
    Csv,
    Json,
}

impl SpectrumFormat {
    /// Guesses the format from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => SpectrumFormat::Json,
            _ => SpectrumFormat::Csv,
        }
    }
}

/// Uniform grid `start, start + step, ...` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl UniformGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidInput("grid bounds must be finite".into()));
        }
        if start >= stop {
            return Err(Error::InvalidInput(format!(
                "grid start {start} must be below stop {stop}"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidInput(format!("grid step {step} must be positive")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl RamanSpectrum {
    /// Validates and wraps a point list. Intensities are kept as given.
    pub fn new(medium: impl Into<String>, points: Vec<SpectrumPoint>) -> Result<Self> {
        validate_points(&points)?;
        Ok(Self {
            medium: medium.into(),
            points,
            excitation_power_mw: None,
            temperature_k: defaults::TEMPERATURE_K,
        })
    }

    pub fn from_pairs(medium: impl Into<String>, pairs: &[(f64, f64)]) -> Result<Self> {
        let points = pairs
            .iter()
            .map(|&(shift, intensity)| SpectrumPoint { shift, intensity })
            .collect();
        Self::new(medium, points)
    }

    pub fn with_temperature(mut self, temperature_k: f64) -> Result<Self> {
        if !(temperature_k.is_finite() && temperature_k >= 0.0) {
            return Err(Error::InvalidInput(format!("temperature {temperature_k} K")));
        }
        self.temperature_k = temperature_k;
        Ok(self)
    }

    pub fn with_excitation_power(mut self, milliwatts: Option<f64>) -> Self {
        self.excitation_power_mw = milliwatts;
        self
    }

    pub fn medium(&self) -> &str {
        &self.medium
    }

    pub fn points(&self) -> &[SpectrumPoint] {
        &self.points
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }

    pub fn excitation_power_mw(&self) -> Option<f64> {
        self.excitation_power_mw
    }

    pub fn shift_range(&self) -> (f64, f64) {
        (self.points[0].shift, self.points[self.points.len() - 1].shift)
    }

    pub fn max_intensity(&self) -> f64 {
        self.points.iter().map(|p| p.intensity).fold(0.0, f64::max)
    }

    /// Copy rescaled so the highest intensity is 1. An all-zero spectrum is
    /// returned unchanged.
    pub fn normalized(&self) -> Self {
        let max = self.max_intensity();
        let mut out = self.clone();
        if max > 0.0 {
            for p in &mut out.points {
                p.intensity /= max;
            }
        }
        out
    }

    /// Multiplies every intensity by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.points {
            p.intensity *= factor;
        }
        out
    }

    /// Whether `[lo, hi]` lies inside the sampled shift range.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = self.shift_range();
        let eps = 1e-9 * a.abs().max(b.abs()).max(1.0);
        lo >= a - eps && hi <= b + eps
    }

    /// Linear interpolation of the intensity at `shift`.
    ///
    /// Callers are expected to stay inside the support; outside it the
    /// nearest end value is returned.
    pub fn intensity_at(&self, shift: f64) -> f64 {
        let pts = &self.points;
        let idx = pts.partition_point(|p| p.shift <= shift);
        if idx == 0 {
            return pts[0].intensity;
        }
        if idx == pts.len() {
            return pts[pts.len() - 1].intensity;
        }
        let (p0, p1) = (pts[idx - 1], pts[idx]);
        if shift == p0.shift {
            return p0.intensity;
        }
        p0.intensity + (p1.intensity - p0.intensity) * (shift - p0.shift) / (p1.shift - p0.shift)
    }

    /// Median spacing between neighbouring shifts.
    pub fn median_spacing(&self) -> f64 {
        let mut gaps: Vec<f64> = self.points.windows(2).map(|w| w[1].shift - w[0].shift).collect();
        gaps.sort_by(f64::total_cmp);
        gaps[gaps.len() / 2]
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("shift_cm1,intensity\n");
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p.shift, p.intensity));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let doc = SpectrumJson {
            medium: self.medium.clone(),
            temperature_k: Some(self.temperature_k),
            excitation_power_mw: self.excitation_power_mw,
            points: self.points.iter().map(|p| [p.shift, p.intensity]).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("spectrum serializes")
    }

    pub fn save(&self, path: &Path, format: SpectrumFormat) -> Result<()> {
        let body = match format {
            SpectrumFormat::Csv => self.to_csv_string(),
            SpectrumFormat::Json => self.to_json_string(),
        };
        let mut f = fs::File::create(path).map_err(|source| io_err(path, source))?;
        f.write_all(body.as_bytes()).map_err(|source| io_err(path, source))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectrumJson {
    medium: String,
    #[serde(rename = "temperature_K", default, skip_serializing_if = "Option::is_none")]
    temperature_k: Option<f64>,
    #[serde(rename = "excitation_power_mW", default, skip_serializing_if = "Option::is_none")]
    excitation_power_mw: Option<f64>,
    points: Vec<[f64; 2]>,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

fn validate_points(points: &[SpectrumPoint]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        let row = i + 1;
        if !p.shift.is_finite() || !p.intensity.is_finite() {
            return Err(Error::Validation { row, message: "non-finite value".into() });
        }
        if p.intensity < 0.0 {
            return Err(Error::Validation {
                row,
                message: format!("negative intensity {}", p.intensity),
            });
        }
        if i > 0 && p.shift <= points[i - 1].shift {
            return Err(Error::Validation {
                row,
                message: format!("non-increasing shift {} after {}", p.shift, points[i - 1].shift),
            });
        }
    }
    if points.len() < MIN_POINTS {
        return Err(Error::Validation {
            row: points.len(),
            message: format!("need at least {MIN_POINTS} points, got {}", points.len()),
        });
    }
    Ok(())
}

/// Reads, validates and peak-normalizes a spectrum file.
pub fn load_spectrum(path: &Path, format: SpectrumFormat) -> Result<RamanSpectrum> {
    let text = fs::read_to_string(path).map_err(|source| io_err(path, source))?;
    let medium = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("unnamed")
        .to_string();
    let spectrum = match format {
        SpectrumFormat::Csv => parse_csv(&text, medium)?,
        SpectrumFormat::Json => parse_json(&text)?,
    };
    Ok(spectrum.normalized())
}

/// Parses `shift_cm1,intensity` rows; a non-numeric first row is a header.
pub fn parse_csv(text: &str, medium: impl Into<String>) -> Result<RamanSpectrum> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            row: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let row = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                row,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(shift), Ok(intensity)) => points.push(SpectrumPoint { shift, intensity }),
            _ if first => {}
            _ => {
                return Err(Error::Parse {
                    row,
                    message: format!("non-numeric value in `{},{}`", &record[0], &record[1]),
                })
            }
        }
        first = false;
    }
    RamanSpectrum::new(medium, points)
}

pub fn parse_json(text: &str) -> Result<RamanSpectrum> {
    let doc: SpectrumJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        row: e.line(),
        message: e.to_string(),
    })?;
    let points = doc
        .points
        .iter()
        .map(|&[shift, intensity]| SpectrumPoint { shift, intensity })
        .collect();
    let spectrum = RamanSpectrum::new(doc.medium, points)?
        .with_temperature(doc.temperature_k.unwrap_or(defaults::TEMPERATURE_K))?
        .with_excitation_power(doc.excitation_power_mw);
    Ok(spectrum)
}

/// Linear interpolation onto `grid`, renormalized to peak 1.
pub fn resample(spectrum: &RamanSpectrum, grid: &UniformGrid) -> Result<RamanSpectrum> {
    let shifts = grid.points();
    let (lo, hi) = (shifts[0], shifts[shifts.len() - 1]);
    if !spectrum.covers(lo, hi) {
        let (a, b) = spectrum.shift_range();
        return Err(Error::OutsideSupport(format!(
            "grid [{lo}, {hi}] outside spectrum [{a}, {b}]"
        )));
    }
    let points = shifts
        .iter()
        .map(|&shift| SpectrumPoint { shift, intensity: spectrum.intensity_at(shift).max(0.0) })
        .collect();
    let mut out = RamanSpectrum::new(spectrum.medium.clone(), points)?.normalized();
    out.temperature_k = spectrum.temperature_k;
    out.excitation_power_mw = spectrum.excitation_power_mw;
    Ok(out)
}

/// One discretized vibrational mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VibrationalMode {
    /// Frequency, cm^-1.
    pub nu: f64,
    /// Relative squared coupling, peak-normalized.
    pub weight: f64,
    /// Linewidth (FWHM), cm^-1.
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VibrationalModeSet {
    modes: Vec<VibrationalMode>,
}

impl VibrationalModeSet {
    /// Checks weights in [0, 1] with at least one equal to 1, and positive
    /// linewidths.
    pub fn new(modes: Vec<VibrationalMode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidInput("empty mode set".into()));
        }
        for m in &modes {
            if !(m.nu.is_finite() && m.nu > 0.0) {
                return Err(Error::InvalidInput(format!("mode frequency {}", m.nu)));
            }
            if !(0.0..=1.0).contains(&m.weight) {
                return Err(Error::InvalidInput(format!("mode weight {} outside [0, 1]", m.weight)));
            }
            if !(m.gamma.is_finite() && m.gamma > 0.0) {
                return Err(Error::InvalidInput(format!("mode linewidth {} must be > 0", m.gamma)));
            }
        }
        if !modes.iter().any(|m| m.weight == 1.0) {
            return Err(Error::InvalidInput("no mode has weight 1".into()));
        }
        Ok(Self { modes })
    }

    /// A single mode of weight 1.
    pub fn single(nu: f64, gamma: f64) -> Result<Self> {
        Self::new(vec![VibrationalMode { nu, weight: 1.0, gamma }])
    }

    pub fn modes(&self) -> &[VibrationalMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Turns every bin at or above `threshold` (relative to the peak) into a mode.
/// Bins at zero or negative shift are ignored, also for the peak.
///
/// The linewidth of a bin is the FWHM of the local peak it climbs to, when
/// both half-maximum crossings lie inside the spectrum and the width exceeds
/// one grid spacing; otherwise `default_gamma` (2 x median spacing if `None`).
pub fn discretize_modes(
    spectrum: &RamanSpectrum,
    threshold: f64,
    default_gamma: Option<f64>,
) -> Result<VibrationalModeSet> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidInput(format!("threshold {threshold} outside (0, 1)")));
    }
    let spacing = spectrum.median_spacing();
    let default_gamma = default_gamma.unwrap_or(defaults::DEFAULT_GAMMA_SPACINGS * spacing);
    if !(default_gamma > 0.0) {
        return Err(Error::InvalidInput(format!("default linewidth {default_gamma}")));
    }
    let max = spectrum
        .points
        .iter()
        .filter(|p| p.shift > 0.0)
        .map(|p| p.intensity)
        .fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::EmptyModeSet { threshold });
    }
    let shifts: Vec<f64> = spectrum.points.iter().map(|p| p.shift).collect();
    let values: Vec<f64> = spectrum.points.iter().map(|p| p.intensity / max).collect();

    let mut fwhm_cache: Vec<Option<Option<f64>>> = vec![None; values.len()];
    let mut modes = Vec::new();
    for i in 0..values.len() {
        if values[i] < threshold || shifts[i] <= 0.0 {
            continue;
        }
        let peak = climb(&values, i);
        let width = *fwhm_cache[peak].get_or_insert_with(|| peak_fwhm(&shifts, &values, peak));
        let gamma = match width {
            Some(w) if w > spacing => w,
            _ => default_gamma,
        };
        modes.push(VibrationalMode { nu: shifts[i], weight: values[i], gamma });
    }
    if modes.is_empty() {
        return Err(Error::EmptyModeSet { threshold });
    }
    VibrationalModeSet::new(modes)
}

fn climb(values: &[f64], mut i: usize) -> usize {
    loop {
        let left = if i > 0 { values[i - 1] } else { f64::NEG_INFINITY };
        let right = values.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if right > values[i] && right >= left {
            i += 1;
        } else if left > values[i] {
            i -= 1;
        } else {
            return i;
        }
    }
}

fn peak_fwhm(shifts: &[f64], values: &[f64], peak: usize) -> Option<f64> {
    let half = values[peak] / 2.0;
    let crossing = |a: usize, b: usize| {
        let t = (values[a] - half) / (values[a] - values[b]);
        shifts[a] + t * (shifts[b] - shifts[a])
    };
    let left = (0..peak).rev().find(|&j| values[j] < half).map(|j| crossing(j + 1, j))?;
    let right = (peak + 1..values.len()).find(|&j| values[j] < half).map(|j| crossing(j - 1, j))?;
    Some(right - left)
}
