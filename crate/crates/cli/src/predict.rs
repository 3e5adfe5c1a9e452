use std::collections::BTreeMap;
use std::path::PathBuf;

use sas_core::pairing::{
    predict_g2_curve, CorrelationCurve, FilterShape, GapParameters, PredictOptions, Summation,
};
use sas_core::spectrum_io::{load_spectrum, SpectrumFormat, UniformGrid};
use sas_core::ExecMode;
use serde::Serialize;

use crate::args::PredictArgs;
use crate::error::{CliError, CliResult, Failure};
use crate::output::{self, Format};

/// Everything that determines the predict outputs.
#[derive(Debug, Clone, Serialize)]
pub struct PredictConfig {
    pub spectra: Vec<String>,
    pub grid: UniformGrid,
    pub band_width: f64,
    pub shape: FilterShape,
    pub temperature_k: Option<f64>,
    pub laser_scale: f64,
    pub threshold: f64,
    pub default_gamma: Option<f64>,
    pub sas_feedback: f64,
    pub summation: Summation,
    pub quadrature_nodes: usize,
    pub low_signal_floor: f64,
    pub rank_at: Vec<f64>,
    pub format: Format,
}

impl PredictConfig {
    pub fn from_args(args: &PredictArgs) -> CliResult<Self> {
        if args.spectrum.is_empty() {
            return Err(CliError::Usage("predict needs at least one --spectrum".into()));
        }
        if !(args.laser_scale.is_finite() && args.laser_scale > 0.0) {
            return Err(CliError::Usage(format!("--laser-scale {} must be > 0", args.laser_scale)));
        }
        if !(args.sas_feedback >= 0.0 && args.sas_feedback.is_finite()) {
            return Err(CliError::Usage(format!("--sas-feedback {} must be >= 0", args.sas_feedback)));
        }
        if let Some(t) = args.temp {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Usage(format!("--temp {t} must be >= 0")));
            }
        }
        let grid_points = args.grid.points();
        let mut rank_at = args.rank_at.clone();
        for &c in &rank_at {
            if !grid_points.iter().any(|&g| (g - c).abs() < 1e-9 * c.abs().max(1.0)) {
                return Err(CliError::Usage(format!("--rank-at {c} is not a grid point")));
            }
        }
        if rank_at.is_empty() {
            rank_at = grid_points;
        }
        let base = PredictOptions::default();
        Ok(Self {
            spectra: args.spectrum.iter().map(|p| p.display().to_string()).collect(),
            grid: args.grid,
            band_width: args.band_width,
            shape: args.shape,
            temperature_k: args.temp,
            laser_scale: args.laser_scale,
            threshold: args.threshold,
            default_gamma: args.default_gamma,
            sas_feedback: args.sas_feedback,
            summation: if args.incoherent { Summation::Incoherent } else { Summation::Coherent },
            quadrature_nodes: base.quadrature_nodes,
            low_signal_floor: base.low_signal_floor,
            rank_at,
            format: args.output.format,
        })
    }

    pub fn options(&self) -> PredictOptions {
        PredictOptions {
            band_width: self.band_width,
            shape: self.shape,
            temperature: self.temperature_k,
            threshold: self.threshold,
            default_gamma: self.default_gamma,
            sas_feedback: self.sas_feedback,
            summation: self.summation,
            quadrature_nodes: self.quadrature_nodes,
            low_signal_floor: self.low_signal_floor,
            ..PredictOptions::default()
        }
    }
}

/// One row of the multi-medium ranking table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub center: f64,
    /// 1 is the highest raw g2; absent for undefined points.
    pub rank: Option<usize>,
    pub medium: String,
    pub g2_raw: Option<f64>,
    /// Raw g2 over the best raw g2 at this center.
    pub g2_relative: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PredictReport {
    pub config: PredictConfig,
    /// Sorted by medium.
    pub curves: Vec<CorrelationCurve>,
    pub ranking: Vec<RankRow>,
    pub files: Vec<PathBuf>,
    pub failures: Vec<Failure>,
}

/// Ranks media by raw g2 at each center. Raw values share one scale across
/// media, so this equals ranking after a joint normalization.
pub fn rank(curves: &[CorrelationCurve], centers: &[f64]) -> Vec<RankRow> {
    let mut rows = Vec::new();
    for &center in centers {
        let mut entries: Vec<(String, Option<f64>)> = curves
            .iter()
            .map(|c| (c.medium.clone(), c.point_at(center).and_then(|p| p.g2_raw)))
            .collect();
        entries.sort_by(|a, b| match (a.1, b.1) {
            (Some(x), Some(y)) => y.total_cmp(&x).then_with(|| a.0.cmp(&b.0)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.0.cmp(&b.0),
        });
        let best = entries.first().and_then(|e| e.1);
        for (i, (medium, g2)) in entries.into_iter().enumerate() {
            rows.push(RankRow {
                center,
                rank: g2.map(|_| i + 1),
                medium,
                g2_raw: g2,
                g2_relative: g2.zip(best).map(|(g, b)| g / b),
            });
        }
    }
    rows
}

fn file_stem(medium: &str) -> String {
    let s: String = medium
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    if s.is_empty() {
        "spectrum".into()
    } else {
        s
    }
}

/// Loads every spectrum, predicts its curve and writes one file per medium
/// plus a ranking table when more than one medium succeeded. Failing inputs
/// are collected in the report and do not stop the run.
pub fn run_predict(args: &PredictArgs, exec: ExecMode) -> CliResult<PredictReport> {
    let config = PredictConfig::from_args(args)?;
    let grid = config.grid.points();
    let params = GapParameters::new(config.laser_scale)?;
    let opts = config.options();

    let outcomes = exec.map(&args.spectrum, |path| {
        let spectrum = load_spectrum(path, SpectrumFormat::from_path(path))?;
        let temperature = opts.temperature.unwrap_or(spectrum.temperature_k());
        // grid points are independent; the outer map already fans out
        predict_g2_curve(&spectrum, &grid, &params, &opts, ExecMode::Sequential).map(|c| (c, temperature))
    });

    let mut curves = Vec::new();
    let mut failures = Vec::new();
    for (path, outcome) in args.spectrum.iter().zip(outcomes) {
        match outcome {
            Ok(c) => curves.push(c),
            Err(e) => failures.push(Failure {
                input: path.display().to_string(),
                message: e.to_string(),
                numerical: e.is_numerical(),
            }),
        }
    }
    curves.sort_by(|a, b| a.0.medium.cmp(&b.0.medium));

    let mut files = Vec::new();
    let mut used: BTreeMap<String, usize> = BTreeMap::new();
    let out = &args.output.out;
    for (curve, temperature) in &curves {
        let stem = file_stem(&curve.medium);
        let n = used.entry(stem.clone()).or_insert(0);
        *n += 1;
        let stem = if *n == 1 { stem } else { format!("{stem}-{n}") };
        let mut pre = output::preamble("predict", &config);
        pre.push(format!("medium {}", curve.medium));
        pre.push(format!("temperature_K {temperature}"));
        let (name, body) = match config.format {
            Format::Csv => (format!("{stem}.g2.csv"), curve.to_csv(&pre)),
            Format::Json => {
                let payload = serde_json::json!({ "temperature_K": temperature, "curve": curve });
                (format!("{stem}.g2.json"), output::document("predict", &config, "result", &payload))
            }
        };
        files.push(output::write(out, &name, &body)?);
    }

    let curves: Vec<CorrelationCurve> = curves.into_iter().map(|(c, _)| c).collect();
    let ranking = rank(&curves, &config.rank_at);
    if curves.len() > 1 {
        let body = match config.format {
            Format::Csv => {
                let rows: Vec<String> = ranking
                    .iter()
                    .map(|r| {
                        format!(
                            "{},{},{},{},{}",
                            r.center,
                            r.rank.map(|k| k.to_string()).unwrap_or_default(),
                            r.medium,
                            output::num(r.g2_raw),
                            output::num(r.g2_relative)
                        )
                    })
                    .collect();
                output::csv_with_preamble(
                    &output::preamble("predict", &config),
                    "center_cm1,rank,medium,g2_raw,g2_relative",
                    &rows,
                )
            }
            Format::Json => output::document("predict", &config, "ranking", &ranking),
        };
        files.push(output::write(out, &format!("ranking.{}", config.format.extension()), &body)?);
    }

    Ok(PredictReport { config, curves, ranking, files, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sas_core::pairing::{CorrelationPoint, PointFlags, Regime};

    fn curve(medium: &str, g2: &[(f64, Option<f64>)]) -> CorrelationCurve {
        CorrelationCurve {
            medium: medium.into(),
            points: g2
                .iter()
                .map(|&(shift, g)| CorrelationPoint {
                    shift,
                    g2_raw: g,
                    g2_norm: g,
                    overlap: 1.0,
                    regime: Regime::Virtual,
                    correlated: 0.0,
                    accidental: 0.0,
                    flags: PointFlags::default(),
                })
                .collect(),
        }
    }

    #[test]
    fn ranking_orders_by_raw_value() {
        let curves = [
            curve("a", &[(100.0, Some(2.0))]),
            curve("b", &[(100.0, Some(5.0))]),
            curve("c", &[(100.0, None)]),
        ];
        let rows = rank(&curves, &[100.0]);
        let order: Vec<&str> = rows.iter().map(|r| r.medium.as_str()).collect();
        assert_eq!(order, ["b", "a", "c"]);
        assert_eq!(rows[0].rank, Some(1));
        assert_eq!(rows[1].g2_relative, Some(0.4));
        assert_eq!(rows[2].rank, None);
    }
}
