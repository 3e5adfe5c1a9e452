use std::path::PathBuf;

use sas_core::defaults;
use sas_core::master_equation::{
    is_near_resonance, scan_resonance, ModelConfig, ScanCurve, ScanFlags, ScanOptions, ScanPoint, ScanResult,
};
use sas_core::pairing::{single_mode_g2, Regime, SingleModeSetup};
use sas_core::spectrum_io::UniformGrid;
use sas_core::statistics::bose_einstein;
use sas_core::{Error, ExecMode};
use serde::Serialize;

use crate::args::{Engine, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::output::{self, Format};

#[derive(Debug, Clone, Serialize)]
pub struct SimulateConfig {
    pub engine: Engine,
    pub nu: f64,
    pub grid: UniformGrid,
    /// `null` stands for an infinite lifetime.
    pub t1: Vec<Option<f64>>,
    pub g_s: f64,
    pub g_as: f64,
    pub n_max: usize,
    pub pulse_duration: f64,
    pub dt: Option<f64>,
    pub temperature_k: f64,
    pub n_thermal: f64,
    pub positivity_check: bool,
    pub format: Format,
}

impl SimulateConfig {
    pub fn from_args(args: &SimulateArgs) -> CliResult<Self> {
        if args.t1.is_empty() {
            return Err(CliError::Usage("simulate needs at least one --t1".into()));
        }
        if !(args.temp.is_finite() && args.temp >= 0.0) {
            return Err(CliError::Usage(format!("--temp {} must be >= 0", args.temp)));
        }
        if !(args.nu.is_finite() && args.nu > 0.0) {
            return Err(CliError::Usage(format!("--nu {} must be > 0", args.nu)));
        }
        let g_s = args.g_s.or(args.g).unwrap_or(defaults::COUPLING);
        let g_as = args.g_as.or(args.g).unwrap_or(defaults::COUPLING);
        Ok(Self {
            engine: args.engine,
            nu: args.nu,
            grid: args.grid,
            t1: args.t1.iter().map(|&t| t.is_finite().then_some(t)).collect(),
            g_s,
            g_as,
            n_max: args.n_max,
            pulse_duration: args.duration,
            dt: args.dt,
            temperature_k: args.temp,
            n_thermal: bose_einstein(args.nu, args.temp),
            positivity_check: !args.no_positivity_check,
            format: args.output.format,
        })
    }

    pub fn template(&self) -> ModelConfig {
        ModelConfig {
            nu: self.nu,
            shift: self.nu,
            g_s: self.g_s,
            g_as: self.g_as,
            t1: self.t1[0].unwrap_or(f64::INFINITY),
            n_thermal: self.n_thermal,
            n_max: self.n_max,
            pulse_duration: self.pulse_duration,
        }
    }

    fn t1_values(&self) -> Vec<f64> {
        self.t1.iter().map(|t| t.unwrap_or(f64::INFINITY)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub config: SimulateConfig,
    pub result: ScanResult,
    pub files: Vec<PathBuf>,
}

/// Leading-order single-mode curve in the scan schema.
fn perturbative_scan(template: &ModelConfig, shifts: &[f64], t1s: &[f64]) -> sas_core::Result<ScanResult> {
    template.validate()?;
    let mut curves = Vec::new();
    for &t1 in t1s {
        let setup = SingleModeSetup {
            nu: template.nu,
            t1,
            g_s: template.g_s,
            g_as: template.g_as,
            n_thermal: template.n_thermal,
            duration: template.pulse_duration,
        };
        let mut points = Vec::with_capacity(shifts.len());
        for &shift in shifts {
            let near = is_near_resonance(&ModelConfig { shift, t1, ..*template });
            let (g2, mean_s, mean_as, no_pairs) = match single_mode_g2(shift, &setup) {
                Ok(p) => (p.g2, p.stokes, p.thermal_as + p.correlated, false),
                Err(Error::Undefined(_)) => (1.0, 0.0, 0.0, true),
                Err(e) => return Err(Error::Scan { shift, t1, source: Box::new(e) }),
            };
            points.push(ScanPoint {
                shift,
                g2,
                g2_norm: g2,
                mean_s,
                mean_as,
                regime: if near { Regime::NearResonance } else { Regime::Virtual },
                flags: ScanFlags { near_resonance: near, no_pair_generation: no_pairs },
            });
        }
        let max = points.iter().map(|p| p.g2).fold(f64::NEG_INFINITY, f64::max);
        for p in &mut points {
            p.g2_norm = p.g2 / max;
        }
        curves.push(ScanCurve { t1, points });
    }
    Ok(ScanResult { config: *template, curves })
}

pub fn run_simulate(args: &SimulateArgs, exec: ExecMode) -> CliResult<SimulateReport> {
    let config = SimulateConfig::from_args(args)?;
    let template = config.template();
    let shifts = config.grid.points();
    let t1s = config.t1_values();
    let result = match config.engine {
        Engine::Lindblad => {
            let opts = ScanOptions {
                temperature: None,
                dt: config.dt,
                check_positivity: config.positivity_check,
                exec,
            };
            scan_resonance(&template, &shifts, &t1s, &opts)?
        }
        Engine::Perturbative => perturbative_scan(&template, &shifts, &t1s)?,
    };

    let body = match config.format {
        Format::Csv => result.to_csv(&output::preamble("simulate", &config)),
        Format::Json => output::document("simulate", &config, "result", &result),
    };
    let file = output::write(&args.output.out, &format!("scan.{}", config.format.extension()), &body)?;
    Ok(SimulateReport { config, result, files: vec![file] })
}
