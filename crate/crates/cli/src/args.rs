use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sas_core::defaults;
use sas_core::pairing::FilterShape;
use sas_core::spectrum_io::UniformGrid;
use serde::Serialize;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "sascorr", version, about = "Stokes/anti-Stokes photon-pair correlations from Raman spectra")]
pub struct Cli {
    /// Worker threads for grid points and media (1 runs sequentially).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Perturbative g2(0) curves from Raman spectra.
    Predict(PredictArgs),
    /// g2 versus filter shift for a single vibrational mode.
    Simulate(SimulateArgs),
    /// g2 estimators from per-window photon counts.
    Counts(CountsArgs),
    /// Cauchy-Schwarz classicality test.
    CsCheck(CsCheckArgs),
    /// Pointwise comparison of two curves after a one-point normalization.
    Compare(CompareArgs),
}

/// `START:STOP:STEP` in cm^-1.
pub fn parse_grid(s: &str) -> Result<UniformGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected START:STOP:STEP, got `{s}`"));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"))?;
    }
    UniformGrid::new(v[0], v[1], v[2]).map_err(|e| e.to_string())
}

fn parse_shape(s: &str) -> Result<FilterShape, String> {
    s.parse().map_err(|e: sas_core::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    /// Raman spectrum files (CSV or JSON).
    #[arg(long, num_args = 1..)]
    pub spectrum: Vec<PathBuf>,

    /// Band centers START:STOP:STEP, cm^-1.
    #[arg(long, value_parser = parse_grid)]
    pub grid: UniformGrid,

    /// Filter FWHM, cm^-1.
    #[arg(long, default_value_t = defaults::BAND_WIDTH)]
    pub band_width: f64,

    #[arg(long, value_parser = parse_shape, default_value = "tophat")]
    pub shape: FilterShape,

    /// Temperature in K; overrides the value stored with the spectrum.
    #[arg(long)]
    pub temp: Option<f64>,

    /// Relative laser intensity.
    #[arg(long, default_value_t = defaults::LASER_INTENSITY)]
    pub laser_scale: f64,

    /// Mode discretization threshold relative to the spectrum peak.
    #[arg(long, default_value_t = defaults::THRESHOLD)]
    pub threshold: f64,

    /// Linewidth of unresolved peaks, cm^-1 (default: 2 x median spacing).
    #[arg(long)]
    pub default_gamma: Option<f64>,

    /// Weight of the SaS-fed anti-Stokes background (0 disables it).
    #[arg(long, default_value_t = defaults::SAS_FEEDBACK)]
    pub sas_feedback: f64,

    /// Sum mode contributions incoherently.
    #[arg(long)]
    pub incoherent: bool,

    /// Band centers of the ranking table (default: every grid point).
    #[arg(long, num_args = 1..)]
    pub rank_at: Vec<f64>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Lindblad,
    Perturbative,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Phonon frequency, cm^-1.
    #[arg(long, default_value_t = 1640.0)]
    pub nu: f64,

    /// Filter shifts START:STOP:STEP, cm^-1.
    #[arg(long, value_parser = parse_grid)]
    pub grid: UniformGrid,

    /// Phonon lifetimes in 1/cm^-1, one curve each (`inf` disables relaxation).
    #[arg(long, num_args = 1.., default_values_t = [defaults::T1])]
    pub t1: Vec<f64>,

    /// Sets both couplings, cm^-1.
    #[arg(long)]
    pub g: Option<f64>,

    #[arg(long)]
    pub g_s: Option<f64>,

    #[arg(long)]
    pub g_as: Option<f64>,

    /// Fock truncation per mode.
    #[arg(long, default_value_t = defaults::N_MAX)]
    pub n_max: usize,

    /// Evolution time, 1/cm^-1.
    #[arg(long, default_value_t = defaults::PULSE_DURATION)]
    pub duration: f64,

    /// Integrator step (default: from the step rule).
    #[arg(long)]
    pub dt: Option<f64>,

    /// Temperature in K, sets the thermal phonon occupation.
    #[arg(long, default_value_t = defaults::TEMPERATURE_K)]
    pub temp: f64,

    #[arg(long, value_enum, default_value_t = Engine::Lindblad)]
    pub engine: Engine,

    /// Skip the eigenvalue check on the final state.
    #[arg(long)]
    pub no_positivity_check: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CountsArgs {
    /// Count record JSON `{window_length_s, windows: [[n_s, n_as], ...]}`.
    /// Without it a synthetic record is drawn.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, default_value_t = 1_000_000)]
    pub windows: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Poisson background mean of the Stokes channel.
    #[arg(long, default_value_t = 0.05)]
    pub mean_s: f64,

    #[arg(long, default_value_t = 0.02)]
    pub mean_as: f64,

    /// Probability of a correlated pair per window.
    #[arg(long, default_value_t = 0.01)]
    pub pair_prob: f64,

    /// Also write the synthetic record.
    #[arg(long)]
    pub save_record: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CsCheckArgs {
    #[arg(long, required_unless_present = "counts")]
    pub g2_sas: Option<f64>,

    #[arg(long, required_unless_present = "counts")]
    pub g2_ss: Option<f64>,

    #[arg(long, required_unless_present = "counts")]
    pub g2_asas: Option<f64>,

    /// Takes the three values from a count record instead.
    #[arg(long, conflicts_with_all = ["g2_sas", "g2_ss", "g2_asas"])]
    pub counts: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Reference curve (predict or simulate output).
    #[arg(long)]
    pub predict: PathBuf,

    /// Curve to compare (simulate or predict output).
    #[arg(long)]
    pub simulate: PathBuf,

    /// Shared shift at which both curves are set to 1 (default: the
    /// shared shift farthest from any near-resonance point).
    #[arg(long)]
    pub reference: Option<f64>,

    /// Selects one curve of a multi-t1 scan (default: the first).
    #[arg(long)]
    pub t1: Option<f64>,

    #[arg(long, default_value_t = defaults::COMPARE_TOLERANCE)]
    pub tolerance: f64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses() {
        let g = parse_grid("1400:1900:50").unwrap();
        assert_eq!(g.points().len(), 11);
        assert!(parse_grid("1900:1400:50").is_err());
        assert!(parse_grid("1400:1900").is_err());
        assert!(parse_grid("a:b:c").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
