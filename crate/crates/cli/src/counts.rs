use std::fs;
use std::path::{Path, PathBuf};

use sas_core::statistics::sampling::sample_pairs_with_background;
use sas_core::statistics::{cauchy_schwarz_check, g2_from_counts, CountEstimates, CountRecord, CsVerdict};
use sas_core::{Error, ExecMode};
use serde::Serialize;

use crate::args::{CountsArgs, CsCheckArgs};
use crate::error::{CliError, CliResult};
use crate::output::{self, Format};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum CountSource {
    File { path: String },
    Synthetic { windows: usize, seed: u64, mean_s: f64, mean_as: f64, pair_prob: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct CountsConfig {
    pub input: CountSource,
    pub format: Format,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountsResult {
    pub estimates: CountEstimates,
    /// Absent when an autocorrelation vanishes.
    pub cauchy_schwarz: Option<CsVerdict>,
}

#[derive(Debug, Clone)]
pub struct CountsReport {
    pub config: CountsConfig,
    pub result: CountsResult,
    pub files: Vec<PathBuf>,
}

pub fn read_record(path: &Path) -> CliResult<CountRecord> {
    let text = fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    let record: CountRecord = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { row: e.line(), message: e.to_string() })?;
    Ok(CountRecord::new(record.window_length_s, record.windows)?)
}

fn analyse(record: &CountRecord, exec: ExecMode) -> CliResult<CountsResult> {
    let estimates = g2_from_counts(record, exec)?;
    let cauchy_schwarz =
        cauchy_schwarz_check(estimates.g2_s_as.value, estimates.g2_ss.value, estimates.g2_asas.value).ok();
    Ok(CountsResult { estimates, cauchy_schwarz })
}

pub fn run_counts(args: &CountsArgs, exec: ExecMode) -> CliResult<CountsReport> {
    let (config, record) = match &args.input {
        Some(path) => (
            CountsConfig { input: CountSource::File { path: path.display().to_string() }, format: args.output.format },
            read_record(path)?,
        ),
        None => {
            if args.windows == 0 {
                return Err(CliError::Usage("--windows must be > 0".into()));
            }
            let record = sample_pairs_with_background(
                args.mean_s,
                args.mean_as,
                args.pair_prob,
                args.windows,
                args.seed,
                exec,
            )?;
            let input = CountSource::Synthetic {
                windows: args.windows,
                seed: args.seed,
                mean_s: args.mean_s,
                mean_as: args.mean_as,
                pair_prob: args.pair_prob,
            };
            (CountsConfig { input, format: args.output.format }, record)
        }
    };
    let result = analyse(&record, exec)?;

    let out = &args.output.out;
    let mut files = Vec::new();
    let body = match config.format {
        Format::Csv => {
            let e = &result.estimates;
            let mut rows = vec![
                format!("windows,{},0", e.windows),
                format!("mean_s,{},", e.mean_s),
                format!("mean_as,{},", e.mean_as),
                format!("g2_s_as,{},{}", e.g2_s_as.value, e.g2_s_as.std_error),
                format!("g2_ss,{},{}", e.g2_ss.value, e.g2_ss.std_error),
                format!("g2_asas,{},{}", e.g2_asas.value, e.g2_asas.std_error),
            ];
            if let Some(cs) = e.cs_ratio {
                rows.push(format!("cs_ratio,{},{}", cs.value, cs.std_error));
            }
            output::csv_with_preamble(&output::preamble("counts", &config), "quantity,value,std_error", &rows)
        }
        Format::Json => output::document("counts", &config, "result", &result),
    };
    files.push(output::write(out, &format!("counts.{}", config.format.extension()), &body)?);
    if args.save_record && args.input.is_none() {
        let text = serde_json::to_string(&record).expect("record serializes");
        files.push(output::write(out, "record.json", &text)?);
    }
    Ok(CountsReport { config, result, files })
}

#[derive(Debug, Clone, Serialize)]
pub struct CsCheckConfig {
    pub g2_sas: f64,
    pub g2_ss: f64,
    pub g2_asas: f64,
    pub counts: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CsCheckReport {
    pub config: CsCheckConfig,
    pub verdict: CsVerdict,
    pub files: Vec<PathBuf>,
}

pub fn run_cs_check(args: &CsCheckArgs, exec: ExecMode) -> CliResult<CsCheckReport> {
    let config = match &args.counts {
        Some(path) => {
            let e = g2_from_counts(&read_record(path)?, exec)?;
            CsCheckConfig {
                g2_sas: e.g2_s_as.value,
                g2_ss: e.g2_ss.value,
                g2_asas: e.g2_asas.value,
                counts: Some(path.display().to_string()),
            }
        }
        None => match (args.g2_sas, args.g2_ss, args.g2_asas) {
            (Some(a), Some(b), Some(c)) => CsCheckConfig { g2_sas: a, g2_ss: b, g2_asas: c, counts: None },
            _ => return Err(CliError::Usage("cs-check needs --g2-sas, --g2-ss and --g2-asas".into())),
        },
    };
    let verdict = cauchy_schwarz_check(config.g2_sas, config.g2_ss, config.g2_asas)?;
    let format = args.output.format;
    let body = match format {
        Format::Csv => output::csv_with_preamble(
            &output::preamble("cs-check", &config),
            "violation_ratio,nonclassical",
            &[format!("{},{}", verdict.violation_ratio, verdict.nonclassical)],
        ),
        Format::Json => output::document("cs-check", &config, "result", &verdict),
    };
    let file = output::write(&args.output.out, &format!("cs_check.{}", format.extension()), &body)?;
    Ok(CsCheckReport { config, verdict, files: vec![file] })
}
