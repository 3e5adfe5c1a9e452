use std::fs;
use std::path::{Path, PathBuf};

use sas_core::{Error, ExecMode};
use serde::Serialize;
use serde_json::Value;

use crate::args::CompareArgs;
use crate::error::{CliError, CliResult};
use crate::output::{self, Format};

/// One point of a curve read back from a predict or simulate output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub shift: f64,
    pub g2_norm: Option<f64>,
    pub near_resonance: bool,
    pub t1: Option<f64>,
}

fn parse_error(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Usage(format!("{}: {}", path.display(), message.into()))
}

fn read_csv(path: &Path, text: &str) -> CliResult<Vec<Sample>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| parse_error(path, e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let shift = col("shift_cm1").ok_or_else(|| parse_error(path, "missing column shift_cm1"))?;
    let g2 = col("g2_norm").ok_or_else(|| parse_error(path, "missing column g2_norm"))?;
    let regime = col("regime");
    let t1 = col("t1");
    let mut out = Vec::new();
    for record in reader.records() {
        let r = record.map_err(|e| parse_error(path, e.to_string()))?;
        let num = |i: usize| r.get(i).and_then(|s| s.parse::<f64>().ok());
        out.push(Sample {
            shift: num(shift).ok_or_else(|| parse_error(path, "bad shift value"))?,
            g2_norm: num(g2).filter(|v| v.is_finite()),
            near_resonance: regime.and_then(|i| r.get(i)) == Some("near_resonance"),
            t1: t1.and_then(num),
        });
    }
    Ok(out)
}

fn points_from_json(points: &Value, t1: Option<f64>, out: &mut Vec<Sample>) -> Option<()> {
    for p in points.as_array()? {
        out.push(Sample {
            shift: p.get("shift")?.as_f64()?,
            g2_norm: p.get("g2_norm").and_then(Value::as_f64),
            near_resonance: p.get("regime").and_then(Value::as_str) == Some("near_resonance"),
            t1,
        });
    }
    Some(())
}

fn read_json(path: &Path, text: &str) -> CliResult<Vec<Sample>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_error(path, e.to_string()))?;
    let result = doc.get("result").ok_or_else(|| parse_error(path, "missing `result`"))?;
    let mut out = Vec::new();
    let ok = if let Some(curve) = result.get("curve") {
        points_from_json(&curve["points"], None, &mut out)
    } else if let Some(curves) = result.get("curves").and_then(Value::as_array) {
        curves.iter().try_for_each(|c| {
            let t1 = c.get("t1").map(|v| v.as_f64().unwrap_or(f64::INFINITY));
            points_from_json(&c["points"], t1, &mut out)
        })
    } else {
        None
    };
    ok.ok_or_else(|| parse_error(path, "not a predict or simulate output"))?;
    Ok(out)
}

/// Reads a curve, keeping only the curve of `t1` (or the first one) when the
/// file holds several.
pub fn read_curve(path: &Path, t1: Option<f64>) -> CliResult<Vec<Sample>> {
    let text = fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    let samples = if path.extension().and_then(|e| e.to_str()) == Some("json") {
        read_json(path, &text)?
    } else {
        read_csv(path, &text)?
    };
    let first = samples.first().and_then(|s| s.t1);
    let wanted = t1.or(first);
    Ok(samples
        .into_iter()
        .filter(|s| match (wanted, s.t1) {
            (Some(w), Some(v)) => v == w || (v - w).abs() <= 1e-12 * w.abs(),
            _ => true,
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareConfig {
    pub predict: String,
    pub simulate: String,
    pub reference: Option<f64>,
    pub t1: Option<f64>,
    pub tolerance: f64,
    pub format: Format,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub shift: f64,
    pub reference_curve: Option<f64>,
    pub compared_curve: Option<f64>,
    /// `compared / reference - 1` after normalization at the reference shift.
    pub relative_difference: Option<f64>,
    /// Near-resonance in either curve: reported, not judged.
    pub excluded: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub reference_shift: f64,
    pub compared_points: usize,
    pub excluded_points: usize,
    pub max_abs_difference: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub config: CompareConfig,
    pub rows: Vec<CompareRow>,
    pub summary: CompareSummary,
    pub files: Vec<PathBuf>,
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

/// Compares `b` against `a` on their shared shifts.
pub fn compare_curves(
    a: &[Sample],
    b: &[Sample],
    reference: Option<f64>,
    tolerance: f64,
) -> CliResult<(Vec<CompareRow>, CompareSummary)> {
    let shared: Vec<(Sample, Sample)> =
        a.iter().filter_map(|x| b.iter().find(|y| same(x.shift, y.shift)).map(|y| (*x, *y))).collect();
    if shared.is_empty() {
        return Err(Error::NoSharedSupport.into());
    }
    let usable = |(x, y): &(Sample, Sample)| x.g2_norm.is_some() && y.g2_norm.is_some();
    let reference_shift = match reference {
        Some(r) => {
            let pair = shared.iter().find(|(x, _)| same(x.shift, r));
            match pair {
                Some(p) if usable(p) => r,
                Some(_) => return Err(CliError::Usage(format!("reference shift {r} has no defined g2"))),
                None => return Err(CliError::Usage(format!("reference shift {r} is not shared by both curves"))),
            }
        }
        None => {
            let flagged: Vec<f64> =
                shared.iter().filter(|(x, y)| x.near_resonance || y.near_resonance).map(|(x, _)| x.shift).collect();
            let distance = |s: f64| flagged.iter().map(|f| (s - f).abs()).fold(f64::INFINITY, f64::min);
            shared
                .iter()
                .filter(|p| usable(p) && !p.0.near_resonance && !p.1.near_resonance)
                .map(|(x, _)| x.shift)
                .fold(None, |best: Option<f64>, s| match best {
                    Some(b) if distance(b) >= distance(s) => Some(b),
                    _ => Some(s),
                })
                .ok_or_else(|| CliError::Usage("no shared point is usable as reference".into()))?
        }
    };
    let (ra, rb) = shared
        .iter()
        .find(|(x, _)| same(x.shift, reference_shift))
        .map(|(x, y)| (x.g2_norm.unwrap(), y.g2_norm.unwrap()))
        .expect("reference is shared");

    let rows: Vec<CompareRow> = shared
        .iter()
        .map(|(x, y)| {
            let na = x.g2_norm.map(|v| v / ra);
            let nb = y.g2_norm.map(|v| v / rb);
            CompareRow {
                shift: x.shift,
                reference_curve: na,
                compared_curve: nb,
                relative_difference: na.zip(nb).map(|(p, q)| q / p - 1.0),
                excluded: x.near_resonance || y.near_resonance,
            }
        })
        .collect();
    let judged: Vec<&CompareRow> = rows.iter().filter(|r| !r.excluded).collect();
    let max_abs_difference =
        judged.iter().map(|r| r.relative_difference.map_or(f64::INFINITY, f64::abs)).fold(0.0, f64::max);
    let summary = CompareSummary {
        reference_shift,
        compared_points: judged.len(),
        excluded_points: rows.len() - judged.len(),
        max_abs_difference,
        pass: max_abs_difference <= tolerance,
    };
    Ok((rows, summary))
}

pub fn run_compare(args: &CompareArgs, _exec: ExecMode) -> CliResult<CompareReport> {
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(CliError::Usage(format!("--tolerance {} must be > 0", args.tolerance)));
    }
    let config = CompareConfig {
        predict: args.predict.display().to_string(),
        simulate: args.simulate.display().to_string(),
        reference: args.reference,
        t1: args.t1,
        tolerance: args.tolerance,
        format: args.output.format,
    };
    let a = read_curve(&args.predict, args.t1)?;
    let b = read_curve(&args.simulate, args.t1)?;
    let (rows, summary) = compare_curves(&a, &b, args.reference, args.tolerance)?;

    let body = match config.format {
        Format::Csv => {
            let mut pre = output::preamble("compare", &config);
            pre.push(format!("summary {}", serde_json::to_string(&summary).expect("summary serializes")));
            let lines: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{}",
                        r.shift,
                        output::num(r.reference_curve),
                        output::num(r.compared_curve),
                        output::num(r.relative_difference),
                        r.excluded
                    )
                })
                .collect();
            output::csv_with_preamble(&pre, "shift_cm1,reference,compared,relative_difference,excluded", &lines)
        }
        Format::Json => {
            let payload = serde_json::json!({ "summary": summary, "rows": rows });
            output::document("compare", &config, "result", &payload)
        }
    };
    let file = output::write(&args.output.out, &format!("compare.{}", config.format.extension()), &body)?;
    Ok(CompareReport { config, rows, summary, files: vec![file] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(shift: f64, g: f64, near: bool) -> Sample {
        Sample { shift, g2_norm: Some(g), near_resonance: near, t1: None }
    }

    #[test]
    fn disjoint_grids_have_no_shared_support() {
        let err = compare_curves(&[s(1.0, 1.0, false)], &[s(2.0, 1.0, false)], None, 0.05).unwrap_err();
        assert!(matches!(err, CliError::Core(Error::NoSharedSupport)));
    }

    #[test]
    fn near_resonance_points_are_reported_not_judged() {
        let a = [s(10.0, 1.0, false), s(20.0, 0.1, true), s(30.0, 0.5, false)];
        let b = [s(10.0, 0.5, false), s(20.0, 0.9, false), s(30.0, 0.26, false)];
        let (rows, summary) = compare_curves(&a, &b, Some(10.0), 0.05).unwrap();
        assert!(rows[1].excluded);
        assert!(rows[1].relative_difference.unwrap() > 1.0);
        assert!((summary.max_abs_difference - 0.04).abs() < 1e-12);
        assert!(summary.pass);
    }

    #[test]
    fn default_reference_avoids_resonance() {
        let a = [s(10.0, 1.0, false), s(20.0, 1.0, false), s(30.0, 1.0, true)];
        let (_, summary) = compare_curves(&a, &a, None, 0.05).unwrap();
        assert_eq!(summary.reference_shift, 10.0);
    }
}
