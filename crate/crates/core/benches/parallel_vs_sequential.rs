use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sas_core::master_equation::{scan_resonance, ModelConfig, ScanOptions};
use sas_core::pairing::{predict_g2_curve, GapParameters, PredictOptions};
use sas_core::spectrum_io::RamanSpectrum;
use sas_core::statistics::{g2_from_counts, sampling::sample_pairs_with_background};
use sas_core::ExecMode;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn spectrum() -> RamanSpectrum {
    let peaks = [(1003.0, 1.0, 12.0), (1640.0, 0.1, 60.0), (2250.0, 0.6, 20.0), (2940.0, 0.9, 30.0)];
    let pairs: Vec<(f64, f64)> = (0..=1800)
        .map(|i| {
            let x = 200.0 + 2.0 * i as f64;
            let y = peaks
                .iter()
                .map(|&(c, h, w): &(f64, f64, f64)| h * (w / 2.0).powi(2) / ((x - c).powi(2) + (w / 2.0).powi(2)))
                .sum::<f64>();
            (x, y + 1e-3)
        })
        .collect();
    RamanSpectrum::from_pairs("bench", &pairs).unwrap()
}

fn predict(c: &mut Criterion) {
    let s = spectrum();
    let grid: Vec<f64> = (0..50).map(|i| 1000.0 + 50.0 * i as f64).collect();
    let mut group = c.benchmark_group("predict_50_points");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| predict_g2_curve(&s, &grid, &GapParameters::default(), &PredictOptions::default(), mode).unwrap())
        });
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let template = ModelConfig { pulse_duration: 2.0, ..Default::default() };
    let shifts = [1600.0, 1620.0, 1660.0, 1680.0];
    let mut group = c.benchmark_group("scan_4x2");
    group.sample_size(10);
    for (name, mode) in MODES {
        let opts = ScanOptions { exec: mode, check_positivity: false, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| scan_resonance(&template, &shifts, &[0.5, 2.0], opts).unwrap())
        });
    }
    group.finish();
}

fn counts(c: &mut Criterion) {
    let record = sample_pairs_with_background(0.05, 0.02, 0.01, 1_000_000, 7, ExecMode::Parallel).unwrap();
    let mut group = c.benchmark_group("counts_1e6");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| g2_from_counts(&record, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, predict, scan, counts);
criterion_main!(benches);
