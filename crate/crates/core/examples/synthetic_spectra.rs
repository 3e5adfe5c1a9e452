//! Writes synthetic Raman spectra of a few liquids to a directory.
//!
//! Line positions and rough relative heights follow textbook Raman spectra;
//! broad water bands are Gaussian, molecular lines Lorentzian, all on a
//! small flat floor. Every line is widened in quadrature by the spectral
//! width of a ~150 fs excitation pulse.
//!
//! Usage: cargo run -p sas-core --example synthetic_spectra -- [OUT_DIR]

use std::path::PathBuf;

use sas_core::spectrum_io::{RamanSpectrum, SpectrumFormat};

#[derive(Clone, Copy)]
enum Line {
    Gauss(f64, f64, f64),
    Lorentz(f64, f64, f64),
}

/// Apparatus width, cm^-1.
const APPARATUS_FWHM: f64 = 100.0;

impl Line {
    fn at(self, x: f64) -> f64 {
        let widen = |fwhm: f64| fwhm.hypot(APPARATUS_FWHM);
        match self {
            Line::Gauss(c, h, fwhm) => {
                let s = widen(fwhm) / 2.354_820_045;
                h * (-(x - c).powi(2) / (2.0 * s * s)).exp()
            }
            Line::Lorentz(c, h, fwhm) => {
                let g = widen(fwhm) / 2.0;
                h * g * g / ((x - c).powi(2) + g * g)
            }
        }
    }
}

const FLOOR: f64 = 2e-3;

fn media() -> Vec<(&'static str, Vec<Line>)> {
    use Line::*;
    vec![
        (
            "water",
            vec![
                Gauss(550.0, 0.10, 400.0),
                Gauss(1640.0, 0.08, 90.0),
                Gauss(2110.0, 0.025, 200.0),
                Gauss(3230.0, 0.75, 350.0),
                Gauss(3420.0, 1.0, 350.0),
                Gauss(3620.0, 0.2, 150.0),
            ],
        ),
        (
            "acetonitrile",
            vec![
                Lorentz(379.0, 0.35, 12.0),
                Lorentz(918.0, 0.55, 10.0),
                Lorentz(1376.0, 0.15, 20.0),
                Lorentz(1440.0, 0.08, 30.0),
                Lorentz(2253.0, 0.65, 10.0),
                Lorentz(2293.0, 0.06, 12.0),
                Lorentz(2942.0, 1.0, 12.0),
                Lorentz(3002.0, 0.1, 25.0),
            ],
        ),
        (
            "toluene",
            vec![
                Lorentz(521.0, 0.2, 10.0),
                Lorentz(786.0, 0.6, 8.0),
                Lorentz(1003.0, 1.0, 5.0),
                Lorentz(1030.0, 0.4, 6.0),
                Lorentz(1210.0, 0.3, 10.0),
                Lorentz(1380.0, 0.1, 15.0),
                Lorentz(1605.0, 0.2, 10.0),
                Lorentz(2870.0, 0.15, 15.0),
                Lorentz(2920.0, 0.4, 15.0),
                Lorentz(3057.0, 0.55, 12.0),
            ],
        ),
        (
            "cyclohexane",
            vec![
                Lorentz(384.0, 0.1, 10.0),
                Lorentz(426.0, 0.15, 10.0),
                Lorentz(801.0, 1.0, 8.0),
                Lorentz(1028.0, 0.45, 10.0),
                Lorentz(1157.0, 0.1, 10.0),
                Lorentz(1266.0, 0.3, 10.0),
                Lorentz(1444.0, 0.35, 15.0),
                Lorentz(2853.0, 0.9, 15.0),
                Lorentz(2923.0, 1.0, 15.0),
                Lorentz(2938.0, 0.8, 15.0),
            ],
        ),
    ]
}

fn synthesize(name: &str, lines: &[Line]) -> RamanSpectrum {
    let pairs: Vec<(f64, f64)> = (0..=1950)
        .map(|i| {
            let x = 100.0 + 2.0 * i as f64;
            (x, FLOOR + lines.iter().map(|l| l.at(x)).sum::<f64>())
        })
        .collect();
    RamanSpectrum::from_pairs(name, &pairs).expect("valid synthetic spectrum").normalized()
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/spectra".into()));
    std::fs::create_dir_all(&dir).expect("create output directory");
    for (name, lines) in media() {
        let path = dir.join(format!("{name}.csv"));
        synthesize(name, &lines).save(&path, SpectrumFormat::Csv).expect("write spectrum");
        println!("{}", path.display());
    }
}
