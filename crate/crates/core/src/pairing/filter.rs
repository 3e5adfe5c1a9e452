//! Bandpass filter windows on the Raman-shift axis.
//!
//! Both filters are described by the magnitude of their shift from the laser
//! line, so the Stokes filter is already mirrored onto the positive axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949;
/// Gaussian transmission is truncated at this many FWHM from the center.
const GAUSSIAN_REACH: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterShape {
    #[default]
    Tophat,
    Gaussian,
}

impl std::str::FromStr for FilterShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tophat" => Ok(FilterShape::Tophat),
            "gaussian" => Ok(FilterShape::Gaussian),
            other => Err(Error::InvalidInput(format!("unknown filter shape `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterBand {
    /// Shift magnitude of the band center, cm^-1.
    pub center: f64,
    /// FWHM, cm^-1.
    pub width: f64,
    pub shape: FilterShape,
}

impl FilterBand {
    pub fn new(center: f64, width: f64, shape: FilterShape) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidInput(format!("band width {width} must be > 0")));
        }
        if !(center.is_finite() && center > width / 2.0) {
            return Err(Error::InvalidInput(format!(
                "band at {center} with width {width} includes the laser line"
            )));
        }
        Ok(Self { center, width, shape })
    }

    pub fn tophat(center: f64, width: f64) -> Result<Self> {
        Self::new(center, width, FilterShape::Tophat)
    }

    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        Self::new(center, width, FilterShape::Gaussian)
    }

    fn sigma(&self) -> f64 {
        self.width / FWHM_PER_SIGMA
    }

    pub fn transmission(&self, shift: f64) -> f64 {
        let x = shift - self.center;
        match self.shape {
            FilterShape::Tophat => {
                if x.abs() <= self.width / 2.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FilterShape::Gaussian => {
                if x.abs() > GAUSSIAN_REACH * self.width {
                    0.0
                } else {
                    let s = self.sigma();
                    (-x * x / (2.0 * s * s)).exp()
                }
            }
        }
    }

    /// Interval outside which the transmission is zero.
    pub fn support(&self) -> (f64, f64) {
        let half = match self.shape {
            FilterShape::Tophat => self.width / 2.0,
            FilterShape::Gaussian => GAUSSIAN_REACH * self.width,
        };
        ((self.center - half).max(0.0), self.center + half)
    }
}

/// Spectral overlap `∫ T_S(δ) T_aS(δ) dδ` of a Stokes and an anti-Stokes
/// band, both on the positive shift axis.
pub fn band_overlap(stokes: &FilterBand, antistokes: &FilterBand) -> f64 {
    use FilterShape::*;
    match (stokes.shape, antistokes.shape) {
        (Tophat, Tophat) => {
            let (a0, a1) = stokes.support();
            let (b0, b1) = antistokes.support();
            (a1.min(b1) - a0.max(b0)).max(0.0)
        }
        (Gaussian, Gaussian) => {
            let (s1, s2) = (stokes.sigma(), antistokes.sigma());
            let var = s1 * s1 + s2 * s2;
            let d = stokes.center - antistokes.center;
            (2.0 * std::f64::consts::PI).sqrt() * s1 * s2 / var.sqrt() * (-d * d / (2.0 * var)).exp()
        }
        _ => BandQuadrature::new(stokes, antistokes, 401).integrate(|_| 1.0),
    }
}

/// Composite Simpson rule over the common support of two bands, with the
/// product of their transmissions folded into the weights.
#[derive(Debug, Clone)]
pub struct BandQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl BandQuadrature {
    /// `n` is rounded up to an odd count of at least 3.
    pub fn new(stokes: &FilterBand, antistokes: &FilterBand, n: usize) -> Self {
        let (a0, a1) = stokes.support();
        let (b0, b1) = antistokes.support();
        Self::simpson(a0.max(b0), a1.min(b1), n, |x| {
            stokes.transmission(x) * antistokes.transmission(x)
        })
    }

    /// Simpson rule weighted by a single band's transmission.
    pub fn single(band: &FilterBand, n: usize) -> Self {
        let (lo, hi) = band.support();
        Self::simpson(lo, hi, n, |x| band.transmission(x))
    }

    fn simpson(lo: f64, hi: f64, n: usize, transmission: impl Fn(f64) -> f64) -> Self {
        if hi <= lo {
            return Self { nodes: Vec::new(), weights: Vec::new() };
        }
        let n = n.max(3) | 1;
        let h = (hi - lo) / (n - 1) as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            let x = if k == n - 1 { hi } else { lo + k as f64 * h };
            let simpson = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            nodes.push(x);
            weights.push(simpson * h / 3.0 * transmission(x));
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_tophats_overlap_width() {
        let b = FilterBand::tophat(2000.0, 80.0).unwrap();
        assert_eq!(band_overlap(&b, &b), 80.0);
    }

    #[test]
    fn disjoint_bands_do_not_overlap() {
        let s = FilterBand::tophat(2000.0, 80.0).unwrap();
        let a = FilterBand::tophat(2300.0, 80.0).unwrap();
        assert_eq!(band_overlap(&s, &a), 0.0);
    }

    #[test]
    fn half_offset_tophats() {
        let s = FilterBand::tophat(2000.0, 80.0).unwrap();
        let a = FilterBand::tophat(2040.0, 80.0).unwrap();
        assert_eq!(band_overlap(&s, &a), 40.0);
    }

    #[test]
    fn gaussian_overlap_matches_quadrature() {
        let s = FilterBand::gaussian(2000.0, 60.0).unwrap();
        let a = FilterBand::gaussian(2030.0, 90.0).unwrap();
        let exact = band_overlap(&s, &a);
        let numeric = BandQuadrature::new(&s, &a, 2001).integrate(|_| 1.0);
        assert!((exact - numeric).abs() / exact < 1e-6, "{exact} {numeric}");
    }

    #[test]
    fn tophat_quadrature_is_exact_for_polynomials() {
        let b = FilterBand::tophat(1000.0, 100.0).unwrap();
        let q = BandQuadrature::new(&b, &b, 9);
        let v = q.integrate(|x| (x - 950.0).powi(3));
        assert!((v - 100f64.powi(4) / 4.0).abs() < 1e-6);
        let single = BandQuadrature::single(&b, 9).integrate(|_| 1.0);
        assert!((single - 100.0).abs() < 1e-12);
    }

    #[test]
    fn band_must_exclude_laser_line() {
        assert!(FilterBand::tophat(40.0, 100.0).is_err());
        assert!(FilterBand::tophat(400.0, 0.0).is_err());
    }
}
