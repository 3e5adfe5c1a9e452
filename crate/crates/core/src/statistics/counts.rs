use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::ExecMode;

/// Per-window photon counts of the Stokes and anti-Stokes channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub window_length_s: f64,
    /// `[n_s, n_as]` per coincidence window.
    pub windows: Vec<[u64; 2]>,
}

impl CountRecord {
    pub fn new(window_length_s: f64, windows: Vec<[u64; 2]>) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::InvalidInput("count record has no windows".into()));
        }
        Ok(Self { window_length_s, windows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    /// Delta-method standard error.
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountEstimates {
    pub windows: usize,
    pub mean_s: f64,
    pub mean_as: f64,
    /// `<n_s n_as> / (<n_s><n_as>)`.
    pub g2_s_as: Estimate,
    /// `<n_s (n_s - 1)> / <n_s>^2`.
    pub g2_ss: Estimate,
    pub g2_asas: Estimate,
    /// Cauchy-Schwarz ratio, absent when an autocorrelation vanishes.
    pub cs_ratio: Option<Estimate>,
}

const CHUNK: usize = 1 << 16;
const K: usize = 5;

/// Exact integer moment sums of `(x, y, xy, x(x-1), y(y-1))`.
#[derive(Debug, Clone, Copy, Default)]
struct MomentSums {
    n: u64,
    sum: [u128; K],
    cross: [[u128; K]; K],
}

impl MomentSums {
    fn of(windows: &[[u64; 2]]) -> Self {
        let mut m = MomentSums::default();
        for &[x, y] in windows {
            let (x, y) = (x as u128, y as u128);
            let z = [x, y, x * y, x * x.saturating_sub(1), y * y.saturating_sub(1)];
            m.n += 1;
            for a in 0..K {
                m.sum[a] += z[a];
                for b in a..K {
                    m.cross[a][b] += z[a] * z[b];
                }
            }
        }
        m
    }

    fn merge(mut self, other: &Self) -> Self {
        self.n += other.n;
        for a in 0..K {
            self.sum[a] += other.sum[a];
            for b in a..K {
                self.cross[a][b] += other.cross[a][b];
            }
        }
        self
    }

    fn means(&self) -> [f64; K] {
        let n = self.n as f64;
        self.sum.map(|s| s as f64 / n)
    }

    /// Sample covariance of the moment vector, from exact integer sums.
    fn covariance(&self) -> [[f64; K]; K] {
        let n = self.n as i128;
        let mut cov = [[0.0; K]; K];
        if n < 2 {
            return cov;
        }
        for a in 0..K {
            for b in a..K {
                let num = n * self.cross[a][b] as i128 - self.sum[a] as i128 * self.sum[b] as i128;
                let c = num as f64 / (n * (n - 1)) as f64;
                cov[a][b] = c;
                cov[b][a] = c;
            }
        }
        cov
    }

    fn estimate(&self, value: f64, grad: [f64; K]) -> Estimate {
        let cov = self.covariance();
        let mut var = 0.0;
        for a in 0..K {
            for b in 0..K {
                var += grad[a] * cov[a][b] * grad[b];
            }
        }
        Estimate { value, std_error: (var.max(0.0) / self.n as f64).sqrt() }
    }
}

/// Same-window (zero-delay) cross- and autocorrelation estimates.
pub fn g2_from_counts(record: &CountRecord, exec: ExecMode) -> Result<CountEstimates> {
    if record.windows.is_empty() {
        return Err(Error::InvalidInput("count record has no windows".into()));
    }
    let chunks: Vec<&[[u64; 2]]> = record.windows.chunks(CHUNK).collect();
    let partials = exec.map(&chunks, |c| MomentSums::of(c));
    let sums = partials.iter().fold(MomentSums::default(), |acc, p| acc.merge(p));

    let [mx, my, mxy, mxx, myy] = sums.means();
    if mx == 0.0 || my == 0.0 {
        return Err(Error::Undefined(format!(
            "zero-mean channel (<n_s> = {mx}, <n_as> = {my})"
        )));
    }
    let cross = mxy / (mx * my);
    let auto_s = mxx / (mx * mx);
    let auto_as = myy / (my * my);
    let g2_s_as = sums.estimate(cross, [-cross / mx, -cross / my, 1.0 / (mx * my), 0.0, 0.0]);
    let g2_ss = sums.estimate(auto_s, [-2.0 * auto_s / mx, 0.0, 0.0, 1.0 / (mx * mx), 0.0]);
    let g2_asas = sums.estimate(auto_as, [0.0, -2.0 * auto_as / my, 0.0, 0.0, 1.0 / (my * my)]);
    // the means cancel: ratio = <xy>^2 / (<x(x-1)> <y(y-1)>)
    let cs_ratio = (mxx > 0.0 && myy > 0.0).then(|| {
        let r = mxy * mxy / (mxx * myy);
        sums.estimate(r, [0.0, 0.0, 2.0 * r / mxy, -r / mxx, -r / myy])
    });
    Ok(CountEstimates {
        windows: sums.n as usize,
        mean_s: mx,
        mean_as: my,
        g2_s_as,
        g2_ss,
        g2_asas,
        cs_ratio,
    })
}
