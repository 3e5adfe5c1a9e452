use nalgebra::{DMatrix, SymmetricEigen};

use super::fock::{TripartiteBasis, C64};
use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Density matrix on Stokes ⊗ anti-Stokes ⊗ phonon, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    basis: TripartiteBasis,
    data: Vec<C64>,
}

impl DensityOperator {
    pub fn from_data(n_max: usize, data: Vec<C64>) -> Result<Self> {
        let basis = TripartiteBasis::new(n_max);
        if data.len() != basis.dim() * basis.dim() {
            return Err(Error::InvalidInput(format!(
                "density matrix has {} entries, expected {}",
                data.len(),
                basis.dim() * basis.dim()
            )));
        }
        Ok(Self { basis, data })
    }

    pub fn zeros(n_max: usize) -> Self {
        let basis = TripartiteBasis::new(n_max);
        Self { basis, data: vec![C64::default(); basis.dim() * basis.dim()] }
    }

    pub fn fock(n_max: usize, n_s: usize, n_as: usize, n_b: usize) -> Self {
        let mut rho = Self::zeros(n_max);
        let i = rho.basis.index(n_s, n_as, n_b);
        rho.set(i, i, C64::new(1.0, 0.0));
        rho
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(n_max, 0, 0, 0)
    }

    /// `|psi><psi|` for a normalized amplitude vector.
    pub fn pure(n_max: usize, amplitudes: &[C64]) -> Result<Self> {
        let mut rho = Self::zeros(n_max);
        let dim = rho.dim();
        if amplitudes.len() != dim {
            return Err(Error::InvalidInput(format!("state has {} amplitudes, expected {dim}", amplitudes.len())));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        for i in 0..dim {
            for j in 0..dim {
                rho.data[i * dim + j] = amplitudes[i] * amplitudes[j].conj() / norm;
            }
        }
        Ok(rho)
    }

    /// Product `rho_s ⊗ rho_as ⊗ rho_b` of single-mode density matrices.
    pub fn product(rho_s: &DMatrix<C64>, rho_as: &DMatrix<C64>, rho_b: &DMatrix<C64>) -> Result<Self> {
        let l = rho_s.nrows();
        if l < 3 || [rho_s.ncols(), rho_as.nrows(), rho_as.ncols(), rho_b.nrows(), rho_b.ncols()].iter().any(|&d| d != l) {
            return Err(Error::InvalidInput("factors must be square with equal size >= 3".into()));
        }
        let full = rho_s.kronecker(rho_as).kronecker(rho_b);
        let mut rho = Self::zeros(l - 1);
        let dim = rho.dim();
        for i in 0..dim {
            for j in 0..dim {
                rho.data[i * dim + j] = full[(i, j)];
            }
        }
        Ok(rho)
    }

    /// Photon vacuum with the phonon in a truncated thermal state of mean
    /// occupation `n_thermal` (renormalized after truncation).
    pub fn thermal_phonon(n_max: usize, n_thermal: f64) -> Self {
        let l = n_max + 1;
        let mut rho_b = DMatrix::zeros(l, l);
        let ratio = if n_thermal > 0.0 { n_thermal / (n_thermal + 1.0) } else { 0.0 };
        let weights: Vec<f64> = (0..l).map(|n| ratio.powi(n as i32)).collect();
        let total: f64 = weights.iter().sum();
        for (n, w) in weights.iter().enumerate() {
            rho_b[(n, n)] = C64::new(w / total, 0.0);
        }
        let vac = single_mode_fock(l, 0);
        Self::product(&vac, &vac, &rho_b).expect("matching factor sizes")
    }

    pub fn basis(&self) -> TripartiteBasis {
        self.basis
    }

    pub fn n_max(&self) -> usize {
        self.basis.n_max
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let d = self.dim();
        self.data[i * d + j] = v;
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_row_slice(d, d, &self.data)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_dense();
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(h).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity, unit trace and (optionally) positivity.
    pub fn check(&self, positivity: bool) -> std::result::Result<(), String> {
        let herm = self.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(format!("hermiticity error {herm:e}"));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(format!("trace {tr}"));
        }
        if positivity {
            let min = self.min_eigenvalue();
            if min < -POSITIVITY_TOL {
                return Err(format!("negative eigenvalue {min:e}"));
            }
        }
        Ok(())
    }

    /// Whether every coherence between different `n_s - n_as - n_b` sectors
    /// vanishes.
    pub fn is_excitation_block_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                self.basis.excitation_label(i) == self.basis.excitation_label(j)
                    || self.get(i, j) == C64::default()
            })
        })
    }

    /// Expectation of a diagonal function of the occupations.
    pub fn expect_diagonal(&self, f: impl Fn(usize, usize, usize) -> f64) -> f64 {
        (0..self.dim())
            .map(|i| {
                let (s, a, b) = self.basis.occupations(i);
                self.get(i, i).re * f(s, a, b)
            })
            .sum()
    }

    /// Joint photon-number distribution `P(n_s, n_as)`, phonon traced out.
    pub fn photon_distribution(&self) -> Vec<((u64, u64), f64)> {
        let l = self.basis.levels();
        let mut p = vec![0.0; l * l];
        for i in 0..self.dim() {
            let (s, a, _) = self.basis.occupations(i);
            p[s * l + a] += self.get(i, i).re;
        }
        p.iter()
            .enumerate()
            .map(|(k, &v)| (((k / l) as u64, (k % l) as u64), v))
            .collect()
    }
}

/// `|n><n|` on a single mode with `levels` levels.
pub fn single_mode_fock(levels: usize, n: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(levels, levels);
    m[(n, n)] = C64::new(1.0, 0.0);
    m
}

/// Truncated, renormalized coherent state `|alpha><alpha|`.
pub fn single_mode_coherent(levels: usize, alpha: C64) -> DMatrix<C64> {
    let mut amp = Vec::with_capacity(levels);
    let mut term = C64::new(1.0, 0.0);
    for n in 0..levels {
        if n > 0 {
            term = term * alpha / (n as f64).sqrt();
        }
        amp.push(term);
    }
    let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
    DMatrix::from_fn(levels, levels, |i, j| amp[i] * amp[j].conj() / norm)
}

/// Truncated, renormalized thermal state of mean occupation `n_mean`.
pub fn single_mode_thermal(levels: usize, n_mean: f64) -> DMatrix<C64> {
    let ratio = n_mean / (n_mean + 1.0);
    let w: Vec<f64> = (0..levels).map(|n| ratio.powi(n as i32)).collect();
    let total: f64 = w.iter().sum();
    DMatrix::from_fn(levels, levels, |i, j| if i == j { C64::new(w[i] / total, 0.0) } else { C64::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_are_valid_states() {
        let l = 4;
        for rho in [
            DensityOperator::vacuum(3),
            DensityOperator::fock(3, 1, 2, 3),
            DensityOperator::thermal_phonon(3, 0.3),
            DensityOperator::product(
                &single_mode_coherent(l, C64::new(0.3, 0.1)),
                &single_mode_thermal(l, 0.2),
                &single_mode_fock(l, 1),
            )
            .unwrap(),
        ] {
            rho.check(true).unwrap();
        }
    }

    #[test]
    fn block_structure_detection() {
        assert!(DensityOperator::thermal_phonon(2, 0.5).is_excitation_block_diagonal());
        let coherent = single_mode_coherent(3, C64::new(0.5, 0.0));
        let vac = single_mode_fock(3, 0);
        let rho = DensityOperator::product(&coherent, &vac, &vac).unwrap();
        assert!(!rho.is_excitation_block_diagonal());
    }

    #[test]
    fn photon_distribution_sums_to_one() {
        let rho = DensityOperator::thermal_phonon(3, 0.4);
        let total: f64 = rho.photon_distribution().iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
