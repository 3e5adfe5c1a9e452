use serde::{Deserialize, Serialize};

use super::fock::{Mode, SparseOp, TripartiteBasis, C64};
use crate::defaults;
use crate::error::{Error, Result};

/// Single vibrational mode coupled to one Stokes and one anti-Stokes photon
/// mode in the frame rotating with the filter frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Phonon frequency, cm^-1.
    pub nu: f64,
    /// Filter shift, cm^-1.
    pub shift: f64,
    pub g_s: f64,
    pub g_as: f64,
    /// Phonon lifetime in 1/cm^-1; `f64::INFINITY` disables relaxation.
    pub t1: f64,
    pub n_thermal: f64,
    pub n_max: usize,
    pub pulse_duration: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            nu: 1640.0,
            shift: 1640.0,
            g_s: defaults::COUPLING,
            g_as: defaults::COUPLING,
            t1: defaults::T1,
            n_thermal: 0.0,
            n_max: defaults::N_MAX,
            pulse_duration: defaults::PULSE_DURATION,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(Error::Config(format!("n_max = {} is too small (need >= 2)", self.n_max)));
        }
        let finite = [self.nu, self.shift, self.g_s, self.g_as, self.n_thermal, self.pulse_duration];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("model parameters must be finite".into()));
        }
        if self.nu <= 0.0 {
            return Err(Error::Config(format!("nu = {} must be > 0", self.nu)));
        }
        if self.g_s < 0.0 || self.g_as < 0.0 || self.n_thermal < 0.0 || self.pulse_duration < 0.0 {
            return Err(Error::Config("couplings, occupation and duration must be >= 0".into()));
        }
        if self.t1.is_nan() || self.t1 <= 0.0 {
            return Err(Error::Config(format!("t1 = {} must be > 0", self.t1)));
        }
        Ok(())
    }

    /// `true` when a coupling is not small against the phonon frequency.
    pub fn strong_coupling_warning(&self) -> bool {
        self.g_s.max(self.g_as) > 0.01 * self.nu
    }

    pub fn detuning(&self) -> f64 {
        self.shift - self.nu
    }

    /// Relaxation rate `1/t1`, zero for an infinite lifetime.
    pub fn gamma1(&self) -> f64 {
        if self.t1.is_infinite() {
            0.0
        } else {
            1.0 / self.t1
        }
    }

    pub fn basis(&self) -> TripartiteBasis {
        TripartiteBasis::new(self.n_max)
    }
}

/// `H = d n_S - d n_aS + g_s (a_S† b† + a_S b) + g_as (a_aS† b + a_aS b†)`
/// with `d = shift - nu`.
pub fn build_hamiltonian(config: &ModelConfig) -> Result<SparseOp> {
    config.validate()?;
    let basis = config.basis();
    let d = C64::new(config.detuning(), 0.0);
    let a_s = basis.annihilation(Mode::Stokes);
    let a_as = basis.annihilation(Mode::AntiStokes);
    let b = basis.annihilation(Mode::Phonon);

    let free = basis.number(Mode::Stokes).scale(d).add(&basis.number(Mode::AntiStokes).scale(-d));
    let squeeze = a_s.adjoint().mul(&b.adjoint());
    let squeeze = squeeze.add(&squeeze.adjoint()).scale(C64::new(config.g_s, 0.0));
    let split = a_as.adjoint().mul(&b);
    let split = split.add(&split.adjoint()).scale(C64::new(config.g_as, 0.0));
    Ok(free.add(&squeeze).add(&split))
}

/// Jump operators `sqrt(gamma1 (n_th + 1)) b` and `sqrt(gamma1 n_th) b†`,
/// omitting those with zero rate.
pub fn jump_operators(config: &ModelConfig) -> Vec<SparseOp> {
    let gamma = config.gamma1();
    let b = config.basis().annihilation(Mode::Phonon);
    let mut out = Vec::new();
    let down = gamma * (config.n_thermal + 1.0);
    if down > 0.0 {
        out.push(b.scale(C64::new(down.sqrt(), 0.0)));
    }
    let up = gamma * config.n_thermal;
    if up > 0.0 {
        out.push(b.adjoint().scale(C64::new(up.sqrt(), 0.0)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_hamiltonian_is_diagonal() {
        let cfg = ModelConfig { g_s: 0.0, g_as: 0.0, shift: 1700.0, ..Default::default() };
        assert!(build_hamiltonian(&cfg).unwrap().is_diagonal());
    }

    #[test]
    fn resonant_hamiltonian_has_no_diagonal() {
        let h = build_hamiltonian(&ModelConfig::default()).unwrap();
        let dense = h.to_dense();
        assert!((0..dense.nrows()).all(|i| dense[(i, i)].norm() == 0.0));
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let cfg = ModelConfig { shift: 1712.5, g_s: 0.3, g_as: 0.7, ..Default::default() };
        let h = build_hamiltonian(&cfg).unwrap().to_dense();
        assert_eq!((&h - h.adjoint()).norm(), 0.0);
    }

    #[test]
    fn excitation_label_commutes() {
        let cfg = ModelConfig { shift: 1700.0, g_s: 0.4, g_as: 0.2, ..Default::default() };
        let h = build_hamiltonian(&cfg).unwrap();
        let basis = cfg.basis();
        for (i, row) in h.rows.iter().enumerate() {
            for &(j, _) in row {
                assert_eq!(basis.excitation_label(i), basis.excitation_label(j));
            }
        }
    }

    #[test]
    fn truncation_below_two_is_rejected() {
        let cfg = ModelConfig { n_max: 1, ..Default::default() };
        assert!(matches!(build_hamiltonian(&cfg), Err(Error::Config(_))));
    }
}
