//! Fixed-step RK4 for `dρ/dt = -i[H, ρ] + Σ_L (L ρ L† - ½{L†L, ρ})`.
//!
//! The right-hand side is written with `H_eff = H - (i/2) Σ L†L` as
//! `-i H_eff ρ + i ρ H_eff† + Σ L ρ L†`. Only the upper triangle is
//! propagated; the lower triangle is its conjugate, so every stage is exactly
//! Hermitian. Each entry's derivative is compiled once into a short list of
//! weighted (possibly conjugated) source entries.
//!
//! Every operator shifts `M = n_S - n_aS - n_b` by a fixed amount on both
//! sides of `ρ`, so `M_i - M_j` is conserved entrywise. Entries whose label
//! difference never occurs in `ρ0` stay zero and are skipped.

use std::collections::{BTreeMap, BTreeSet};

use super::density::DensityOperator;
use super::fock::{SparseOp, C64};
use super::model::{build_hamiltonian, jump_operators, ModelConfig};
use crate::defaults;
use crate::error::{Error, Result};

/// One term of an entry's derivative: `coef * rho[src]`, conjugated when
/// the source sits in the lower triangle.
#[derive(Debug, Clone, Copy)]
struct Term {
    src: u32,
    conj: bool,
    coef: C64,
}

#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    /// Active upper-triangle entries `(i, j)`, `i <= j`, in packed order.
    entries: Vec<(usize, usize)>,
    /// Terms of entry `e` are `terms[offsets[e]..offsets[e + 1]]`.
    offsets: Vec<usize>,
    terms: Vec<Term>,
    /// `|H|_inf + gamma1`, the quantity bounded by the step rule.
    rate_bound: f64,
}

impl Liouvillian {
    /// Liouvillian restricted to the label sectors populated in `rho0`.
    pub fn new(config: &ModelConfig, rho0: &DensityOperator) -> Result<Self> {
        let h = build_hamiltonian(config)?;
        if rho0.n_max() != config.n_max {
            return Err(Error::InvalidInput(format!(
                "initial state has n_max {}, model has {}",
                rho0.n_max(),
                config.n_max
            )));
        }
        let jumps = jump_operators(config);
        let dim = h.dim;
        let mut decay = SparseOp::zeros(dim);
        for l in &jumps {
            decay = decay.add(&l.adjoint().mul(l));
        }
        let heff = h.add(&decay.scale(C64::new(0.0, -0.5)));

        let basis = rho0.basis();
        let mut diffs = BTreeSet::new();
        for i in 0..dim {
            for j in 0..dim {
                if rho0.get(i, j) != C64::default() {
                    let d = basis.excitation_label(i) - basis.excitation_label(j);
                    diffs.insert(d);
                    diffs.insert(-d);
                }
            }
        }
        let mut entries = Vec::new();
        let mut packed = vec![u32::MAX; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                if diffs.contains(&(basis.excitation_label(i) - basis.excitation_label(j))) {
                    packed[i * dim + j] = entries.len() as u32;
                    entries.push((i, j));
                }
            }
        }

        // -i H_eff rho + i rho H_eff† + Σ L rho L†, entry by entry
        let minus_i = C64::new(0.0, -1.0);
        let mut offsets = Vec::with_capacity(entries.len() + 1);
        let mut terms = Vec::new();
        let mut acc: BTreeMap<(u32, bool), C64> = BTreeMap::new();
        for &(i, j) in &entries {
            let mut add = |a: usize, b: usize, coef: C64| {
                let (src, conj) = if a <= b { (packed[a * dim + b], false) } else { (packed[b * dim + a], true) };
                // sources outside the active set are identically zero
                if src != u32::MAX {
                    *acc.entry((src, conj)).or_default() += coef;
                }
            };
            for &(k, hik) in &heff.rows[i] {
                add(k, j, minus_i * hik);
            }
            for &(k, hjk) in &heff.rows[j] {
                add(i, k, -minus_i * hjk.conj());
            }
            for l in &jumps {
                for &(k, lik) in &l.rows[i] {
                    for &(m, ljm) in &l.rows[j] {
                        add(k, m, lik * ljm.conj());
                    }
                }
            }
            offsets.push(terms.len());
            for ((src, conj), c) in std::mem::take(&mut acc) {
                if c != C64::default() {
                    terms.push(Term { src, conj, coef: c });
                }
            }
        }
        offsets.push(terms.len());

        Ok(Self { dim, entries, offsets, terms, rate_bound: h.inf_norm() + config.gamma1() })
    }

    pub fn rate_bound(&self) -> f64 {
        self.rate_bound
    }

    /// Number of independent entries propagated.
    pub fn active_entries(&self) -> usize {
        self.entries.len()
    }

    /// Writes `dρ/dt` into `out` on the active entries of full row-major
    /// matrices.
    pub fn apply(&self, rho: &[C64], out: &mut [C64]) {
        let packed = self.pack(rho);
        let mut k = vec![C64::default(); packed.len()];
        self.apply_packed(&packed, &mut k);
        self.unpack(&k, out);
    }

    fn apply_packed(&self, x: &[C64], out: &mut [C64]) {
        for (e, v) in out.iter_mut().enumerate() {
            let mut sum = C64::default();
            for t in &self.terms[self.offsets[e]..self.offsets[e + 1]] {
                let s = x[t.src as usize];
                sum += t.coef * if t.conj { s.conj() } else { s };
            }
            let (i, j) = self.entries[e];
            *v = if i == j { C64::new(sum.re, 0.0) } else { sum };
        }
    }

    fn pack(&self, rho: &[C64]) -> Vec<C64> {
        self.entries.iter().map(|&(i, j)| rho[i * self.dim + j]).collect()
    }

    /// Writes the packed entries and their mirror images into `out`.
    fn unpack(&self, x: &[C64], out: &mut [C64]) {
        for (&(i, j), &v) in self.entries.iter().zip(x) {
            out[i * self.dim + j] = v;
            out[j * self.dim + i] = v.conj();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Step size; chosen from the step rule when `None`.
    pub dt: Option<f64>,
    pub t_end: f64,
    /// Store every n-th step (0 keeps only the final state).
    pub store_every: usize,
    pub check_positivity: bool,
}

impl EvolveOptions {
    pub fn until(t_end: f64) -> Self {
        Self { dt: None, t_end, store_every: 0, check_positivity: true }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityOperator>,
    pub dt: f64,
}

impl Trajectory {
    pub fn last(&self) -> &DensityOperator {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Step size for `t_end` that keeps `dt * rate_bound` at or below the
/// automatic target.
pub fn automatic_step(t_end: f64, rate_bound: f64) -> f64 {
    if t_end <= 0.0 || rate_bound <= 0.0 {
        return t_end.max(0.0);
    }
    let steps = (t_end * rate_bound / defaults::STEP_BOUND).ceil().max(1.0);
    t_end / steps
}

/// Integrates from `rho0` to `options.t_end`. The initial state is always
/// stored, the final state always stored.
pub fn evolve(rho0: &DensityOperator, config: &ModelConfig, options: &EvolveOptions) -> Result<Trajectory> {
    if !(options.t_end.is_finite() && options.t_end >= 0.0) {
        return Err(Error::Config(format!("t_end = {} must be finite and >= 0", options.t_end)));
    }
    rho0.check(options.check_positivity)
        .map_err(|m| Error::InvalidInput(format!("initial state: {m}")))?;
    let lv = Liouvillian::new(config, rho0)?;

    let dt = match options.dt {
        Some(dt) if !(dt.is_finite() && dt > 0.0) => {
            return Err(Error::Config(format!("dt = {dt} must be > 0")));
        }
        Some(dt) => dt,
        None => automatic_step(options.t_end, lv.rate_bound()),
    };
    let value = dt * lv.rate_bound();
    if options.t_end > 0.0 && value >= defaults::STEP_LIMIT {
        return Err(Error::StepSize { value });
    }

    let steps = if options.t_end > 0.0 { (options.t_end / dt - 1e-9).ceil().max(1.0) as usize } else { 0 };
    let mut full = rho0.data().to_vec();
    let mut x = lv.pack(&full);
    let n = x.len();
    let mut k1 = vec![C64::default(); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    let axpy = |base: &[C64], c: f64, k: &[C64], out: &mut [C64]| {
        for ((o, b), k) in out.iter_mut().zip(base).zip(k) {
            *o = b + k * c;
        }
    };

    let mut traj = Trajectory { times: vec![0.0], states: vec![rho0.clone()], dt };
    let mut t = 0.0;
    for step in 1..=steps {
        let h = if step == steps { options.t_end - t } else { dt };
        lv.apply_packed(&x, &mut k1);
        axpy(&x, h / 2.0, &k1, &mut tmp);
        lv.apply_packed(&tmp, &mut k2);
        axpy(&x, h / 2.0, &k2, &mut tmp);
        lv.apply_packed(&tmp, &mut k3);
        axpy(&x, h, &k3, &mut tmp);
        lv.apply_packed(&tmp, &mut k4);
        for (e, v) in x.iter_mut().enumerate() {
            *v += (k1[e] + (k2[e] + k3[e]) * 2.0 + k4[e]) * (h / 6.0);
        }
        t = if step == steps { options.t_end } else { step as f64 * dt };

        let store = step == steps || (options.store_every > 0 && step % options.store_every == 0);
        if store {
            lv.unpack(&x, &mut full);
            let state = DensityOperator::from_data(config.n_max, full.clone())?;
            state
                .check(options.check_positivity)
                .map_err(|message| Error::InvariantBreach { time: t, message })?;
            traj.times.push(t);
            traj.states.push(state);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master_equation::fock::Mode;
    use nalgebra::DMatrix;

    fn dense_rhs(config: &ModelConfig, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let h = build_hamiltonian(config).unwrap().to_dense();
        let i = C64::new(0.0, 1.0);
        let mut out = (&h * rho - rho * &h) * (-i);
        for l in jump_operators(config) {
            let l = l.to_dense();
            let ldl = l.adjoint() * &l;
            out += &l * rho * l.adjoint() - (&ldl * rho + rho * &ldl) * C64::new(0.5, 0.0);
        }
        out
    }

    #[test]
    fn entrywise_rhs_matches_dense_products() {
        let cfg = ModelConfig { shift: 1660.0, g_s: 0.3, g_as: 0.2, n_thermal: 0.4, n_max: 2, ..Default::default() };
        let amps: Vec<C64> = (0..27).map(|k| C64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos())).collect();
        let rho = DensityOperator::pure(2, &amps).unwrap();
        let lv = Liouvillian::new(&cfg, &rho).unwrap();
        assert_eq!(lv.active_entries(), 27 * 28 / 2);
        let mut out = vec![C64::default(); 27 * 27];
        lv.apply(rho.data(), &mut out);
        let expected = dense_rhs(&cfg, &rho.to_dense());
        for i in 0..27 {
            for j in 0..27 {
                assert!((out[i * 27 + j] - expected[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn phonon_decay_matches_exponential() {
        let cfg = ModelConfig { g_s: 0.0, g_as: 0.0, t1: 2.0, ..Default::default() };
        let rho0 = DensityOperator::fock(3, 0, 0, 1);
        let traj = evolve(&rho0, &cfg, &EvolveOptions::until(2.0)).unwrap();
        let n_b = traj.last().expect_diagonal(|_, _, b| b as f64);
        assert!((n_b - (-1.0f64).exp()).abs() < 1e-6, "{n_b}");
    }

    #[test]
    fn vacuum_is_dark() {
        let cfg = ModelConfig { g_s: 0.0, g_as: 0.0, ..Default::default() };
        let rho0 = DensityOperator::vacuum(3);
        let traj = evolve(&rho0, &cfg, &EvolveOptions::until(3.0)).unwrap();
        assert_eq!(traj.last(), &rho0);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let cfg = ModelConfig { shift: 1700.0, ..Default::default() };
        let opts = EvolveOptions { dt: Some(0.1), ..EvolveOptions::until(1.0) };
        let err = evolve(&DensityOperator::vacuum(3), &cfg, &opts).unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }));
        assert!(err.is_numerical());
    }

    #[test]
    fn stored_steps_are_reported() {
        let cfg = ModelConfig { shift: 1650.0, ..Default::default() };
        let opts = EvolveOptions { dt: Some(0.001), t_end: 0.1, store_every: 10, check_positivity: false };
        let traj = evolve(&DensityOperator::vacuum(3), &cfg, &opts).unwrap();
        assert_eq!(traj.states.len(), 11);
        assert!((traj.times[10] - 0.1).abs() < 1e-12);
        let n_s = cfg.basis().number(Mode::Stokes);
        assert!(n_s.get(cfg.basis().index(1, 0, 0), cfg.basis().index(1, 0, 0)).re == 1.0);
    }
}
