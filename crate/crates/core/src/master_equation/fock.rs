//! Truncated Fock space of Stokes ⊗ anti-Stokes ⊗ phonon and sparse
//! operators on it.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Stokes,
    AntiStokes,
    Phonon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripartiteBasis {
    pub n_max: usize,
}

impl TripartiteBasis {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.levels().pow(3)
    }

    pub fn index(&self, n_s: usize, n_as: usize, n_b: usize) -> usize {
        let l = self.levels();
        (n_s * l + n_as) * l + n_b
    }

    /// `(n_s, n_as, n_b)` of a basis index.
    pub fn occupations(&self, i: usize) -> (usize, usize, usize) {
        let l = self.levels();
        (i / (l * l), (i / l) % l, i % l)
    }

    /// `n_s - n_as - n_b`, conserved by the coherent dynamics.
    pub fn excitation_label(&self, i: usize) -> i64 {
        let (s, a, b) = self.occupations(i);
        s as i64 - a as i64 - b as i64
    }

    pub fn annihilation(&self, mode: Mode) -> SparseOp {
        let dim = self.dim();
        let mut op = SparseOp::zeros(dim);
        for col in 0..dim {
            let (s, a, b) = self.occupations(col);
            let (n, target) = match mode {
                Mode::Stokes if s > 0 => (s, self.index(s - 1, a, b)),
                Mode::AntiStokes if a > 0 => (a, self.index(s, a - 1, b)),
                Mode::Phonon if b > 0 => (b, self.index(s, a, b - 1)),
                _ => continue,
            };
            op.rows[target].push((col, C64::new((n as f64).sqrt(), 0.0)));
        }
        op
    }

    pub fn number(&self, mode: Mode) -> SparseOp {
        let a = self.annihilation(mode);
        a.adjoint().mul(&a)
    }
}

/// Row-compressed sparse complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    pub dim: usize,
    pub rows: Vec<Vec<(usize, C64)>>,
}

impl SparseOp {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for (i, row) in op.rows.iter_mut().enumerate() {
            row.push((i, C64::new(1.0, 0.0)));
        }
        op
    }

    fn compact(mut self) -> Self {
        for row in &mut self.rows {
            row.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|&(_, v)| v != C64::new(0.0, 0.0));
            *row = merged;
        }
        self
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.rows[j].push((i, v.conj()));
            }
        }
        out.compact()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    out.rows[i].push((j, a * b));
                }
            }
        }
        out.compact()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, row) in other.rows.iter().enumerate() {
            out.rows[i].extend_from_slice(row);
        }
        out.compact()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for (_, v) in row.iter_mut() {
                *v *= factor;
            }
        }
        out.compact()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rows[i]
            .iter()
            .find(|&&(c, _)| c == j)
            .map(|&(_, v)| v)
            .unwrap_or_default()
    }

    /// Maximum absolute row sum, an upper bound on the spectral norm of a
    /// Hermitian operator.
    pub fn inf_norm(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.iter().all(|&(c, _)| c == i))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let b = TripartiteBasis::new(3);
        assert_eq!(b.dim(), 64);
        for i in 0..b.dim() {
            let (s, a, p) = b.occupations(i);
            assert_eq!(b.index(s, a, p), i);
        }
    }

    #[test]
    fn commutator_is_identity_below_truncation() {
        let basis = TripartiteBasis::new(3);
        for mode in [Mode::Stokes, Mode::AntiStokes, Mode::Phonon] {
            let a = basis.annihilation(mode).to_dense();
            let c = &a * a.adjoint() - a.adjoint() * &a;
            for i in 0..basis.dim() {
                let (s, x, p) = basis.occupations(i);
                let top = match mode {
                    Mode::Stokes => s,
                    Mode::AntiStokes => x,
                    Mode::Phonon => p,
                };
                let expected = if top == basis.n_max { -(basis.n_max as f64) } else { 1.0 };
                assert!((c[(i, i)].re - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sparse_product_matches_dense() {
        let basis = TripartiteBasis::new(2);
        let a = basis.annihilation(Mode::Stokes);
        let b = basis.annihilation(Mode::Phonon).adjoint();
        let sparse = a.mul(&b).add(&b.scale(C64::new(0.0, 2.0))).to_dense();
        let dense = a.to_dense() * b.to_dense() + b.to_dense() * C64::new(0.0, 2.0);
        assert!((sparse - dense).norm() < 1e-14);
    }
}
