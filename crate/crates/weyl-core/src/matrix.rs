//! Dense exact rational matrices: rank, kernels, solving, characteristic
//! polynomials, nilpotency tests, and subquotient bases with coordinate
//! extraction.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::weyl::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> QMatrix {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Rat>(rows: usize, cols: usize, mut f: F) -> QMatrix {
        let mut m = QMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_cols(ambient: usize, cols: &[Vec<Rat>]) -> QMatrix {
        let mut m = QMatrix::zero(ambient, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), ambient);
            for r in 0..ambient {
                if !v[r].is_zero() {
                    m.set(r, c, v[r].clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn scale(&self, s: &Rat) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = QMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c) + a * b;
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rat::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] = &out[r] + &(a * &v[c]);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut t = Rat::zero();
        for i in 0..self.rows {
            t = &t + self.at(i, i);
        }
        t
    }

    /// Row reduce in place to reduced echelon form; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut piv = None;
            for r in row..self.rows {
                if !self.at(r, col).is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = {
                let v = self.at(row, col).clone();
                Rat::one() / v
            };
            for c in col..self.cols {
                let v = self.at(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let f = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c) - &(self.at(row, c) * &f);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel: vectors v with M v = 0.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -m.at(prow, free).clone();
            }
            out.push(v);
        }
        out
    }

    /// Solve M x = b; `None` when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.at(prow, self.cols).clone();
        }
        Some(x)
    }

    /// Coefficients of det(t*I - M), ascending in t.
    pub fn char_poly(&self) -> Vec<Rat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return vec![Rat::one()];
        }
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let mut piv = None;
            for i in (j + 1)..n {
                if !h.at(i, j).is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != j + 1 {
                for c in 0..n {
                    h.data.swap(p * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + p, r * n + j + 1);
                }
            }
            for i in (j + 2)..n {
                if h.at(i, j).is_zero() {
                    continue;
                }
                let f = h.at(i, j) / h.at(j + 1, j);
                for c in 0..n {
                    let v = h.at(i, c) - &(h.at(j + 1, c) * &f);
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = h.at(r, j + 1) + &(h.at(r, i) * &f);
                    h.set(r, j + 1, v);
                }
            }
        }
        let mut ps: Vec<Vec<Rat>> = vec![vec![Rat::one()]];
        for k in 1..=n {
            let prev = &ps[k - 1];
            let mut p = vec![Rat::zero(); prev.len() + 1];
            for (i, c) in prev.iter().enumerate() {
                p[i + 1] = &p[i + 1] + c;
                p[i] = &p[i] - &(c * h.at(k - 1, k - 1));
            }
            let mut beta = Rat::one();
            for m in (1..k).rev() {
                beta = &beta * h.at(m, m - 1);
                if beta.is_zero() {
                    break;
                }
                let coeff = h.at(m - 1, k - 1) * &beta;
                if coeff.is_zero() {
                    continue;
                }
                for (i, c) in ps[m - 1].iter().enumerate() {
                    p[i] = &p[i] - &(c * &coeff);
                }
            }
            ps.push(p);
        }
        ps.pop().unwrap()
    }

    /// Least k with M^k = 0, up to `cap`.  Uses the vanishing of power
    /// traces over a field of characteristic zero for early rejection and
    /// the Cayley-Hamilton bound for conclusiveness.
    pub fn nilpotency(&self, cap: u32) -> Nilpotency {
        assert_eq!(self.rows, self.cols);
        let dim = self.rows as u32;
        if dim == 0 {
            return Nilpotency::Nilpotent { order: 0 };
        }
        let mut pow = self.clone();
        let mut k = 1;
        loop {
            if pow.is_zero() {
                return Nilpotency::Nilpotent { order: k };
            }
            if !pow.trace().is_zero() {
                return Nilpotency::NotNilpotent { tried: k, conclusive: true };
            }
            if k >= cap {
                return Nilpotency::NotNilpotent { tried: k, conclusive: cap >= dim };
            }
            pow = pow.mul(self);
            k += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilpotency {
    Nilpotent { order: u32 },
    NotNilpotent { tried: u32, conclusive: bool },
}

/// Incremental echelon basis used for span membership and extension.
#[derive(Debug, Clone)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_vec(&self, v: &mut [Rat]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for c in 0..self.dim {
                if !row[c].is_zero() {
                    v[c] = &v[c] - &(&row[c] * &f);
                }
            }
        }
    }

    /// Insert `v` if independent of the current span; returns true when the
    /// rank grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w: Vec<Rat> = v.to_vec();
        self.reduce_vec(&mut w);
        let Some(p) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = Rat::one() / w[p].clone();
        for c in w.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut w: Vec<Rat> = v.to_vec();
        self.reduce_vec(&mut w);
        w.iter().all(|c| c.is_zero())
    }
}

/// Basis of a subquotient Z/B of an ambient coordinate space, with exact
/// coordinate extraction for vectors of Z.
#[derive(Debug, Clone)]
pub struct Subquotient {
    ambient: usize,
    reps: Vec<Vec<Rat>>,
    basis_mat: QMatrix,
    nb: usize,
}

impl Subquotient {
    /// `cycles` spans Z, `boundaries` spans B, and B must lie inside Z.
    pub fn new(ambient: usize, cycles: &[Vec<Rat>], boundaries: &[Vec<Rat>]) -> Subquotient {
        let mut ech = Echelon::new(ambient);
        let mut bnd_basis: Vec<Vec<Rat>> = Vec::new();
        for b in boundaries {
            if ech.insert(b) {
                bnd_basis.push(b.clone());
            }
        }
        let nb = bnd_basis.len();
        let mut reps = Vec::new();
        for z in cycles {
            if ech.insert(z) {
                reps.push(z.clone());
            }
        }
        let mut all_cols = bnd_basis;
        all_cols.extend(reps.iter().cloned());
        let basis_mat = QMatrix::from_cols(ambient, &all_cols);
        Subquotient { ambient, reps, basis_mat, nb }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, j: usize) -> &Vec<Rat> {
        &self.reps[j]
    }

    /// Coordinates of `v` on the quotient basis; `v` must lie in Z.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let sol = self
            .basis_mat
            .solve(v)
            .expect("vector lies outside the subquotient's ambient span");
        sol[self.nb..].to_vec()
    }

    /// Matrix of the operator induced on Z/B by an ambient-space action that
    /// preserves Z and B.
    pub fn induced<F: FnMut(&[Rat]) -> Vec<Rat>>(&self, mut action: F) -> QMatrix {
        let q = self.dim();
        let mut out = QMatrix::zero(q, q);
        for j in 0..q {
            let img = action(&self.reps[j]);
            let coords = self.reduce(&img);
            for r in 0..q {
                if !coords[r].is_zero() {
                    out.set(r, j, coords[r].clone());
                }
            }
        }
        out
    }
}
