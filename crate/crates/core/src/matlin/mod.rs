//! Linear algebra over fields and over polynomial rings.

mod fp;
mod poly;

pub use fp::{residue_kernel, residue_rank, residue_rref, ResidueField};
pub use poly::{MinorTable, PfaffianTable, PolyMatrix};

use crate::error::{structural, Error, Result};
use crate::scalars::{Field, Scalar};

/// Dense row-major matrix of scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(structural(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(ScalarMatrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ScalarMatrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ScalarMatrix { field, rows, cols, data }
    }

    /// Integer entries, convenient for tests and fixed examples.
    pub fn from_i64(field: Field, rows: usize, cols: usize, vals: &[i64]) -> Result<Self> {
        Self::new(field, rows, cols, vals.iter().map(|&v| field.from_i64(v)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_skew(&self) -> bool {
        let f = self.field;
        self.is_square()
            && (0..self.rows).all(|i| {
                f.is_zero(self.get(i, i)) && (0..i).all(|j| *self.get(i, j) == f.neg(self.get(j, i)))
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn mul(&self, other: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.cols != other.rows {
            return Err(structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        Ok(Self::from_fn(f, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(self.get(i, k), other.get(k, j))))
        }))
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(structural("vector length does not match column count"));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(self.get(i, k), &v[k]))))
            .collect())
    }

    pub fn scale(&self, c: &Scalar) -> ScalarMatrix {
        let f = self.field;
        ScalarMatrix { data: self.data.iter().map(|x| f.mul(x, c)).collect(), ..self.clone() }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ScalarMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.invert(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a basis of the right kernel `{v : M v = 0}`.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect();
        (pivots.len(), basis)
    }

    pub fn inverse(&self) -> Result<ScalarMatrix> {
        if !self.is_square() {
            return Err(structural("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let f = self.field;
        let aug = Self::from_fn(f, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(f, n, n, |i, j| r.get(i, j + n).clone()))
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(structural("determinant of a non-square matrix"));
        }
        let f = self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
                return Ok(f.zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            det = f.mul(&det, m.get(c, c));
            let inv = f.invert(m.get(c, c))?;
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Entries as residues; prime fields only.
    pub fn residues(&self) -> Vec<u32> {
        self.data.iter().map(|x| self.field.residue(x)).collect()
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
