use std::collections::HashMap;

use crate::error::{structural, Result};
use crate::polyring::Polynomial;
use crate::scalars::{Field, Scalar};

use super::{combinations, ScalarMatrix};

/// Row-major matrix of polynomials over a common ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(nvars: usize, field: Field, rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(structural(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|p| p.nvars() != nvars || p.field() != field) {
            return Err(structural(format!(
                "entry in ring ({} vars, {}) inside a matrix over ({nvars} vars, {field})",
                bad.nvars(),
                bad.field()
            )));
        }
        Ok(PolyMatrix { nvars, field, rows, cols, entries })
    }

    pub fn zeros(nvars: usize, field: Field, rows: usize, cols: usize) -> Self {
        PolyMatrix { nvars, field, rows, cols, entries: vec![Polynomial::zero(nvars, field); rows * cols] }
    }

    pub fn from_fn(
        nvars: usize,
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(e.nvars() == nvars && e.field() == field, "entry outside the matrix ring");
                entries.push(e);
            }
        }
        PolyMatrix { nvars, field, rows, cols, entries }
    }

    /// Parses rows of polynomial text, e.g. `[["0", "x5"], ["-x5", "0"]]`.
    pub fn parse(nvars: usize, field: Field, rows: &[&[&str]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(structural("ragged matrix"));
            }
            for t in row.iter() {
                entries.push(Polynomial::parse(t, nvars, field)?);
            }
        }
        Self::new(nvars, field, r, c, entries)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Square, zero diagonal, transpose equals negation.
    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (0..i).all(|j| *self.get(i, j) == self.get(j, i).neg())
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.nvars, self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.nvars, self.field, self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows || self.nvars != other.nvars || self.field != other.field {
            return Err(structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.nvars, self.field, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Polynomial::zero(self.nvars, self.field), |acc, k| {
                acc.add(&self.get(i, k).mul(other.get(k, j)))
            })
        }))
    }

    /// Left multiplication by a scalar matrix (`S * self`).
    pub fn scalar_left_mul(&self, s: &ScalarMatrix) -> Result<PolyMatrix> {
        if s.cols() != self.rows {
            return Err(structural("dimension mismatch in scalar_left_mul"));
        }
        Ok(Self::from_fn(self.nvars, self.field, s.rows(), self.cols, |i, j| {
            (0..self.rows).fold(Polynomial::zero(self.nvars, self.field), |acc, k| {
                acc.add(&self.get(k, j).scale(s.get(i, k)))
            })
        }))
    }

    /// Right multiplication by a scalar matrix (`self * S`).
    pub fn scalar_right_mul(&self, s: &ScalarMatrix) -> Result<PolyMatrix> {
        if s.rows() != self.cols {
            return Err(structural("dimension mismatch in scalar_right_mul"));
        }
        Ok(Self::from_fn(self.nvars, self.field, self.rows, s.cols(), |i, j| {
            (0..self.cols).fold(Polynomial::zero(self.nvars, self.field), |acc, k| {
                acc.add(&self.get(i, k).scale(s.get(k, j)))
            })
        }))
    }

    /// Applies the ring map `x_j -> images[j]` entrywise.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<PolyMatrix> {
        let (tn, tf) = images.first().map_or((0, self.field), |p| (p.nvars(), p.field()));
        let entries = self.entries.iter().map(|e| e.substitute(images)).collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(tn, tf, self.rows, self.cols, entries)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<ScalarMatrix> {
        let vals = self.entries.iter().map(|e| e.eval(point)).collect::<Result<Vec<_>>>()?;
        ScalarMatrix::new(self.field, self.rows, self.cols, vals)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        Self::from_fn(self.nvars, self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn block_sum(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.nvars != other.nvars || self.field != other.field {
            return Err(structural("block sum of matrices over different rings"));
        }
        let zero = Polynomial::zero(self.nvars, self.field);
        Ok(Self::from_fn(self.nvars, self.field, self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => zero.clone(),
            }
        }))
    }

    /// Determinant by cofactor expansion, memoized over column subsets; no division.
    pub fn det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(structural(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(MinorTable::new(self).minor(&all, &all))
    }

    /// Pfaffian by recursive expansion along the first row; `pf([[0,a],[-a,0]]) = a`.
    pub fn pfaffian(&self) -> Result<Polynomial> {
        if !self.is_skew() {
            return Err(structural("Pfaffian of a non-skew matrix"));
        }
        if self.rows % 2 == 1 {
            return Err(structural(format!("Pfaffian of odd size {}", self.rows)));
        }
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(PfaffianTable::new(self)?.pfaffian(&all))
    }

    /// The maximal Pfaffian, taken to be 0 when the size is odd.
    pub fn maximal_pfaffian(&self) -> Result<Polynomial> {
        if self.rows % 2 == 1 && self.is_skew() {
            return Ok(Polynomial::zero(self.nvars, self.field));
        }
        self.pfaffian()
    }

    /// All `r x r` minors in lexicographic (row subset, column subset) order.
    ///
    /// `r = 0` gives the unit ideal `[1]`; `r > min(rows, cols)` gives the zero ideal `[]`.
    pub fn minors_ideal(&self, r: usize) -> Vec<Polynomial> {
        MinorTable::new(self).minors_of_size(r)
    }

    /// Pfaffians of all principal `size x size` submatrices, in lexicographic subset order.
    pub fn pfaffians_ideal(&self, size: usize) -> Result<Vec<Polynomial>> {
        if size % 2 == 1 {
            return Err(structural(format!("Pfaffian ideal of odd size {size}")));
        }
        Ok(PfaffianTable::new(self)?.pfaffians_of_size(size))
    }
}

fn mask(idx: &[usize]) -> u64 {
    idx.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

/// Memoized minors of a fixed matrix, shared across sizes.
pub struct MinorTable<'a> {
    m: &'a PolyMatrix,
    memo: HashMap<(u64, u64), Polynomial>,
}

impl<'a> MinorTable<'a> {
    pub fn new(m: &'a PolyMatrix) -> Self {
        assert!(m.rows <= 64 && m.cols <= 64, "minor masks are 64-bit");
        MinorTable { m, memo: HashMap::new() }
    }

    pub fn matrix(&self) -> &PolyMatrix {
        self.m
    }

    /// Determinant of the submatrix on sorted `rows` x `cols`.
    pub fn minor(&mut self, rows: &[usize], cols: &[usize]) -> Polynomial {
        assert_eq!(rows.len(), cols.len());
        self.minor_mask(mask(rows), mask(cols))
    }

    fn minor_mask(&mut self, rmask: u64, cmask: u64) -> Polynomial {
        let (n, f) = (self.m.nvars, self.m.field);
        if rmask == 0 {
            return Polynomial::one(n, f);
        }
        if let Some(v) = self.memo.get(&(rmask, cmask)) {
            return v.clone();
        }
        let r0 = rmask.trailing_zeros() as usize;
        let rest = rmask & !(1u64 << r0);
        let mut acc = Polynomial::zero(n, f);
        let mut pos = 0;
        let mut cm = cmask;
        while cm != 0 {
            let c = cm.trailing_zeros() as usize;
            cm &= cm - 1;
            let entry = self.m.get(r0, c);
            if !entry.is_zero() {
                let sub = self.minor_mask(rest, cmask & !(1u64 << c));
                if !sub.is_zero() {
                    let t = entry.mul(&sub);
                    acc = if pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
            }
            pos += 1;
        }
        self.memo.insert((rmask, cmask), acc.clone());
        acc
    }

    pub fn minors_of_size(&mut self, r: usize) -> Vec<Polynomial> {
        let (n, f) = (self.m.nvars, self.m.field);
        if r == 0 {
            return vec![Polynomial::one(n, f)];
        }
        let mut out = Vec::new();
        for rows in combinations(self.m.rows, r) {
            for cols in combinations(self.m.cols, r) {
                out.push(self.minor(&rows, &cols));
            }
        }
        out
    }
}

/// Memoized principal Pfaffians of a fixed skew matrix.
pub struct PfaffianTable<'a> {
    m: &'a PolyMatrix,
    memo: HashMap<u64, Polynomial>,
}

impl<'a> PfaffianTable<'a> {
    pub fn new(m: &'a PolyMatrix) -> Result<Self> {
        if !m.is_skew() {
            return Err(structural("Pfaffians of a non-skew matrix"));
        }
        assert!(m.rows <= 64);
        Ok(PfaffianTable { m, memo: HashMap::new() })
    }

    /// Pfaffian of the principal submatrix on sorted `idx` (even length).
    pub fn pfaffian(&mut self, idx: &[usize]) -> Polynomial {
        assert!(idx.len() % 2 == 0, "odd principal Pfaffian");
        self.pf_mask(mask(idx))
    }

    fn pf_mask(&mut self, s: u64) -> Polynomial {
        let (n, f) = (self.m.nvars, self.m.field);
        if s == 0 {
            return Polynomial::one(n, f);
        }
        if let Some(v) = self.memo.get(&s) {
            return v.clone();
        }
        let i = s.trailing_zeros() as usize;
        let rest = s & !(1u64 << i);
        let mut acc = Polynomial::zero(n, f);
        let mut pos = 0;
        let mut cm = rest;
        while cm != 0 {
            let j = cm.trailing_zeros() as usize;
            cm &= cm - 1;
            let entry = self.m.get(i, j);
            if !entry.is_zero() {
                let sub = self.pf_mask(rest & !(1u64 << j));
                if !sub.is_zero() {
                    let t = entry.mul(&sub);
                    acc = if pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
            }
            pos += 1;
        }
        self.memo.insert(s, acc.clone());
        acc
    }

    pub fn pfaffians_of_size(&mut self, size: usize) -> Vec<Polynomial> {
        combinations(self.m.rows, size).iter().map(|s| self.pfaffian(s)).collect()
    }
}
