use fixedbitset::FixedBitSet;

use crate::enumerate::{check_budget, point_from_index, point_index, space_size, ProjectivePoints};
use crate::error::{structural, Result};
use crate::matlin::ResidueField;

/// An explicit subset of `GF(q)^n`, indexed lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointLocus {
    q: u32,
    n: usize,
    bits: FixedBitSet,
}

impl PointLocus {
    pub fn empty(q: u32, n: usize, budget: u64) -> Result<Self> {
        let size = space_size(q, n).unwrap_or(u128::MAX);
        check_budget(size, budget)?;
        Ok(PointLocus { q, n, bits: FixedBitSet::with_capacity(size as usize) })
    }

    pub fn full(q: u32, n: usize, budget: u64) -> Result<Self> {
        let mut out = Self::empty(q, n, budget)?;
        out.bits.insert_range(..);
        Ok(out)
    }

    /// The single point `0`.
    pub fn origin(q: u32, n: usize, budget: u64) -> Result<Self> {
        let mut out = Self::empty(q, n, budget)?;
        out.bits.insert(0);
        Ok(out)
    }

    pub fn from_fn(q: u32, n: usize, budget: u64, mut pred: impl FnMut(&[u32]) -> bool) -> Result<Self> {
        let mut out = Self::empty(q, n, budget)?;
        let mut pt = vec![0u32; n];
        let mut idx = 0usize;
        loop {
            if pred(&pt) {
                out.bits.insert(idx);
            }
            idx += 1;
            if !crate::enumerate::next_point(q, &mut pt) {
                break;
            }
        }
        Ok(out)
    }

    /// Builds a homogeneous locus from a predicate evaluated on projective representatives only.
    /// The origin is included iff `origin` is true.
    pub fn from_projective(q: u32, n: usize, budget: u64, origin: bool, mut pred: impl FnMut(&[u32]) -> bool) -> Result<Self> {
        let mut out = Self::empty(q, n, budget)?;
        if origin {
            out.bits.insert(0);
        }
        for rep in ProjectivePoints::new(q, n) {
            if pred(&rep) {
                out.insert_line(&rep);
            }
        }
        Ok(out)
    }

    pub(crate) fn from_bits(q: u32, n: usize, bits: FixedBitSet) -> Self {
        PointLocus { q, n, bits }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn space_size(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.space_size()
    }

    /// True iff the locus is exactly `{0}`.
    pub fn is_origin(&self) -> bool {
        self.bits.contains(0) && self.count() == 1
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        point.len() == self.n && self.bits.contains(point_index(self.q, point) as usize)
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    pub fn insert(&mut self, point: &[u32]) {
        self.bits.insert(point_index(self.q, point) as usize);
    }

    /// Inserts every nonzero multiple of `point`.
    pub fn insert_line(&mut self, point: &[u32]) {
        let q = self.q as u64;
        let mut scaled = vec![0u32; self.n];
        for lambda in 1..q {
            for (s, &a) in scaled.iter_mut().zip(point) {
                *s = (a as u64 * lambda % q) as u32;
            }
            self.bits.insert(point_index(self.q, &scaled) as usize);
        }
    }

    fn same_space(&self, other: &PointLocus) -> Result<()> {
        if self.q != other.q || self.n != other.n {
            return Err(structural(format!(
                "loci live in GF({})^{} and GF({})^{}",
                self.q, self.n, other.q, other.n
            )));
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &PointLocus) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn union(&self, other: &PointLocus) -> Result<PointLocus> {
        self.same_space(other)?;
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        Ok(out)
    }

    pub fn intersection(&self, other: &PointLocus) -> Result<PointLocus> {
        self.same_space(other)?;
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        Ok(out)
    }

    /// First point (lexicographically) in exactly one of the two loci.
    pub fn first_difference(&self, other: &PointLocus) -> Result<Option<Vec<u32>>> {
        self.same_space(other)?;
        Ok(self
            .bits
            .symmetric_difference(&other.bits)
            .next()
            .map(|idx| point_from_index(self.q, self.n, idx as u64)))
    }

    /// First point of `self` missing from `other`.
    pub fn first_outside(&self, other: &PointLocus) -> Result<Option<Vec<u32>>> {
        self.same_space(other)?;
        Ok(self.bits.difference(&other.bits).next().map(|idx| point_from_index(self.q, self.n, idx as u64)))
    }

    /// Closed under multiplication by nonzero scalars.
    pub fn is_homogeneous(&self) -> bool {
        let q = self.q as u64;
        let mut scaled = vec![0u32; self.n];
        for idx in self.bits.ones() {
            let pt = point_from_index(self.q, self.n, idx as u64);
            for lambda in 2..q {
                for (s, &a) in scaled.iter_mut().zip(&pt) {
                    *s = (a as u64 * lambda % q) as u32;
                }
                if !self.bits.contains(point_index(self.q, &scaled) as usize) {
                    return false;
                }
            }
        }
        true
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.bits.ones().map(|idx| point_from_index(self.q, self.n, idx as u64))
    }

    /// Up to `limit` points in lexicographic order, skipping the origin when others exist.
    pub fn sample_points(&self, limit: usize) -> Vec<Vec<u32>> {
        let nonzero: Vec<Vec<u32>> = self.bits.ones().filter(|&i| i != 0).take(limit).map(|i| point_from_index(self.q, self.n, i as u64)).collect();
        if nonzero.is_empty() && self.bits.contains(0) {
            vec![vec![0; self.n]]
        } else {
            nonzero
        }
    }

    /// `self x other` inside `GF(q)^(n + n')`, own coordinates first.
    pub fn product(&self, other: &PointLocus, budget: u64) -> Result<PointLocus> {
        if self.q != other.q {
            return Err(structural("product of loci over different fields"));
        }
        let mut out = PointLocus::empty(self.q, self.n + other.n, budget)?;
        let width = other.space_size();
        for a in self.bits.ones() {
            for b in other.bits.ones() {
                out.bits.insert(a * width + b);
            }
        }
        Ok(out)
    }

    /// `{ g x : x in self }` for a square matrix `g` of residues (row-major).
    pub fn image(&self, g: &[u32]) -> Result<PointLocus> {
        if g.len() != self.n * self.n {
            return Err(structural("image under a matrix of the wrong shape"));
        }
        let rf = ResidueField::new(self.q);
        let mut out = PointLocus { q: self.q, n: self.n, bits: FixedBitSet::with_capacity(self.bits.len()) };
        let mut y = vec![0u32; self.n];
        for x in self.points() {
            for (r, slot) in y.iter_mut().enumerate() {
                let mut acc = 0u32;
                for (c, &xc) in x.iter().enumerate() {
                    acc = rf.add(acc, rf.mul(g[r * self.n + c], xc));
                }
                *slot = acc;
            }
            out.insert(&y);
        }
        Ok(out)
    }

    /// A short human-readable description used in reports.
    pub fn describe(&self) -> String {
        if self.is_empty() {
            "empty".into()
        } else if self.is_full() {
            format!("all {} points", self.space_size())
        } else if self.is_origin() {
            "{0}".into()
        } else {
            format!("{} points", self.count())
        }
    }
}
