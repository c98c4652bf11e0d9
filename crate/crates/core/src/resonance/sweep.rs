use rayon::prelude::*;

use crate::enumerate::{check_budget, point_from_index, point_index, space_size, DEFAULT_BUDGET};
use crate::error::{structural, Error, Result};
use crate::matlin::{residue_rank, ResidueField};
use crate::polyring::Monomial;

use super::bgg::BggComplex;
use super::locus::PointLocus;

/// Tuning knobs for exhaustive sweeps.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub budget: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
    /// Evaluate only projective representatives and copy to multiples.
    pub projective: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { budget: DEFAULT_BUDGET, workers: 1, projective: true }
    }
}

/// The BGG differentials reduced to residue coefficient tensors.
///
/// `tensors[i][(j * b_i + u) * b_(i+1) + v]` is the coefficient of `x_j` in entry `(u, v)` of
/// `delta^i`.
#[derive(Debug, Clone)]
pub struct ResidueBgg {
    rf: ResidueField,
    n: usize,
    dims: Vec<usize>,
    tensors: Vec<Vec<u32>>,
}

impl ResidueBgg {
    pub fn new(complex: &BggComplex) -> Result<Self> {
        let field = complex.field();
        let p = field.order().ok_or_else(|| structural("pointwise sweeps need a prime field"))?;
        let n = complex.nvars();
        let dims = complex.dims().to_vec();
        if dims.iter().any(|&d| d > 255) {
            return Err(Error::Unsupported("graded pieces of dimension above 255".into()));
        }
        let vars: Vec<Monomial> = (0..n).map(|j| Monomial::var(n, j)).collect();
        let tensors = complex
            .deltas()
            .iter()
            .map(|d| {
                let (rows, cols) = (d.rows(), d.cols());
                let mut t = vec![0u32; n * rows * cols];
                for u in 0..rows {
                    for v in 0..cols {
                        for (j, x) in vars.iter().enumerate() {
                            t[(j * rows + u) * cols + v] = field.residue(&d.get(u, v).coefficient(x));
                        }
                    }
                }
                t
            })
            .collect();
        Ok(ResidueBgg { rf: ResidueField::new(p), n, dims, tensors })
    }

    pub fn q(&self) -> u32 {
        self.rf.p()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Writes `b_i(A, a)` for every degree into `out`; `scratch` is reused between calls.
    pub fn betti_into(&self, a: &[u32], scratch: &mut Scratch, out: &mut [u8]) {
        let p = self.rf.p() as u64;
        scratch.ranks.clear();
        for (i, t) in self.tensors.iter().enumerate() {
            let (rows, cols) = (self.dims[i], self.dims[i + 1]);
            let size = rows * cols;
            scratch.acc.clear();
            scratch.acc.resize(size, 0);
            for (j, &aj) in a.iter().enumerate() {
                if aj == 0 {
                    continue;
                }
                let slice = &t[j * size..(j + 1) * size];
                for (s, &c) in scratch.acc.iter_mut().zip(slice) {
                    *s += c as u64 * aj as u64;
                }
            }
            scratch.mat.clear();
            scratch.mat.extend(scratch.acc.iter().map(|&v| (v % p) as u32));
            scratch.ranks.push(residue_rank(&self.rf, &mut scratch.mat, rows, cols));
        }
        let ranks = &scratch.ranks;
        for (i, slot) in out.iter_mut().enumerate() {
            let before = if i == 0 { 0 } else { ranks[i - 1] };
            let after = ranks.get(i).copied().unwrap_or(0);
            *slot = (self.dims[i] - before - after) as u8;
        }
    }

    pub fn betti(&self, a: &[u32]) -> Vec<u8> {
        let mut out = vec![0u8; self.dims.len()];
        self.betti_into(a, &mut Scratch::default(), &mut out);
        out
    }
}

/// Reusable buffers for [`ResidueBgg::betti_into`].
#[derive(Debug, Default)]
pub struct Scratch {
    acc: Vec<u64>,
    mat: Vec<u32>,
    ranks: Vec<usize>,
}

/// Twisted Betti numbers at every point of `GF(q)^n`, with loci derived on demand.
#[derive(Debug, Clone)]
pub struct ResonanceProfile {
    q: u32,
    n: usize,
    dims: Vec<usize>,
    /// Point-major: `betti[idx * (m + 1) + i]`.
    betti: Vec<u8>,
    budget: u64,
}

impl ResonanceProfile {
    pub fn compute(complex: &BggComplex, opts: SweepOptions) -> Result<Self> {
        Self::from_residue(&ResidueBgg::new(complex)?, opts)
    }

    pub fn from_residue(bgg: &ResidueBgg, opts: SweepOptions) -> Result<Self> {
        let (q, n) = (bgg.q(), bgg.nvars());
        let total = space_size(q, n).unwrap_or(u128::MAX);
        check_budget(total, opts.budget)?;
        let total = total as usize;
        let width = bgg.dims().len();
        let mut betti = vec![0u8; total * width];

        let run = |betti: &mut Vec<u8>| {
            if opts.projective {
                sweep_projective(bgg, betti, width, opts.workers > 1);
            } else {
                sweep_full(bgg, betti, width, opts.workers > 1);
            }
        };
        if opts.workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            pool.install(|| run(&mut betti));
        } else {
            run(&mut betti);
        }
        Ok(ResonanceProfile { q, n, dims: bgg.dims().to_vec(), betti, budget: opts.budget })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn betti_at(&self, point: &[u32]) -> &[u8] {
        self.betti_at_index(point_index(self.q, point) as usize)
    }

    pub fn betti_at_index(&self, idx: usize) -> &[u8] {
        let w = self.dims.len();
        &self.betti[idx * w..(idx + 1) * w]
    }

    /// `R^i_k = { a : b_i(A, a) >= k }`; full for `k <= 0`, empty for `i > m`.
    pub fn locus(&self, i: usize, k: i64) -> PointLocus {
        let total = self.betti.len() / self.dims.len();
        let mut bits = fixedbitset::FixedBitSet::with_capacity(total);
        if k <= 0 {
            bits.insert_range(..);
        } else if i < self.dims.len() {
            let w = self.dims.len();
            for idx in 0..total {
                if self.betti[idx * w + i] as i64 >= k {
                    bits.insert(idx);
                }
            }
        }
        PointLocus::from_bits(self.q, self.n, bits)
    }

    pub fn count(&self, i: usize, k: i64) -> usize {
        self.locus(i, k).count()
    }

    /// Checks `R^i_(k+1) ⊆ R^i_k` and that `0 ∈ R^i_k` iff `k <= b_i`.
    pub fn check_filtration(&self) -> std::result::Result<(), String> {
        let origin = self.betti_at_index(0);
        for (i, &b) in self.dims.iter().enumerate() {
            if origin[i] as usize != b {
                return Err(format!("b_{i}(A, 0) = {} but b_{i} = {b}", origin[i]));
            }
            for k in 0..=b as i64 + 1 {
                let (big, small) = (self.locus(i, k), self.locus(i, k + 1));
                if let Some(pt) = small.first_outside(&big).map_err(|e| e.to_string())? {
                    return Err(format!("R^{i}_{} not inside R^{i}_{k} at {pt:?}", k + 1));
                }
                let has_zero = self.locus(i, k).contains_index(0);
                if has_zero != (k <= b as i64) {
                    return Err(format!("origin membership wrong for R^{i}_{k}"));
                }
            }
        }
        Ok(())
    }
}

fn rep_counts(q: u32, n: usize) -> Vec<usize> {
    (0..n).map(|lead| (q as usize).pow((n - lead - 1) as u32)).collect()
}

/// Projective representative index of a nonzero point, plus nothing for the origin.
fn rep_number(rf: &ResidueField, q: u32, point: &[u32], offsets: &[usize]) -> Option<usize> {
    let lead = point.iter().position(|&a| a != 0)?;
    let inv = rf.inv(point[lead]);
    let mut tail = 0usize;
    for &a in &point[lead + 1..] {
        tail = tail * q as usize + rf.mul(a, inv) as usize;
    }
    Some(offsets[lead] + tail)
}

fn rep_point(q: u32, n: usize, offsets: &[usize], counts: &[usize], number: usize) -> Vec<u32> {
    let lead = (0..n).rev().find(|&l| offsets[l] <= number).unwrap_or(0);
    debug_assert!(number - offsets[lead] < counts[lead]);
    let mut pt = vec![0u32; n];
    pt[lead] = 1;
    let tail = point_from_index(q, n - lead - 1, (number - offsets[lead]) as u64);
    pt[lead + 1..].copy_from_slice(&tail);
    pt
}

fn sweep_projective(bgg: &ResidueBgg, betti: &mut [u8], width: usize, parallel: bool) {
    let (q, n) = (bgg.q(), bgg.nvars());
    let counts = rep_counts(q, n);
    let mut offsets = Vec::with_capacity(n);
    let mut acc = 0usize;
    for &c in &counts {
        offsets.push(acc);
        acc += c;
    }
    let reps = acc;
    let mut rep_betti = vec![0u8; reps * width];
    let chunk = 4096;
    let work = |(ci, slot): (usize, &mut [u8])| {
        let mut scratch = Scratch::default();
        for (off, out) in slot.chunks_mut(width).enumerate() {
            let pt = rep_point(q, n, &offsets, &counts, ci * chunk + off);
            bgg.betti_into(&pt, &mut scratch, out);
        }
    };
    if parallel {
        rep_betti.par_chunks_mut(chunk * width).enumerate().for_each(work);
    } else {
        rep_betti.chunks_mut(chunk * width).enumerate().for_each(work);
    }

    // origin
    betti[..width].copy_from_slice(&bgg.dims().iter().map(|&d| d as u8).collect::<Vec<_>>());
    let rf = &bgg.rf;
    let fill = |(ci, slot): (usize, &mut [u8])| {
        for (off, out) in slot.chunks_mut(width).enumerate() {
            let idx = ci * chunk + off;
            if idx == 0 {
                continue;
            }
            let pt = point_from_index(q, n, idx as u64);
            if let Some(r) = rep_number(rf, q, &pt, &offsets) {
                out.copy_from_slice(&rep_betti[r * width..(r + 1) * width]);
            }
        }
    };
    if parallel {
        betti.par_chunks_mut(chunk * width).enumerate().for_each(fill);
    } else {
        betti.chunks_mut(chunk * width).enumerate().for_each(fill);
    }
}

fn sweep_full(bgg: &ResidueBgg, betti: &mut [u8], width: usize, parallel: bool) {
    let (q, n) = (bgg.q(), bgg.nvars());
    let chunk = 4096;
    let work = |(ci, slot): (usize, &mut [u8])| {
        let mut scratch = Scratch::default();
        for (off, out) in slot.chunks_mut(width).enumerate() {
            let pt = point_from_index(q, n, (ci * chunk + off) as u64);
            bgg.betti_into(&pt, &mut scratch, out);
        }
    };
    if parallel {
        betti.par_chunks_mut(chunk * width).enumerate().for_each(work);
    } else {
        betti.chunks_mut(chunk * width).enumerate().for_each(work);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GradedAlgebra, PdAlgebra};
    use crate::forms::Trivector;
    use crate::scalars::Field;

    fn profile(expr: &str, n: usize, p: u32, opts: SweepOptions) -> ResonanceProfile {
        let mu = Trivector::parse(expr, n, Field::prime(p).unwrap()).unwrap();
        let c = BggComplex::for_pd3(&PdAlgebra::from_trivector(&mu)).unwrap();
        ResonanceProfile::compute(&c, opts).unwrap()
    }

    #[test]
    fn form_three_over_gf3() {
        let pr = profile("125+345", 5, 3, SweepOptions::default());
        assert_eq!(pr.count(1, 1), 81);
        assert_eq!(pr.count(1, 2), 81);
        assert!(pr.locus(1, 3).is_origin());
        assert!(pr.locus(1, 1).contains(&[1, 2, 0, 1, 0]));
        pr.check_filtration().unwrap();
    }

    #[test]
    fn projective_full_and_parallel_agree() {
        let base = profile("123+145+167", 7, 3, SweepOptions::default());
        let full = profile("123+145+167", 7, 3, SweepOptions { projective: false, ..Default::default() });
        let par = profile("123+145+167", 7, 3, SweepOptions { workers: 2, ..Default::default() });
        assert_eq!(base.betti, full.betti);
        assert_eq!(base.betti, par.betti);
    }

    #[test]
    fn zero_form_is_full_below_top() {
        let pr = profile("", 3, 3, SweepOptions::default());
        assert_eq!(pr.count(1, 1), 27);
        assert_eq!(pr.count(1, 2), 27);
        assert!(pr.locus(1, 3).is_origin());
    }

    #[test]
    fn torus_over_gf5() {
        let f = Field::prime(5).unwrap();
        let torus = GradedAlgebra::exterior(f, 2);
        let pr = ResonanceProfile::compute(&BggComplex::build(&torus).unwrap(), SweepOptions::default()).unwrap();
        assert!(pr.locus(1, 1).is_origin());
        assert!(pr.locus(2, 1).is_origin());
        assert!(pr.locus(0, 1).is_origin());
    }

    #[test]
    fn budget_refusal() {
        let mu = Trivector::parse("123", 3, Field::prime(7).unwrap()).unwrap();
        let c = BggComplex::for_pd3(&PdAlgebra::from_trivector(&mu)).unwrap();
        let err = ResonanceProfile::compute(&c, SweepOptions { budget: 100, ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }
}
