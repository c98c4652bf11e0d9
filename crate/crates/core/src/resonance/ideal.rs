use std::collections::{BTreeSet, HashMap};

use crate::enumerate::{check_budget, space_size, ProjectivePoints};
use crate::error::{structural, Error, Result};
use crate::matlin::{combinations, PolyMatrix, ResidueField};
use crate::polyring::{Monomial, Polynomial};
use crate::scalars::Field;

use super::bgg::BggComplex;
use super::locus::PointLocus;

/// The shape of a defining ideal of a resonance variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealShape {
    /// The zero ideal; its locus is everything.
    Zero,
    /// The unit ideal; empty locus.
    Unit,
    /// `(x_1, ..., x_n)`; locus `{0}`.
    Maximal,
    /// `I_size(delta^delta)`.
    Minors { delta: usize, size: usize },
    /// `I_size(delta^(degree-1) ⊕ delta^degree)`.
    BlockSum { degree: usize, size: usize },
}

/// The ideal cutting out `R^i_k(A)` set-theoretically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceIdeal {
    pub degree: usize,
    pub depth: i64,
    pub shape: IdealShape,
}

impl ResonanceIdeal {
    /// `I_(b_i - k + 1)(delta^(i-1) ⊕ delta^i)`, valid for every depth.
    pub fn block_form(dims: &[usize], i: usize, k: i64) -> Self {
        let b = dims.get(i).copied().unwrap_or(0) as i64;
        let shape = if k <= 0 {
            IdealShape::Zero
        } else if k > b {
            IdealShape::Unit
        } else {
            IdealShape::BlockSum { degree: i, size: (b - k + 1) as usize }
        };
        ResonanceIdeal { degree: i, depth: k, shape }
    }

    /// The preferred ideal: `I_(n-k)(delta^1)` in degree 1, the block form elsewhere.
    pub fn for_depth(dims: &[usize], i: usize, k: i64) -> Self {
        if i != 1 || dims.len() < 3 {
            return Self::block_form(dims, i, k);
        }
        let n = dims[1] as i64;
        let shape = if k < 0 {
            IdealShape::Zero
        } else if k < n {
            IdealShape::Minors { delta: 1, size: (n - k) as usize }
        } else if k == n {
            IdealShape::Maximal
        } else {
            IdealShape::Unit
        };
        ResonanceIdeal { degree: 1, depth: k, shape }
    }

    pub fn describe(&self) -> String {
        match &self.shape {
            IdealShape::Zero => "0".into(),
            IdealShape::Unit => "(1)".into(),
            IdealShape::Maximal => "(x_1, ..., x_n)".into(),
            IdealShape::Minors { delta, size } => format!("I_{size}(delta^{delta})"),
            IdealShape::BlockSum { degree, size } if *degree == 0 => format!("I_{size}(delta^0)"),
            IdealShape::BlockSum { degree, size } => format!("I_{size}(delta^{} + delta^{degree})", degree - 1),
        }
    }

    /// Explicit generators. Refuses when more than `limit` would be produced.
    pub fn generators(&self, complex: &BggComplex, limit: usize) -> Result<Vec<Polynomial>> {
        let (n, f) = (complex.nvars(), complex.field());
        let out = match &self.shape {
            IdealShape::Zero => Vec::new(),
            IdealShape::Unit => vec![Polynomial::one(n, f)],
            IdealShape::Maximal => (0..n).map(|j| Polynomial::var(n, f, j)).collect(),
            IdealShape::Minors { delta, size } => {
                let d = complex.delta(*delta);
                check_count(minor_count(d.rows(), d.cols(), *size), limit)?;
                d.minors_ideal(*size)
            }
            IdealShape::BlockSum { degree, size } => {
                let lower = degree.checked_sub(1).map(|j| complex.delta(j));
                let upper = complex.deltas().get(*degree);
                let mut total = 0u128;
                for s in 0..=*size {
                    total += side_count(lower, s) * side_count(upper, size - s);
                }
                check_count(total, limit)?;
                let mut gens = Vec::new();
                for s in 0..=*size {
                    let left = side_minors(lower, s, n, f);
                    let right = side_minors(upper, size - s, n, f);
                    for a in &left {
                        for b in &right {
                            let prod = a.mul(b);
                            if !prod.is_zero() {
                                gens.push(prod);
                            }
                        }
                    }
                }
                gens
            }
        };
        Ok(out)
    }
}

fn check_count(count: u128, limit: usize) -> Result<()> {
    if count > limit as u128 {
        return Err(Error::Budget { needed: count, limit: limit as u64 });
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn minor_count(rows: usize, cols: usize, size: usize) -> u128 {
    binom(rows, size) * binom(cols, size)
}

fn side_count(m: Option<&PolyMatrix>, s: usize) -> u128 {
    match m {
        None => u128::from(s == 0),
        Some(d) if s == 0 => {
            let _ = d;
            1
        }
        Some(d) => minor_count(d.rows(), d.cols(), s),
    }
}

fn side_minors(m: Option<&PolyMatrix>, s: usize, n: usize, f: Field) -> Vec<Polynomial> {
    match m {
        None if s == 0 => vec![Polynomial::one(n, f)],
        None => Vec::new(),
        Some(d) => d.minors_ideal(s),
    }
}

/// Depths in degree 1 of a `PD_3` algebra map to Pfaffian sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfaffianShape {
    Zero,
    Unit,
    Maximal,
    Size(usize),
}

/// Which Pfaffian ideal of `delta^1` cuts out `R^1_k` for `n = b_1`.
pub fn pfaffian_shape(n: usize, k: i64) -> PfaffianShape {
    let n_i = n as i64;
    if k < 0 {
        return PfaffianShape::Zero;
    }
    if k == n_i {
        return PfaffianShape::Maximal;
    }
    if k > n_i {
        return PfaffianShape::Unit;
    }
    let size = if n % 2 == 0 { n_i - 2 * (k / 2) } else { n_i - 2 * ((k + 1) / 2) + 1 };
    if size > n_i {
        PfaffianShape::Zero
    } else {
        PfaffianShape::Size(size as usize)
    }
}

/// Pfaffian generators for `R^1_k` of a `PD_3` algebra.
pub fn pfaffian_loci(complex: &BggComplex, k: i64) -> Result<Vec<Polynomial>> {
    let (n, f) = (complex.nvars(), complex.field());
    if complex.top_degree() != 3 {
        return Err(structural("Pfaffian loci are defined for PD_3 algebras"));
    }
    Ok(match pfaffian_shape(n, k) {
        PfaffianShape::Zero => Vec::new(),
        PfaffianShape::Unit => vec![Polynomial::one(n, f)],
        PfaffianShape::Maximal => (0..n).map(|j| Polynomial::var(n, f, j)).collect(),
        PfaffianShape::Size(s) => complex.delta(1).pfaffians_ideal(s)?,
    })
}

/// Dense homogeneous polynomials over `GF(p)`: monomials of each degree up to a bound,
/// with multiplication-by-variable index tables.
struct MonomialTable {
    n: usize,
    exps: Vec<Vec<Vec<u8>>>,
    mul_var: Vec<Vec<u32>>,
}

impl MonomialTable {
    fn new(n: usize, max_degree: usize) -> Self {
        let mut exps: Vec<Vec<Vec<u8>>> = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let mut out = Vec::new();
            let mut cur = vec![0u8; n];
            gen_monomials(n, d, 0, &mut cur, &mut out);
            exps.push(out);
        }
        let mut mul_var = Vec::with_capacity(max_degree);
        for d in 0..max_degree {
            let index: HashMap<&[u8], u32> =
                exps[d + 1].iter().enumerate().map(|(i, e)| (e.as_slice(), i as u32)).collect();
            let mut table = vec![0u32; exps[d].len() * n];
            let mut tmp = vec![0u8; n];
            for (m, e) in exps[d].iter().enumerate() {
                for j in 0..n {
                    tmp.copy_from_slice(e);
                    tmp[j] += 1;
                    table[m * n + j] = index[tmp.as_slice()];
                }
            }
            mul_var.push(table);
        }
        MonomialTable { n, exps, mul_var }
    }

    fn len(&self, d: usize) -> usize {
        self.exps[d].len()
    }

    /// `acc += sign * lin * poly` where `lin` has `n` coefficients and `poly` has degree `d`.
    fn mul_linear_into(&self, rf: &ResidueField, d: usize, lin: &[u32], poly: &[u32], negate: bool, acc: &mut [u32]) {
        let p = rf.p() as u64;
        let table = &self.mul_var[d];
        for (m, &c) in poly.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = if negate { rf.neg(c) } else { c } as u64;
            for (j, &l) in lin.iter().enumerate() {
                if l != 0 {
                    let slot = &mut acc[table[m * self.n + j] as usize];
                    *slot = ((*slot as u64 + c * l as u64) % p) as u32;
                }
            }
        }
    }
}

fn gen_monomials(n: usize, d: usize, pos: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if pos + 1 == n {
        cur[pos] = d as u8;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=d).rev() {
        cur[pos] = e as u8;
        gen_monomials(n, d - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// A homogeneous residue polynomial flattened for evaluation.
#[derive(Debug, Clone)]
struct SparseResidue {
    degree: usize,
    terms: Vec<(u32, Vec<(u8, u8)>)>,
}

impl SparseResidue {
    fn from_dense(table: &MonomialTable, d: usize, coeffs: &[u32]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(m, &c)| {
                let vars = table.exps[d][m]
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| (j as u8, e))
                    .collect();
                (c, vars)
            })
            .collect();
        SparseResidue { degree: d, terms }
    }

    /// Evaluates with a power table `pw[j * stride + e] = a_j^e`.
    fn eval(&self, p: u64, pw: &[u64], stride: usize) -> u64 {
        let mut acc = 0u64;
        for (c, vars) in &self.terms {
            let mut t = *c as u64;
            for &(j, e) in vars {
                t = t * pw[j as usize * stride + e as usize] % p;
            }
            acc += t;
        }
        acc % p
    }
}

/// Distinct generators up to scalars, ordered by term count.
fn normalise(rf: &ResidueField, table: &MonomialTable, d: usize, dense: Vec<Vec<u32>>) -> Vec<SparseResidue> {
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for mut v in dense {
        let Some(&lead) = v.iter().find(|&&c| c != 0) else {
            continue;
        };
        let inv = rf.inv(lead);
        for c in v.iter_mut() {
            *c = rf.mul(*c, inv);
        }
        seen.insert(v);
    }
    let mut out: Vec<SparseResidue> = seen.iter().map(|v| SparseResidue::from_dense(table, d, v)).collect();
    out.sort_by_key(|g| g.terms.len());
    out
}

/// A matrix of linear forms reduced mod `p`: `lin[(u * cols + v) * n + j]`.
#[derive(Debug, Clone)]
struct LinearResidueMatrix {
    rows: usize,
    cols: usize,
    lin: Vec<u32>,
}

impl LinearResidueMatrix {
    fn new(m: &PolyMatrix) -> Result<Self> {
        let (n, f) = (m.nvars(), m.field());
        if m.rows() > 64 || m.cols() > 64 {
            return Err(Error::Unsupported("minor oracle limited to 64 rows and columns".into()));
        }
        let vars: Vec<Monomial> = (0..n).map(|j| Monomial::var(n, j)).collect();
        let mut lin = vec![0u32; m.rows() * m.cols() * n];
        for u in 0..m.rows() {
            for v in 0..m.cols() {
                let e = m.get(u, v);
                if !e.is_zero() && e.homogeneous_degree() != Some(1) {
                    return Err(structural("minor oracle expects a matrix of linear forms"));
                }
                for (j, x) in vars.iter().enumerate() {
                    lin[(u * m.cols() + v) * n + j] = f.residue(&e.coefficient(x));
                }
            }
        }
        Ok(LinearResidueMatrix { rows: m.rows(), cols: m.cols(), lin })
    }

    fn entry(&self, n: usize, u: usize, v: usize) -> &[u32] {
        &self.lin[(u * self.cols + v) * n..(u * self.cols + v + 1) * n]
    }
}

fn mask(idx: &[usize]) -> u64 {
    idx.iter().fold(0u64, |m, &i| m | (1 << i))
}

/// Pointwise vanishing loci of minor and Pfaffian ideals of the BGG differentials over `GF(p)`.
///
/// Generators are expanded symbolically (dense, mod `p`) and evaluated at every projective
/// point; no ranks are computed, so this is independent of the sweep in
/// [`super::ResonanceProfile`].
pub struct IdealOracle {
    rf: ResidueField,
    n: usize,
    budget: u64,
    mats: Vec<LinearResidueMatrix>,
    table: Option<MonomialTable>,
    minor_gens: HashMap<(usize, usize), Vec<SparseResidue>>,
    minor_loci: HashMap<(usize, usize), PointLocus>,
    pf_gens: HashMap<(usize, usize), Vec<SparseResidue>>,
    pf_loci: HashMap<(usize, usize), PointLocus>,
}

impl IdealOracle {
    pub fn new(complex: &BggComplex, budget: u64) -> Result<Self> {
        let p = complex.field().order().ok_or_else(|| structural("the ideal oracle needs a prime field"))?;
        let n = complex.nvars();
        check_budget(space_size(p, n).unwrap_or(u128::MAX), budget)?;
        let mats = complex.deltas().iter().map(LinearResidueMatrix::new).collect::<Result<Vec<_>>>()?;
        Ok(IdealOracle {
            rf: ResidueField::new(p),
            n,
            budget,
            mats,
            table: None,
            minor_gens: HashMap::new(),
            minor_loci: HashMap::new(),
            pf_gens: HashMap::new(),
            pf_loci: HashMap::new(),
        })
    }

    pub fn q(&self) -> u32 {
        self.rf.p()
    }

    fn ensure_table(&mut self, degree: usize) {
        let have = self.table.as_ref().map_or(0, |t| t.exps.len() - 1);
        if self.table.is_none() || have < degree {
            self.table = Some(MonomialTable::new(self.n, degree.max(have)));
        }
    }

    fn expand_minors(&mut self, delta: usize) {
        let mat = self.mats[delta].clone();
        let top = mat.rows.min(mat.cols);
        self.ensure_table(top);
        let table = self.table.as_ref().expect("table built");
        let n = self.n;
        let mut prev: HashMap<(u64, u64), Vec<u32>> = HashMap::new();
        for u in 0..mat.rows {
            for v in 0..mat.cols {
                prev.insert((1 << u, 1 << v), mat.entry(n, u, v).to_vec());
            }
        }
        let gens = normalise(&self.rf, table, 1, prev.values().cloned().collect());
        self.minor_gens.insert((delta, 1), gens);
        for t in 2..=top {
            let mut next = HashMap::new();
            let len = table.len(t);
            for rows in combinations(mat.rows, t) {
                let r0 = rows[0];
                let rest = mask(&rows[1..]);
                for cols in combinations(mat.cols, t) {
                    let cm = mask(&cols);
                    let mut acc = vec![0u32; len];
                    for (pos, &c) in cols.iter().enumerate() {
                        let lin = mat.entry(n, r0, c);
                        if lin.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let sub = &prev[&(rest, cm & !(1 << c))];
                        table.mul_linear_into(&self.rf, t - 1, lin, sub, pos % 2 == 1, &mut acc);
                    }
                    next.insert((mask(&rows), cm), acc);
                }
            }
            let gens = normalise(&self.rf, table, t, next.values().cloned().collect());
            self.minor_gens.insert((delta, t), gens);
            prev = next;
        }
    }

    fn expand_pfaffians(&mut self, delta: usize) -> Result<()> {
        let mat = self.mats[delta].clone();
        if mat.rows != mat.cols {
            return Err(structural("Pfaffians of a non-square matrix"));
        }
        let size = mat.rows;
        self.ensure_table(size / 2);
        let table = self.table.as_ref().expect("table built");
        let n = self.n;
        let mut prev: HashMap<u64, Vec<u32>> = HashMap::new();
        prev.insert(0, vec![1]);
        for t in 1..=size / 2 {
            let mut next = HashMap::new();
            for idx in combinations(size, 2 * t) {
                let s0 = idx[0];
                let m = mask(&idx);
                let mut acc = vec![0u32; table.len(t)];
                for (pos, &j) in idx.iter().enumerate().skip(1) {
                    let lin = mat.entry(n, s0, j);
                    if lin.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let sub = &prev[&(m & !(1 << s0) & !(1 << j))];
                    table.mul_linear_into(&self.rf, t - 1, lin, sub, pos % 2 == 0, &mut acc);
                }
                next.insert(m, acc);
            }
            let gens = normalise(&self.rf, table, t, next.values().cloned().collect());
            self.pf_gens.insert((delta, 2 * t), gens);
            prev = next;
        }
        Ok(())
    }

    /// Number of distinct (up to scalars) nonzero `size x size` minors of `delta^delta`.
    pub fn minor_generator_count(&mut self, delta: usize, size: usize) -> usize {
        if size == 0 || size > self.mats[delta].rows.min(self.mats[delta].cols) {
            return usize::from(size == 0);
        }
        if !self.minor_gens.contains_key(&(delta, size)) {
            self.expand_minors(delta);
        }
        self.minor_gens[&(delta, size)].len()
    }

    /// `V(I_size(delta^delta))`.
    pub fn minors_locus(&mut self, delta: usize, size: usize) -> Result<PointLocus> {
        let (q, n) = (self.q(), self.n);
        let mat = &self.mats[delta];
        let top = mat.rows.min(mat.cols);
        if size == 0 {
            return PointLocus::empty(q, n, self.budget);
        }
        if size > top {
            return PointLocus::full(q, n, self.budget);
        }
        if let Some(l) = self.minor_loci.get(&(delta, size)) {
            return Ok(l.clone());
        }
        if !self.minor_gens.contains_key(&(delta, size)) {
            self.expand_minors(delta);
        }
        // I_(s+1) ⊆ I_s, so only points of the larger locus need testing.
        let within = if size < top { Some(self.minors_locus(delta, size + 1)?) } else { None };
        let gens = &self.minor_gens[&(delta, size)];
        let locus = vanishing_locus(&self.rf, n, self.budget, gens, within.as_ref())?;
        self.minor_loci.insert((delta, size), locus.clone());
        Ok(locus)
    }

    /// `V(Pf_size(delta^delta))` for an even `size`.
    pub fn pfaffian_locus(&mut self, delta: usize, size: usize) -> Result<PointLocus> {
        let (q, n) = (self.q(), self.n);
        if size % 2 == 1 {
            return Err(structural("Pfaffian ideals need an even size"));
        }
        let top = self.mats[delta].rows;
        if size == 0 {
            return PointLocus::empty(q, n, self.budget);
        }
        if size > top {
            return PointLocus::full(q, n, self.budget);
        }
        if let Some(l) = self.pf_loci.get(&(delta, size)) {
            return Ok(l.clone());
        }
        if !self.pf_gens.contains_key(&(delta, size)) {
            self.expand_pfaffians(delta)?;
        }
        let within = if size + 2 <= top { Some(self.pfaffian_locus(delta, size + 2)?) } else { None };
        let gens = &self.pf_gens[&(delta, size)];
        let locus = vanishing_locus(&self.rf, n, self.budget, gens, within.as_ref())?;
        self.pf_loci.insert((delta, size), locus.clone());
        Ok(locus)
    }

    /// The point set of a structured resonance ideal.
    pub fn ideal_locus(&mut self, ideal: &ResonanceIdeal) -> Result<PointLocus> {
        let (q, n, budget) = (self.q(), self.n, self.budget);
        match &ideal.shape {
            IdealShape::Zero => PointLocus::full(q, n, budget),
            IdealShape::Unit => PointLocus::empty(q, n, budget),
            IdealShape::Maximal => PointLocus::origin(q, n, budget),
            IdealShape::Minors { delta, size } => self.minors_locus(*delta, *size),
            IdealShape::BlockSum { degree, size } => {
                // V(sum_s I_s(D1) I_(r-s)(D2)) = ∩_s (V(I_s(D1)) ∪ V(I_(r-s)(D2)))
                let mut acc = PointLocus::full(q, n, budget)?;
                for s in 0..=*size {
                    let left = match degree.checked_sub(1) {
                        None if s == 0 => PointLocus::empty(q, n, budget)?,
                        None => PointLocus::full(q, n, budget)?,
                        Some(d) => self.minors_locus(d, s)?,
                    };
                    let right = if *degree < self.mats.len() {
                        self.minors_locus(*degree, size - s)?
                    } else if size - s == 0 {
                        PointLocus::empty(q, n, budget)?
                    } else {
                        PointLocus::full(q, n, budget)?
                    };
                    acc = acc.intersection(&left.union(&right)?)?;
                }
                Ok(acc)
            }
        }
    }

    /// The point set of the Pfaffian description of `R^1_k` (degree 1 of a `PD_3` algebra).
    pub fn pfaffian_depth_locus(&mut self, k: i64) -> Result<PointLocus> {
        let (q, n, budget) = (self.q(), self.n, self.budget);
        match pfaffian_shape(n, k) {
            PfaffianShape::Zero => PointLocus::full(q, n, budget),
            PfaffianShape::Unit => PointLocus::empty(q, n, budget),
            PfaffianShape::Maximal => PointLocus::origin(q, n, budget),
            PfaffianShape::Size(s) => self.pfaffian_locus(1, s),
        }
    }
}

/// Common zeros of homogeneous generators, tested on projective representatives.
fn vanishing_locus(
    rf: &ResidueField,
    n: usize,
    budget: u64,
    gens: &[SparseResidue],
    within: Option<&PointLocus>,
) -> Result<PointLocus> {
    let q = rf.p();
    if gens.iter().any(|g| g.degree == 0) {
        return PointLocus::empty(q, n, budget);
    }
    if gens.is_empty() {
        return match within {
            Some(w) => Ok(w.clone()),
            None => PointLocus::full(q, n, budget),
        };
    }
    let stride = gens.iter().map(|g| g.degree).max().unwrap_or(0) + 1;
    let p = q as u64;
    let mut pw = vec![0u64; n * stride];
    let mut out = PointLocus::origin(q, n, budget)?;
    for rep in ProjectivePoints::new(q, n) {
        if let Some(w) = within {
            if !w.contains(&rep) {
                continue;
            }
        }
        for (j, &a) in rep.iter().enumerate() {
            let mut v = 1u64;
            for e in 0..stride {
                pw[j * stride + e] = v;
                v = v * a as u64 % p;
            }
        }
        if gens.iter().all(|g| g.eval(p, &pw, stride) == 0) {
            out.insert_line(&rep);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PdAlgebra;
    use crate::forms::Trivector;
    use crate::resonance::{ResonanceProfile, SweepOptions};

    fn complex(expr: &str, n: usize, p: u32) -> BggComplex {
        let mu = Trivector::parse(expr, n, Field::prime(p).unwrap()).unwrap();
        BggComplex::for_pd3(&PdAlgebra::from_trivector(&mu)).unwrap()
    }

    #[test]
    fn pfaffian_sizes() {
        assert_eq!(pfaffian_shape(5, 1), PfaffianShape::Size(4));
        assert_eq!(pfaffian_shape(5, 2), PfaffianShape::Size(4));
        assert_eq!(pfaffian_shape(5, 3), PfaffianShape::Size(2));
        assert_eq!(pfaffian_shape(5, 0), PfaffianShape::Zero);
        assert_eq!(pfaffian_shape(6, 0), PfaffianShape::Size(6));
        assert_eq!(pfaffian_shape(6, 1), PfaffianShape::Size(6));
        assert_eq!(pfaffian_shape(6, 2), PfaffianShape::Size(4));
        assert_eq!(pfaffian_shape(6, 6), PfaffianShape::Maximal);
        assert_eq!(pfaffian_shape(3, 1), PfaffianShape::Size(2));
    }

    #[test]
    fn form_three_minor_and_pfaffian_loci() {
        let c = complex("125+345", 5, 5);
        let mut oracle = IdealOracle::new(&c, 1 << 20).unwrap();
        let hyperplane = PointLocus::from_fn(5, 5, 1 << 20, |p| p[4] == 0).unwrap();
        assert_eq!(oracle.minors_locus(1, 4).unwrap(), hyperplane);
        assert_eq!(oracle.minors_locus(1, 3).unwrap(), hyperplane);
        assert_eq!(oracle.pfaffian_locus(1, 4).unwrap(), hyperplane);
        assert_eq!(oracle.minor_generator_count(1, 5), 0);
        assert!(oracle.minors_locus(1, 2).unwrap().is_origin());
        assert!(oracle.pfaffian_locus(1, 2).unwrap().is_origin());
    }

    #[test]
    fn ideal_loci_match_sweep() {
        let c = complex("123+145+167", 7, 3);
        let pr = ResonanceProfile::compute(&c, SweepOptions::default()).unwrap();
        let mut oracle = IdealOracle::new(&c, 1 << 20).unwrap();
        for i in 0..=3 {
            for k in -1..=9 {
                let truth = pr.locus(i, k);
                let a = oracle.ideal_locus(&ResonanceIdeal::for_depth(c.dims(), i, k)).unwrap();
                let b = oracle.ideal_locus(&ResonanceIdeal::block_form(c.dims(), i, k)).unwrap();
                assert_eq!(a, truth, "preferred form at i={i} k={k}");
                assert_eq!(b, truth, "block form at i={i} k={k}");
            }
        }
    }

    #[test]
    fn symbolic_generators() {
        let c = complex("125+345", 5, 5);
        let id = ResonanceIdeal::for_depth(c.dims(), 1, 1);
        assert_eq!(id.shape, IdealShape::Minors { delta: 1, size: 4 });
        assert_eq!(id.generators(&c, 100).unwrap().len(), 25);
        assert!(matches!(id.generators(&c, 10), Err(Error::Budget { .. })));
        let top = ResonanceIdeal::for_depth(c.dims(), 1, 5);
        assert_eq!(top.shape, IdealShape::Maximal);
        let block = ResonanceIdeal::for_depth(c.dims(), 2, 5);
        let gens = block.generators(&c, 1000).unwrap();
        assert!(!gens.is_empty());
        assert_eq!(pfaffian_loci(&c, 0).unwrap().len(), 0);
        assert_eq!(pfaffian_loci(&c, 1).unwrap().len(), 5);
    }
}
