//! Alternating 3-forms on `k^n`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::enumerate::{check_budget, ProjectivePoints, DEFAULT_BUDGET};
use crate::error::{structural, Error, Result};
use crate::matlin::{residue_kernel, residue_rank, residue_rref, PfaffianTable, PolyMatrix, ResidueField, ScalarMatrix};
use crate::polyring::Polynomial;
use crate::scalars::{Field, Scalar};

/// Strictly increasing 0-based index triple.
pub type Triple = (usize, usize, usize);

/// An alternating 3-form stored by its coefficients on `i < j < k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trivector {
    n: usize,
    field: Field,
    coeffs: BTreeMap<Triple, Scalar>,
}

/// Sorts three indices, returning the permutation sign, or `None` on a repeat.
fn sort_triple(i: usize, j: usize, k: usize) -> Option<(Triple, bool)> {
    if i == j || j == k || i == k {
        return None;
    }
    let mut t = [i, j, k];
    let mut odd = false;
    for a in 0..3 {
        for b in 0..2 - a {
            if t[b] > t[b + 1] {
                t.swap(b, b + 1);
                odd = !odd;
            }
        }
    }
    Some(((t[0], t[1], t[2]), odd))
}

impl Trivector {
    pub fn zero(n: usize, field: Field) -> Self {
        Trivector { n, field, coeffs: BTreeMap::new() }
    }

    /// Builds a form from 0-based terms in any index order; repeated indices are rejected.
    pub fn from_terms(n: usize, field: Field, terms: impl IntoIterator<Item = ((usize, usize, usize), Scalar)>) -> Result<Self> {
        let mut t = Trivector::zero(n, field);
        for ((i, j, k), c) in terms {
            t.add_term(i, j, k, &c)?;
        }
        Ok(t)
    }

    fn add_term(&mut self, i: usize, j: usize, k: usize, c: &Scalar) -> Result<()> {
        let ((a, b, d), odd) =
            sort_triple(i, j, k).ok_or_else(|| Error::Parse(format!("repeated index in triple {}{}{}", i + 1, j + 1, k + 1)))?;
        if d >= self.n {
            return Err(Error::Parse(format!("index {} exceeds n = {}", d + 1, self.n)));
        }
        let f = self.field;
        let c = if odd { f.neg(c) } else { c.clone() };
        let entry = self.coeffs.entry((a, b, d)).or_insert_with(|| f.zero());
        *entry = f.add(entry, &c);
        if f.is_zero(entry) {
            self.coeffs.remove(&(a, b, d));
        }
        Ok(())
    }

    /// Parses expressions such as `125+345`, `-135+146`, `2*123` or `[1,10,11]`.
    pub fn parse(expr: &str, n: usize, field: Field) -> Result<Self> {
        let text: String = expr.replace('\u{2212}', "-").chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Trivector::zero(n, field);
        if text.is_empty() || text == "0" {
            return Ok(out);
        }
        let bytes = text.as_bytes();
        let perr = |pos: usize, what: &str| Error::Parse(format!("{what} at byte {pos} of {expr:?}"));
        let mut pos = 0;
        let mut first = true;
        while pos < bytes.len() {
            let mut negative = false;
            match bytes[pos] {
                b'+' | b'-' => {
                    negative = bytes[pos] == b'-';
                    pos += 1;
                }
                _ if !first => return Err(perr(pos, "expected '+' or '-'")),
                _ => {}
            }
            first = false;
            // optional coefficient terminated by '*'
            let mut coeff = field.one();
            if let Some(star) = text[pos..].find('*') {
                let next_sign = text[pos..].find(['+', '-']).unwrap_or(usize::MAX);
                if star < next_sign {
                    coeff = field.parse_scalar(&text[pos..pos + star])?;
                    pos += star + 1;
                }
            }
            let (i, j, k) = if bytes.get(pos) == Some(&b'[') {
                let close = text[pos..].find(']').ok_or_else(|| perr(pos, "unclosed '['"))?;
                let inner = &text[pos + 1..pos + close];
                let idx: Vec<usize> = inner
                    .split(',')
                    .map(|s| s.parse::<usize>().map_err(|_| perr(pos, "bad bracketed index")))
                    .collect::<Result<_>>()?;
                if idx.len() != 3 {
                    return Err(perr(pos, "bracketed triple needs three indices"));
                }
                pos += close + 1;
                (idx[0], idx[1], idx[2])
            } else {
                let digits: Vec<usize> = bytes[pos..]
                    .iter()
                    .take(3)
                    .take_while(|b| b.is_ascii_digit())
                    .map(|b| (b - b'0') as usize)
                    .collect();
                if digits.len() != 3 || bytes.get(pos + 3).is_some_and(|b| b.is_ascii_digit()) {
                    return Err(perr(pos, "expected a triple of three digits"));
                }
                pos += 3;
                (digits[0], digits[1], digits[2])
            };
            if i == 0 || j == 0 || k == 0 {
                return Err(perr(pos, "indices are 1-based"));
            }
            let c = if negative { field.neg(&coeff) } else { coeff };
            out.add_term(i - 1, j - 1, k - 1, &c)?;
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Stored terms, 0-based, increasing.
    pub fn terms(&self) -> impl Iterator<Item = (&Triple, &Scalar)> {
        self.coeffs.iter()
    }

    /// `mu(e_i, e_j, e_k)` for arbitrary 0-based indices.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Scalar {
        match sort_triple(i, j, k) {
            None => self.field.zero(),
            Some((t, odd)) => match self.coeffs.get(&t) {
                None => self.field.zero(),
                Some(c) if odd => self.field.neg(c),
                Some(c) => c.clone(),
            },
        }
    }

    /// Dense `n^3` tensor of residues; requires a prime field.
    pub fn residue_tensor(&self) -> Vec<u32> {
        let n = self.n;
        let mut out = vec![0u32; n * n * n];
        for (&(i, j, k), c) in &self.coeffs {
            let r = self.field.residue(c);
            let neg = if r == 0 { 0 } else { self.field.characteristic() - r };
            for (a, b, d, v) in [(i, j, k, r), (j, k, i, r), (k, i, j, r), (j, i, k, neg), (i, k, j, neg), (k, j, i, neg)] {
                out[(a * n + b) * n + d] = v;
            }
        }
        out
    }

    /// Reinterprets the coefficients over another field.
    pub fn change_field(&self, target: Field) -> Result<Trivector> {
        let mut out = Trivector::zero(self.n, target);
        for (&(i, j, k), c) in &self.coeffs {
            let text = self.field.render(c);
            out.add_term(i, j, k, &target.parse_scalar(&text)?)?;
        }
        Ok(out)
    }

    /// Evaluates `mu(a, b, c)` on vectors.
    pub fn evaluate(&self, a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Scalar {
        let f = self.field;
        let mut acc = f.zero();
        for (&(i, j, k), m) in &self.coeffs {
            // determinant of the 3x3 block of (a, b, c) at rows i, j, k
            let det = |x: usize, y: usize, z: usize| f.mul(&f.mul(&a[x], &b[y]), &c[z]);
            let s = f.sub(
                &f.add(&f.add(&det(i, j, k), &det(j, k, i)), &det(k, i, j)),
                &f.add(&f.add(&det(j, i, k), &det(i, k, j)), &det(k, j, i)),
            );
            acc = f.add(&acc, &f.mul(m, &s));
        }
        acc
    }

    /// The form `g . mu = mu(g^-1 -, g^-1 -, g^-1 -)`.
    pub fn transform(&self, g: &ScalarMatrix) -> Result<Trivector> {
        if g.rows() != self.n || g.cols() != self.n || g.field() != self.field {
            return Err(structural("transform needs an n x n matrix over the form's field"));
        }
        let h = g.inverse()?;
        self.pullback(&h)
    }

    /// `mu(h -, h -, h -)` for any square `h`, singular allowed.
    pub fn pullback(&self, h: &ScalarMatrix) -> Result<Trivector> {
        let (f, n) = (self.field, self.n);
        if h.rows() != n {
            return Err(structural("pullback matrix has the wrong number of rows"));
        }
        let m = h.cols();
        let cols: Vec<Vec<Scalar>> = (0..m).map(|j| h.column(j)).collect();
        let mut out = Trivector::zero(m, f);
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let v = self.evaluate(&cols[i], &cols[j], &cols[k]);
                    if !f.is_zero(&v) {
                        out.coeffs.insert((i, j, k), v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `mu ⊕ nu` on the concatenated basis.
    pub fn direct_sum(&self, other: &Trivector) -> Result<Trivector> {
        if self.field != other.field {
            return Err(structural("direct sum of forms over different fields"));
        }
        let mut out = self.padded(other.n);
        for (&(i, j, k), c) in &other.coeffs {
            out.coeffs.insert((i + self.n, j + self.n, k + self.n), c.clone());
        }
        Ok(out)
    }

    /// The same form on `k^(n + extra)`.
    pub fn padded(&self, extra: usize) -> Trivector {
        Trivector { n: self.n + extra, field: self.field, coeffs: self.coeffs.clone() }
    }

    /// The `n x C(n,2)` matrix of `v -> iota_v mu`; its kernel is the radical of `mu`.
    pub fn contraction_matrix(&self) -> ScalarMatrix {
        let pairs = crate::matlin::combinations(self.n, 2);
        ScalarMatrix::from_fn(self.field, self.n, pairs.len(), |v, p| self.coeff(pairs[p][0], pairs[p][1], v))
    }

    /// `(rank, corank)` of the form.
    pub fn form_rank(&self) -> (usize, usize) {
        let corank = self.radical().len();
        (self.n - corank, corank)
    }

    /// Basis of `{v : mu(v, -, -) = 0}`.
    pub fn radical(&self) -> Vec<Vec<Scalar>> {
        self.contraction_matrix().transpose().rank_and_kernel().1
    }

    /// Splits off the radical: returns the irreducible form on the first `rank` coordinates and
    /// `g` with `g . mu` supported there.
    pub fn split_by_rank(&self) -> Result<(Trivector, ScalarMatrix)> {
        let f = self.field;
        let n = self.n;
        let kernel = self.radical();
        let rank = n - kernel.len();
        // complete with the first standard vectors independent of the kernel
        let mut chosen: Vec<Vec<Scalar>> = Vec::new();
        let mut current = kernel.clone();
        for e in 0..n {
            if chosen.len() == rank {
                break;
            }
            let mut v = vec![f.zero(); n];
            v[e] = f.one();
            let mut trial = current.clone();
            trial.push(v.clone());
            let mat = ScalarMatrix::from_fn(f, trial.len(), n, |i, j| trial[i][j].clone());
            if mat.rank() == trial.len() {
                current = trial;
                chosen.push(v);
            }
        }
        let basis: Vec<Vec<Scalar>> = chosen.into_iter().chain(kernel).collect();
        let h = ScalarMatrix::from_fn(f, n, n, |i, j| basis[j][i].clone());
        let g = h.inverse()?;
        let full = self.pullback(&h)?;
        if full.coeffs.keys().any(|&(_, _, k)| k >= rank) {
            return Err(Error::Internal("radical splitting left terms outside the rank block".into()));
        }
        let b = Trivector { n: rank, field: f, coeffs: full.coeffs };
        Ok((b, g))
    }

    /// The skew matrix `gamma_v[i][j] = mu(e_i, e_j, v)`.
    pub fn contraction(&self, v: &[Scalar]) -> Result<ScalarMatrix> {
        if v.len() != self.n {
            return Err(structural(format!("vector of length {} for a form on k^{}", v.len(), self.n)));
        }
        let f = self.field;
        let mut m = ScalarMatrix::zeros(f, self.n, self.n);
        for (&(i, j, k), c) in &self.coeffs {
            for (a, b, d) in [(i, j, k), (j, k, i), (k, i, j)] {
                if f.is_zero(&v[d]) {
                    continue;
                }
                let t = f.mul(c, &v[d]);
                m.set(a, b, f.add(m.get(a, b), &t));
                m.set(b, a, f.sub(m.get(b, a), &t));
            }
        }
        Ok(m)
    }

    /// The skew matrix of linear forms `theta_ik = sum_j mu(e_i, e_k, e_j) x_j`.
    pub fn theta_matrix(&self) -> PolyMatrix {
        let (n, f) = (self.n, self.field);
        PolyMatrix::from_fn(n, f, n, n, |i, k| {
            let coeffs: Vec<Scalar> = (0..n).map(|j| self.coeff(i, k, j)).collect();
            Polynomial::linear(n, f, &coeffs)
        })
    }

    /// `Pf(mu)`: the quotient `pf(theta(i;i)) / ((-1)^i x_i)` (0-based `i`) for the first `i`
    /// with a nonzero principal Pfaffian, or 0. Zero for even `n`.
    pub fn pf_polynomial(&self) -> Result<Polynomial> {
        let (n, f) = (self.n, self.field);
        if n % 2 == 0 || n < 3 {
            return Ok(if n == 1 { Polynomial::one(n, f) } else { Polynomial::zero(n, f) });
        }
        let theta = self.theta_matrix();
        let mut table = PfaffianTable::new(&theta)?;
        for i in 0..n {
            let idx: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let pf = table.pfaffian(&idx);
            if pf.is_zero() {
                continue;
            }
            let xi = Polynomial::var(n, f, i);
            let divisor = if i % 2 == 0 { xi } else { xi.neg() };
            return pf.divide_exact(&divisor);
        }
        Ok(Polynomial::zero(n, f))
    }

    /// Whether some `gamma_v` has rank `n - 1`; defined for odd `n`.
    ///
    /// Decided by `Pf(mu) != 0`. The witness is a nonzero vector where `Pf(mu)` does not vanish.
    pub fn is_bp_generic(&self) -> Result<BpGenericity> {
        if self.n % 2 == 0 {
            return Err(Error::Unsupported(format!("BP-genericity is defined here for odd n, got n = {}", self.n)));
        }
        if self.n == 1 {
            // gamma_v is the 1x1 zero matrix, which has the maximal even rank 0
            return Ok(BpGenericity { generic: true, witness: Some(vec![self.field.one()]) });
        }
        let pf = self.pf_polynomial()?;
        if pf.is_zero() {
            return Ok(BpGenericity { generic: false, witness: None });
        }
        let witness = nonvanishing_point(&pf);
        if let Some(v) = &witness {
            let rank = self.contraction(v)?.rank();
            if rank != self.n - 1 {
                return Err(Error::Internal(format!("BP witness has contraction rank {rank}")));
            }
        }
        Ok(BpGenericity { generic: true, witness })
    }

    /// Exhaustive check that every nonzero `gamma_v` has rank at least 4.
    pub fn is_dfmr_generic(&self, budget: u64) -> Result<DfmrGenericity> {
        let q = self.field.order().ok_or_else(|| Error::Unsupported("DFMR sweep needs a finite field".into()))?;
        check_budget(ProjectivePoints::count(q, self.n), budget)?;
        let rf = ResidueField::new(q);
        let tensor = self.residue_tensor();
        let n = self.n;
        let mut buf = vec![0u32; n * n];
        for v in ProjectivePoints::new(q, n) {
            residue_contraction(&rf, &tensor, n, &v, &mut buf);
            if residue_rank(&rf, &mut buf, n, n) < 4 {
                let cex = v.iter().map(|&a| self.field.from_i64(a as i64)).collect();
                return Ok(DfmrGenericity { generic: false, counterexample: Some(cex) });
            }
        }
        Ok(DfmrGenericity { generic: true, counterexample: None })
    }

    /// Largest `d <= dim_cap` with a 2-singular subspace of dimension `d`, over a finite field.
    pub fn nullity(&self, dim_cap: usize, budget: u64) -> Result<(usize, Subspace)> {
        let q = self.field.order().ok_or_else(|| Error::Unsupported("nullity search needs a finite field".into()))?;
        let mut search = NullitySearch {
            rf: ResidueField::new(q),
            n: self.n,
            tensor: self.residue_tensor(),
            cap: dim_cap.min(self.n),
            budget,
            nodes: 0,
            best: Vec::new(),
            seen: HashSet::new(),
        };
        let full: Vec<Vec<u32>> = (0..self.n).map(|i| (0..self.n).map(|j| (i == j) as u32).collect()).collect();
        search.extend(&[], &full)?;
        let basis = search
            .best
            .iter()
            .map(|v| v.iter().map(|&a| self.field.from_i64(a as i64)).collect())
            .collect();
        let witness = Subspace::new(self.n, self.field, basis)?;
        debug_assert!(witness.is_two_singular(self));
        Ok((witness.dim(), witness))
    }

    /// The nullity with the default node budget and no dimension cap.
    pub fn nullity_default(&self) -> Result<(usize, Subspace)> {
        self.nullity(self.n, DEFAULT_BUDGET)
    }

    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let f = self.field;
        let mut out = String::new();
        for (idx, (&(i, j, k), c)) in self.coeffs.iter().enumerate() {
            let neg = f.looks_negative(c);
            let mag = if neg { f.neg(c) } else { c.clone() };
            if neg {
                out.push('-');
            } else if idx > 0 {
                out.push('+');
            }
            if !f.is_one(&mag) {
                out.push_str(&f.render(&mag));
                out.push('*');
            }
            if self.n > 9 {
                out.push_str(&format!("[{},{},{}]", i + 1, j + 1, k + 1));
            } else {
                out.push_str(&format!("{}{}{}", i + 1, j + 1, k + 1));
            }
        }
        out
    }
}

impl fmt::Display for Trivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Writes the residue contraction `gamma_v` into `out` (row-major `n x n`).
pub fn residue_contraction(rf: &ResidueField, tensor: &[u32], n: usize, v: &[u32], out: &mut [u32]) {
    let p = rf.p() as u64;
    for i in 0..n {
        for j in 0..n {
            let base = (i * n + j) * n;
            let mut acc = 0u64;
            for (k, &vk) in v.iter().enumerate() {
                acc += tensor[base + k] as u64 * vk as u64;
            }
            out[i * n + j] = (acc % p) as u32;
        }
    }
}

/// A nonzero point where `f` does not vanish: standard basis vectors first, then the grid
/// `{0..=deg}^n` (all of `GF(q)^n` over a prime field).
fn nonvanishing_point(f: &Polynomial) -> Option<Vec<Scalar>> {
    let field = f.field();
    let n = f.nvars();
    let side = match field.order() {
        Some(order) => order,
        None => f.total_degree()? + 1,
    }
    .max(2);
    let eval = |pt: &[u32]| -> Option<Vec<Scalar>> {
        let v: Vec<Scalar> = pt.iter().map(|&a| field.from_i64(a as i64)).collect();
        (pt.iter().any(|&a| a != 0) && !field.is_zero(&f.eval(&v).ok()?)).then_some(v)
    };
    for i in 0..n {
        let mut pt = vec![0u32; n];
        pt[i] = 1;
        if let Some(v) = eval(&pt) {
            return Some(v);
        }
    }
    let mut pt = vec![0u32; n];
    while crate::enumerate::next_point(side, &mut pt) {
        if let Some(v) = eval(&pt) {
            return Some(v);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpGenericity {
    pub generic: bool,
    /// A vector with contraction rank `n - 1`; absent if the field has too few points to find one.
    pub witness: Option<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfmrGenericity {
    pub generic: bool,
    pub counterexample: Option<Vec<Scalar>>,
}

struct NullitySearch {
    rf: ResidueField,
    n: usize,
    tensor: Vec<u32>,
    cap: usize,
    budget: u64,
    nodes: u64,
    best: Vec<Vec<u32>>,
    seen: HashSet<Vec<u32>>,
}

impl NullitySearch {
    /// `u` is 2-singular with `k = K(u)` the common kernel of its contractions.
    fn extend(&mut self, u: &[Vec<u32>], k: &[Vec<u32>]) -> Result<()> {
        if u.len() > self.best.len() {
            self.best = u.to_vec();
        }
        if u.len() >= self.cap || k.len() <= self.best.len() {
            return Ok(());
        }
        let n = self.n;
        let complement = self.complement(u, k);
        let d = complement.len();
        let q = self.rf.p();
        let mut gamma = vec![0u32; n * n];
        for c in ProjectivePoints::new(q, d) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget { needed: self.nodes as u128, limit: self.budget });
            }
            let mut v = vec![0u32; n];
            for (ci, w) in c.iter().zip(&complement) {
                if *ci != 0 {
                    for j in 0..n {
                        v[j] = self.rf.add(v[j], self.rf.mul(*ci, w[j]));
                    }
                }
            }
            let mut next_u = u.to_vec();
            next_u.push(v.clone());
            let key = self.rref_key(&next_u);
            if !self.seen.insert(key) {
                continue;
            }
            // K(u + v) = K(u) ∩ ker gamma_v
            residue_contraction(&self.rf, &self.tensor, n, &v, &mut gamma);
            let next_k = self.intersect_kernel(k, &gamma);
            self.extend(&next_u, &next_k)?;
            if self.best.len() >= self.cap {
                return Ok(());
            }
            if k.len() <= self.best.len() {
                return Ok(());
            }
        }
        Ok(())
    }

    fn rref_key(&self, rows: &[Vec<u32>]) -> Vec<u32> {
        let mut m: Vec<u32> = rows.iter().flatten().copied().collect();
        residue_rref(&self.rf, &mut m, rows.len(), self.n);
        m
    }

    /// Vectors of `k` completing a basis of `u` to one of `span(k)`.
    fn complement(&self, u: &[Vec<u32>], k: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut current: Vec<Vec<u32>> = u.to_vec();
        let mut out = Vec::new();
        for w in k {
            let mut trial = current.clone();
            trial.push(w.clone());
            let mut m: Vec<u32> = trial.iter().flatten().copied().collect();
            if residue_rank(&self.rf, &mut m, trial.len(), n) == trial.len() {
                current = trial;
                out.push(w.clone());
            }
        }
        out
    }

    fn intersect_kernel(&self, k: &[Vec<u32>], gamma: &[u32]) -> Vec<Vec<u32>> {
        let n = self.n;
        let d = k.len();
        // columns are gamma * k_j
        let mut m = vec![0u32; n * d];
        for (j, w) in k.iter().enumerate() {
            for i in 0..n {
                let mut acc = 0u64;
                for (l, &wl) in w.iter().enumerate() {
                    acc += gamma[i * n + l] as u64 * wl as u64;
                }
                m[i * d + j] = (acc % self.rf.p() as u64) as u32;
            }
        }
        residue_kernel(&self.rf, &m, n, d)
            .into_iter()
            .map(|c| {
                let mut v = vec![0u32; n];
                for (cj, w) in c.iter().zip(k) {
                    for l in 0..n {
                        v[l] = self.rf.add(v[l], self.rf.mul(*cj, w[l]));
                    }
                }
                v
            })
            .collect()
    }
}

/// A linear subspace given by an independent spanning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    field: Field,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn new(n: usize, field: Field, basis: Vec<Vec<Scalar>>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != n) {
            return Err(structural("basis vector of the wrong length"));
        }
        let m = ScalarMatrix::from_fn(field, basis.len(), n, |i, j| basis[i][j].clone());
        if m.rank() != basis.len() {
            return Err(structural("subspace basis is linearly dependent"));
        }
        Ok(Subspace { n, field, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        ScalarMatrix::from_fn(self.field, rows.len(), self.n, |i, j| rows[i][j].clone()).rank() == self.dim()
    }

    /// `mu(a, b, c) = 0` for all `a, b` in the subspace and all `c`.
    pub fn is_two_singular(&self, mu: &Trivector) -> bool {
        let f = self.field;
        for a in &self.basis {
            for b in &self.basis {
                for c in 0..self.n {
                    let mut e = vec![f.zero(); self.n];
                    e[c] = f.one();
                    if !f.is_zero(&mu.evaluate(a, b, &e)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All points of the subspace over a finite field, as residue vectors.
    pub fn residue_points(&self) -> Result<Vec<Vec<u32>>> {
        let q = self.field.order().ok_or_else(|| Error::Unsupported("point listing needs a finite field".into()))?;
        let b: Vec<Vec<u32>> = self.basis.iter().map(|v| v.iter().map(|c| self.field.residue(c)).collect()).collect();
        let mut coeffs = vec![0u32; self.dim()];
        let mut out = Vec::new();
        loop {
            let mut v = vec![0u64; self.n];
            for (c, w) in coeffs.iter().zip(&b) {
                for j in 0..self.n {
                    v[j] += *c as u64 * w[j] as u64;
                }
            }
            out.push(v.iter().map(|&x| (x % q as u64) as u32).collect());
            if !crate::enumerate::next_point(q, &mut coeffs) {
                break;
            }
        }
        Ok(out)
    }
}
