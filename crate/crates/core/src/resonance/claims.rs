use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{AlgebraMorphism, GradedAlgebra, PdAlgebra};
use crate::enumerate::DEFAULT_BUDGET;
use crate::error::{structural, Error, Result};
use crate::forms::Trivector;
use crate::scalars::Scalar;

use super::bgg::BggComplex;
use super::chain::induced_injective;
use super::locus::PointLocus;
use super::planes::union_singular_planes;
use super::sweep::{ResonanceProfile, SweepOptions};

/// The statements the verifier knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimId {
    Duality,
    DegreeTable,
    Parity,
    Vanish,
    Decomp,
    CorankFull,
    Top,
    Connsum,
    Tensor,
    Wedge,
    NullityBound,
    Functoriality,
    IsotropicUnion,
}

impl ClaimId {
    pub const ALL: [ClaimId; 13] = [
        ClaimId::Duality,
        ClaimId::DegreeTable,
        ClaimId::Parity,
        ClaimId::Vanish,
        ClaimId::Decomp,
        ClaimId::CorankFull,
        ClaimId::Top,
        ClaimId::Connsum,
        ClaimId::Tensor,
        ClaimId::Wedge,
        ClaimId::NullityBound,
        ClaimId::Functoriality,
        ClaimId::IsotropicUnion,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClaimId::Duality => "DUALITY",
            ClaimId::DegreeTable => "DEGREE_TABLE",
            ClaimId::Parity => "PARITY",
            ClaimId::Vanish => "VANISH",
            ClaimId::Decomp => "DECOMP",
            ClaimId::CorankFull => "CORANK_FULL",
            ClaimId::Top => "TOP",
            ClaimId::Connsum => "CONNSUM",
            ClaimId::Tensor => "TENSOR",
            ClaimId::Wedge => "WEDGE",
            ClaimId::NullityBound => "NULLITY_BOUND",
            ClaimId::Functoriality => "FUNCTORIALITY",
            ClaimId::IsotropicUnion => "ISOTROPIC_UNION",
        }
    }

    /// Whether the claim takes two algebras (or a morphism) rather than one.
    pub fn is_binary(&self) -> bool {
        matches!(self, ClaimId::Connsum | ClaimId::Tensor | ClaimId::Wedge | ClaimId::Functoriality)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown claim '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub(crate) fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// A point where the computed variety and the predicted set disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub i: usize,
    pub k: i64,
    pub point: Vec<u32>,
    /// Whether the point lies in the computed `R^i_k`.
    pub in_variety: bool,
    pub detail: String,
}

/// Outcome of checking a corrected form of a statement alongside the literal one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmendedCheck {
    pub statement: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Number of set comparisons performed.
    pub comparisons: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amended: Option<AmendedCheck>,
}

impl ClaimReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Inputs to [`Verifier::verify`].
#[derive(Debug, Clone)]
pub enum ClaimInput {
    Form(Trivector),
    Algebra(GradedAlgebra),
    Pair(GradedAlgebra, GradedAlgebra),
    PdPair(PdAlgebra, PdAlgebra),
    /// A morphism and optionally the single degree to examine.
    Morphism(AlgebraMorphism, Option<usize>),
}

/// Accumulates comparisons and keeps the first mismatch.
#[derive(Default)]
struct Tally {
    comparisons: usize,
    first: Option<Counterexample>,
}

impl Tally {
    fn compare(&mut self, i: usize, k: i64, actual: &PointLocus, predicted: &PointLocus, what: &str) -> Result<()> {
        self.comparisons += 1;
        if self.first.is_some() {
            return Ok(());
        }
        if let Some(point) = actual.first_difference(predicted)? {
            let in_variety = actual.contains(&point);
            let detail = if in_variety {
                format!("point lies in R^{i}_{k} but not in {what}")
            } else {
                format!("point lies in {what} but not in R^{i}_{k}")
            };
            self.first = Some(Counterexample { i, k, point, in_variety, detail });
        }
        Ok(())
    }

    fn contain(&mut self, i: usize, k: i64, inner: &PointLocus, outer: &PointLocus, detail: &str) -> Result<()> {
        self.comparisons += 1;
        if self.first.is_none() {
            if let Some(point) = inner.first_outside(outer)? {
                self.first = Some(Counterexample { i, k, point, in_variety: false, detail: detail.into() });
            }
        }
        Ok(())
    }

    fn report(self, claim: ClaimId, notes: Vec<String>) -> ClaimReport {
        ClaimReport {
            claim,
            status: Status::of(self.first.is_none()),
            counterexample: self.first,
            comparisons: self.comparisons,
            notes,
            amended: None,
        }
    }

    fn amended(self, statement: &str) -> AmendedCheck {
        AmendedCheck { statement: statement.into(), status: Status::of(self.first.is_none()), counterexample: self.first }
    }
}

/// Exhaustive checks of structural statements over a finite prime field.
#[derive(Debug, Clone, Copy)]
pub struct Verifier {
    pub budget: u64,
    pub workers: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier { budget: DEFAULT_BUDGET, workers: 1 }
    }
}

fn point_scalars(alg: &GradedAlgebra, point: &[u32]) -> Vec<Scalar> {
    let f = alg.field();
    point.iter().map(|&v| f.from_i64(v as i64)).collect()
}

impl Verifier {
    pub fn new(budget: u64, workers: usize) -> Self {
        Verifier { budget, workers: workers.max(1) }
    }

    fn options(&self) -> SweepOptions {
        SweepOptions { budget: self.budget, workers: self.workers, projective: true }
    }

    pub fn profile(&self, alg: &GradedAlgebra) -> Result<ResonanceProfile> {
        if !alg.field().is_finite() {
            return Err(structural("claims are checked over a finite prime field"));
        }
        ResonanceProfile::compute(&BggComplex::build(alg)?, self.options())
    }

    pub fn profile_form(&self, mu: &Trivector) -> Result<ResonanceProfile> {
        if !mu.field().is_finite() {
            return Err(structural("claims are checked over a finite prime field"));
        }
        ResonanceProfile::compute(&BggComplex::for_pd3(&PdAlgebra::from_trivector(mu))?, self.options())
    }

    pub fn verify(&self, claim: ClaimId, input: &ClaimInput) -> Result<ClaimReport> {
        let form = || match input {
            ClaimInput::Form(mu) => Ok(mu),
            _ => Err(structural(format!("{claim} takes a single 3-form"))),
        };
        match claim {
            ClaimId::Duality => match input {
                ClaimInput::Form(mu) => self.duality(PdAlgebra::from_trivector(mu).algebra()),
                ClaimInput::Algebra(a) => self.duality(a),
                _ => Err(structural("DUALITY takes a single algebra")),
            },
            ClaimId::DegreeTable => self.degree_table(form()?),
            ClaimId::Parity => self.parity(form()?),
            ClaimId::Vanish => self.vanish(form()?),
            ClaimId::Decomp => self.decomp(form()?),
            ClaimId::CorankFull => self.corank_full(form()?),
            ClaimId::Top => self.top(form()?),
            ClaimId::NullityBound => self.nullity_bound(form()?),
            ClaimId::IsotropicUnion => match input {
                ClaimInput::Form(mu) => self.isotropic_union(PdAlgebra::from_trivector(mu).algebra()),
                ClaimInput::Algebra(a) => self.isotropic_union(a),
                _ => Err(structural("ISOTROPIC_UNION takes a single algebra")),
            },
            ClaimId::Connsum => match input {
                ClaimInput::PdPair(b, c) => self.connsum(b, c),
                _ => Err(structural("CONNSUM takes two Poincaré duality algebras")),
            },
            ClaimId::Tensor => match input {
                ClaimInput::Pair(b, c) => self.tensor(b, c),
                ClaimInput::PdPair(b, c) => self.tensor(b.algebra(), c.algebra()),
                _ => Err(structural("TENSOR takes two algebras")),
            },
            ClaimId::Wedge => match input {
                ClaimInput::Pair(b, c) => self.wedge(b, c),
                ClaimInput::PdPair(b, c) => self.wedge(b.algebra(), c.algebra()),
                _ => Err(structural("WEDGE takes two algebras")),
            },
            ClaimId::Functoriality => match input {
                ClaimInput::Morphism(phi, degree) => self.functoriality(phi, *degree),
                _ => Err(structural("FUNCTORIALITY takes a morphism")),
            },
        }
    }

    fn depth_range(pr: &ResonanceProfile, i: usize) -> std::ops::RangeInclusive<i64> {
        0..=pr.dims().get(i).copied().unwrap_or(0) as i64 + 1
    }

    /// `R^i_k(A) = R^(m-i)_k(A)` for every `i` and `k`.
    pub fn duality(&self, alg: &GradedAlgebra) -> Result<ClaimReport> {
        let pr = self.profile(alg)?;
        let m = pr.top_degree();
        let mut t = Tally::default();
        for i in 0..=m {
            for k in Self::depth_range(&pr, i) {
                t.compare(i, k, &pr.locus(i, k), &pr.locus(m - i, k), &format!("R^{}_{k}", m - i))?;
            }
        }
        Ok(t.report(ClaimId::Duality, vec![]))
    }

    /// The degree table of a `PD_3` algebra in terms of `R^1`.
    pub fn degree_table(&self, mu: &Trivector) -> Result<ClaimReport> {
        let pr = self.profile_form(mu)?;
        let (q, n, b) = (pr.q(), pr.nvars(), self.budget);
        let (full, zero, empty) = (PointLocus::full(q, n, b)?, PointLocus::origin(q, n, b)?, PointLocus::empty(q, n, b)?);
        let n_i = n as i64;
        let mut t = Tally::default();
        for k in 0..=n_i + 1 {
            for i in 0..=3usize {
                let expected = if k == 0 {
                    full.clone()
                } else if i == 0 || i == 3 {
                    if k == 1 {
                        zero.clone()
                    } else {
                        empty.clone()
                    }
                } else if k < n_i {
                    pr.locus(1, k)
                } else if k == n_i {
                    zero.clone()
                } else {
                    empty.clone()
                };
                t.compare(i, k, &pr.locus(i, k), &expected, "the degree table")?;
            }
        }
        Ok(t.report(ClaimId::DegreeTable, vec![]))
    }

    /// The parity chains of `R^1_k`: equal pairs `(2j, 2j+1)` for even `n`, `(2j-1, 2j)` for odd `n`.
    pub fn parity(&self, mu: &Trivector) -> Result<ClaimReport> {
        let pr = self.profile_form(mu)?;
        let n = pr.nvars() as i64;
        let start = if n % 2 == 0 { 0 } else { 1 };
        let mut t = Tally::default();
        let mut k = start;
        while k < n - 1 {
            t.compare(1, k, &pr.locus(1, k), &pr.locus(1, k + 1), &format!("R^1_{}", k + 1))?;
            k += 2;
        }
        Ok(t.report(ClaimId::Parity, vec![]))
    }

    /// `R^1_(n-2) = R^1_(n-1) = R^1_n = {0}` for an irreducible form of rank `n >= 3`; for a
    /// reducible form, `R^1_(n-2) = R^1_(n-1)` equals the radical.
    pub fn vanish(&self, mu: &Trivector) -> Result<ClaimReport> {
        let n = mu.n();
        let (rank, corank) = mu.form_rank();
        let mut t = Tally::default();
        let mut notes = vec![];
        if n < 3 {
            notes.push("n < 3: statement is vacuous".into());
            return Ok(t.report(ClaimId::Vanish, notes));
        }
        let pr = self.profile_form(mu)?;
        let (q, b) = (pr.q(), self.budget);
        let n_i = n as i64;
        if corank == 0 {
            let zero = PointLocus::origin(q, n, b)?;
            for k in [n_i - 2, n_i - 1, n_i] {
                t.compare(1, k, &pr.locus(1, k), &zero, "{0}")?;
            }
        } else {
            notes.push(format!("form has rank {rank} < n; checking that R^1_(n-2) = R^1_(n-1) is the radical"));
            let radical = mu.radical();
            let f = mu.field();
            let mut span = PointLocus::empty(q, n, b)?;
            let mut coeffs = vec![0u32; radical.len()];
            loop {
                let mut v = vec![0u64; n];
                for (c, w) in coeffs.iter().zip(&radical) {
                    for j in 0..n {
                        v[j] += *c as u64 * f.residue(&w[j]) as u64;
                    }
                }
                let pt: Vec<u32> = v.iter().map(|&x| (x % q as u64) as u32).collect();
                span.insert(&pt);
                if !crate::enumerate::next_point(q, &mut coeffs) {
                    break;
                }
            }
            for k in [n_i - 2, n_i - 1] {
                t.compare(1, k, &pr.locus(1, k), &span, "the radical")?;
            }
        }
        Ok(t.report(ClaimId::Vanish, notes))
    }

    /// Degree-1 loci of the irreducible part `B` of `mu`, with the ambient isomorphism.
    fn split(&self, mu: &Trivector) -> Result<(usize, Vec<PointLocus>, Vec<u32>)> {
        let (b, g) = mu.split_by_rank()?;
        let h = g.inverse()?.residues();
        let q = mu.field().order().ok_or_else(|| structural("claims are checked over a finite prime field"))?;
        let nb = b.n();
        // loci[s + 1] = R^1_s(B) for s in -1..=nb+1
        let loci = if nb == 0 {
            let mut v = vec![PointLocus::full(q, 0, self.budget)?; 2];
            v.extend((1..=2).map(|_| PointLocus::empty(q, 0, self.budget)).collect::<Result<Vec<_>>>()?);
            v
        } else {
            let pb = self.profile_form(&b)?;
            (-1..=nb as i64 + 1).map(|s| pb.locus(1, s)).collect()
        };
        Ok((nb, loci, h))
    }

    /// The corank decomposition `R^1_k(A) ≅ R^1_(k-r+1)(B) x C^1 ∪ R^1_(k-r)(B) x {0}`.
    pub fn decomp(&self, mu: &Trivector) -> Result<ClaimReport> {
        let pr = self.profile_form(mu)?;
        let (q, n, budget) = (pr.q(), pr.nvars(), self.budget);
        let (_, r) = mu.form_rank();
        let (nb, loci, h) = self.split(mu)?;
        let rb = |s: i64| loci[(s.clamp(-1, nb as i64 + 1) + 1) as usize].clone();
        let c_full = PointLocus::full(q, r, budget)?;
        let c_zero = PointLocus::origin(q, r, budget)?;
        let (n_i, r_i) = (n as i64, r as i64);
        let mut literal = Tally::default();
        let mut fixed = Tally::default();
        for k in 1..=n_i + 1 {
            let actual = pr.locus(1, k);
            let pred = rb(k - r_i + 1).product(&c_full, budget)?.union(&rb(k - r_i).product(&c_zero, budget)?)?;
            literal.compare(1, k, &actual, &pred.image(&h)?, "the decomposition formula")?;
            let corrected = if k < n_i {
                rb(k - r_i).product(&c_full, budget)?.image(&h)?
            } else if k == n_i {
                PointLocus::origin(q, n, budget)?
            } else {
                PointLocus::empty(q, n, budget)?
            };
            fixed.compare(1, k, &actual, &corrected, "the corrected decomposition")?;
        }
        let notes = vec![format!("rank {nb}, corank {r}; depths 1..={}", n + 1)];
        let mut rep = literal.report(ClaimId::Decomp, notes);
        rep.amended = Some(fixed.amended("R^1_k(A) ≅ R^1_(k-r)(B) x C^1 for k < n, {0} for k = n"));
        Ok(rep)
    }

    /// `R^1_k(A) = A^1` for `k < corank`.
    pub fn corank_full(&self, mu: &Trivector) -> Result<ClaimReport> {
        let pr = self.profile_form(mu)?;
        let (_, r) = mu.form_rank();
        let full = PointLocus::full(pr.q(), pr.nvars(), self.budget)?;
        let mut t = Tally::default();
        for k in 0..r as i64 {
            t.compare(1, k, &pr.locus(1, k), &full, "A^1")?;
        }
        Ok(t.report(ClaimId::CorankFull, vec![format!("corank {r}")]))
    }

    /// The top-depth trichotomy for `R^1_1`.
    pub fn top(&self, mu: &Trivector) -> Result<ClaimReport> {
        let pr = self.profile_form(mu)?;
        let (q, n, budget) = (pr.q(), pr.nvars(), self.budget);
        let (rank, _) = mu.form_rank();
        let mut notes = vec![];
        let expected = if n == 0 {
            notes.push("n = 0: empty".into());
            PointLocus::empty(q, n, budget)?
        } else if n == 1 || (n == 3 && rank == 3) {
            notes.push("n = 1 or an irreducible form with n = 3: {0}".into());
            PointLocus::origin(q, n, budget)?
        } else if n % 2 == 1 && mu.is_bp_generic()?.generic {
            let pf = mu.pf_polynomial()?;
            notes.push(format!("BP-generic: V(Pf) with Pf = {pf}"));
            let ev = pf.residue_evaluator();
            PointLocus::from_fn(q, n, budget, |p| ev.eval(p) == 0)?
        } else {
            notes.push("otherwise: A^1".into());
            PointLocus::full(q, n, budget)?
        };
        let mut t = Tally::default();
        t.compare(1, 1, &pr.locus(1, 1), &expected, "the predicted top locus")?;
        Ok(t.report(ClaimId::Top, notes))
    }

    /// A maximal 2-singular subspace `U` of dimension `nu` lies in `R^1_(nu-1)`.
    pub fn nullity_bound(&self, mu: &Trivector) -> Result<ClaimReport> {
        let pr = self.profile_form(mu)?;
        let (nu, u) = mu.nullity(mu.n(), self.budget)?;
        let (q, n) = (pr.q(), pr.nvars());
        let mut witness = PointLocus::empty(q, n, self.budget)?;
        for p in u.residue_points()? {
            witness.insert(&p);
        }
        let mut t = Tally::default();
        let k = nu as i64 - 1;
        t.contain(1, k, &witness, &pr.locus(1, k), "witness point outside R^1_(nu-1)")?;
        let isotropic = u.is_two_singular(mu);
        if !isotropic {
            t.first.get_or_insert(Counterexample {
                i: 1,
                k,
                point: vec![],
                in_variety: false,
                detail: "witness is not 2-singular".into(),
            });
        }
        Ok(t.report(ClaimId::NullityBound, vec![format!("nullity {nu}")]))
    }

    /// `R^1_1` is the union of isotropic planes.
    pub fn isotropic_union(&self, alg: &GradedAlgebra) -> Result<ClaimReport> {
        let pr = self.profile(alg)?;
        let planes = union_singular_planes(alg, self.budget)?;
        let mut t = Tally::default();
        t.compare(1, 1, &pr.locus(1, 1), &planes, "the union of isotropic planes")?;
        Ok(t.report(ClaimId::IsotropicUnion, vec![]))
    }

    /// Both product formulas for `B ⊗ C`.
    pub fn tensor(&self, b: &GradedAlgebra, c: &GradedAlgebra) -> Result<ClaimReport> {
        let a = b.tensor(c)?;
        let (pa, pb, pc) = (self.profile(&a)?, self.profile(b)?, self.profile(c)?);
        let budget = self.budget;
        let (q, nb, nc) = (pa.q(), pb.nvars(), pc.nvars());
        let zb = PointLocus::origin(q, nb, budget)?;
        let zc = PointLocus::origin(q, nc, budget)?;
        let mut literal = Tally::default();
        let mut fixed = Tally::default();
        let b1 = pa.dims()[1] as i64;
        for k in 1..=b1 + 1 {
            let pred = pb.locus(1, k).product(&zc, budget)?.union(&zb.product(&pc.locus(1, k), budget)?)?;
            let actual = pa.locus(1, k);
            literal.compare(1, k, &actual, &pred, "R^1_k(B) x {0} ∪ {0} x R^1_k(C)")?;
            let mut with_origin = pred;
            if k <= b1 {
                with_origin.insert(&vec![0; nb + nc]);
            }
            fixed.compare(1, k, &actual, &with_origin, "the product formula with the origin")?;
        }
        for i in 1..=pa.top_degree() {
            let mut pred = PointLocus::empty(q, nb + nc, budget)?;
            for p in 0..=i {
                pred = pred.union(&pb.locus(p, 1).product(&pc.locus(i - p, 1), budget)?)?;
            }
            let actual = pa.locus(i, 1);
            if i >= 2 {
                literal.compare(i, 1, &actual, &pred, "the union of products R^p_1(B) x R^(i-p)_1(C)")?;
            }
            fixed.compare(i, 1, &actual, &pred, "the union of products R^p_1(B) x R^(i-p)_1(C)")?;
        }
        let mut rep = literal.report(ClaimId::Tensor, vec![format!("b_1(B) = {nb}, b_1(C) = {nc}")]);
        rep.amended = Some(fixed.amended(
            "R^1_k(B⊗C) = R^1_k(B) x {0} ∪ {0} x R^1_k(C) ∪ {0 if k <= b_1}; R^i_1 = ∪_p R^p_1(B) x R^(i-p)_1(C)",
        ));
        Ok(rep)
    }

    /// The wedge sum formula.
    pub fn wedge(&self, b: &GradedAlgebra, c: &GradedAlgebra) -> Result<ClaimReport> {
        if b.dim(1) == 0 || c.dim(1) == 0 {
            return Err(structural("WEDGE needs b_1 > 0 on both sides"));
        }
        let a = b.wedge(c)?;
        let (pa, pb, pc) = (self.profile(&a)?, self.profile(b)?, self.profile(c)?);
        self.sum_formula(ClaimId::Wedge, &pa, &pb, &pc, |i| i == 1, false)
    }

    /// The connected sum formula for `PD_m` algebras.
    pub fn connsum(&self, b: &PdAlgebra, c: &PdAlgebra) -> Result<ClaimReport> {
        if b.algebra().dim(1) == 0 || c.algebra().dim(1) == 0 {
            return Err(structural("CONNSUM needs b_1 > 0 on both sides"));
        }
        let a = b.connected_sum(c)?;
        let (pa, pb, pc) = (self.profile(a.algebra())?, self.profile(b.algebra())?, self.profile(c.algebra())?);
        let m = pa.top_degree();
        self.sum_formula(ClaimId::Connsum, &pa, &pb, &pc, |i| i == 1 || i + 1 == m, true)
    }

    /// Shared body of the wedge and connected-sum checks.
    ///
    /// `shifted(i)` selects the degrees using `s + t = k - 1`; the others use `s + t = k`.
    /// With `ends`, degrees `0` and `m` are `{0}` at `k = 1` and empty beyond.
    fn sum_formula(
        &self,
        claim: ClaimId,
        pa: &ResonanceProfile,
        pb: &ResonanceProfile,
        pc: &ResonanceProfile,
        shifted: impl Fn(usize) -> bool,
        ends: bool,
    ) -> Result<ClaimReport> {
        let (q, budget) = (pa.q(), self.budget);
        let (nb, nc, na) = (pb.nvars(), pc.nvars(), pa.nvars());
        let m = pa.top_degree();
        let zero = PointLocus::origin(q, na, budget)?;
        let empty = PointLocus::empty(q, na, budget)?;
        // minor-locus reading: V(I_(b-u)(delta^1)) is empty once u >= b
        let tilde = |p: &ResonanceProfile, i: usize, u: i64| -> Result<PointLocus> {
            let b = p.dims().get(i).copied().unwrap_or(0) as i64;
            if u >= b && u > 0 {
                PointLocus::empty(q, p.nvars(), budget)
            } else {
                Ok(p.locus(i, u))
            }
        };
        let mut literal = Tally::default();
        let mut fixed = Tally::default();
        for i in 0..=m {
            let bi = pa.dims()[i] as i64;
            for k in 1..=bi + 1 {
                let actual = pa.locus(i, k);
                if ends && (i == 0 || i == m) {
                    let pred = if k == 1 { zero.clone() } else { empty.clone() };
                    literal.compare(i, k, &actual, &pred, "the end-degree value")?;
                    fixed.compare(i, k, &actual, &pred, "the end-degree value")?;
                    continue;
                }
                if i == 0 {
                    continue;
                }
                let total = if shifted(i) { k - 1 } else { k };
                let mut pred = PointLocus::empty(q, na, budget)?;
                let mut tpred = PointLocus::empty(q, na, budget)?;
                for s in -1..=total + 1 {
                    let t = total - s;
                    pred = pred.union(&pb.locus(i, s).product(&pc.locus(i, t), budget)?)?;
                    if shifted(i) {
                        tpred = tpred.union(&tilde(pb, i, s)?.product(&tilde(pc, i, t)?, budget)?)?;
                    }
                }
                literal.compare(i, k, &actual, &pred, "the union of products")?;
                if shifted(i) {
                    if k < bi {
                        fixed.compare(i, k, &actual, &tpred, "the union of minor-locus products")?;
                    } else {
                        let top = if k == bi { &zero } else { &empty };
                        fixed.compare(i, k, &actual, top, "the value at depth >= b_i")?;
                    }
                } else {
                    fixed.compare(i, k, &actual, &pred, "the union of products")?;
                }
            }
        }
        let mut rep = literal.report(claim, vec![format!("b_1(B) = {nb}, b_1(C) = {nc}")]);
        rep.amended = Some(fixed.amended(
            "in the shifted degrees, R^i_u(B) and R^i_u(C) replaced by their minor loci (empty for u >= b_i), for k < b_i(A); {0} at k = b_i(A)",
        ));
        Ok(rep)
    }

    /// Pointwise injectivity and the inclusion `phi(R^i_k(A)) ⊆ R^i_k(B)` where the
    /// hypotheses hold; where they fail, the report records whether the inclusion still holds.
    pub fn functoriality(&self, phi: &AlgebraMorphism, degree: Option<usize>) -> Result<ClaimReport> {
        let (a, b) = (phi.source(), phi.target());
        let (pa, pb) = (self.profile(a)?, self.profile(b)?);
        let q = pa.q();
        let inj = |d: usize| phi.map(d).rank() == phi.map(d).cols();
        let surj = |d: usize| phi.map(d).rank() == phi.map(d).rows();
        let phi1 = phi.map(1).residues();
        let (na, nb) = (a.dim(1), b.dim(1));
        let degrees: Vec<usize> = match degree {
            Some(d) => vec![d],
            None => (1..=a.top_degree()).collect(),
        };
        let mut t = Tally::default();
        let mut notes = vec![];
        for i in degrees {
            if i == 0 || i > a.top_degree() {
                return Err(structural(format!("degree {i} is outside 1..={}", a.top_degree())));
            }
            let hyp = inj(i) && surj(i - 1) && inj(1);
            for k in 0..=pa.dims()[i] as i64 + 1 {
                let src = pa.locus(i, k);
                let mut image = PointLocus::empty(q, nb, self.budget)?;
                let mut y = vec![0u32; nb];
                for x in src.points() {
                    for (l, slot) in y.iter_mut().enumerate() {
                        let mut acc = 0u64;
                        for j in 0..na {
                            acc += phi1[l * na + j] as u64 * x[j] as u64;
                        }
                        *slot = (acc % q as u64) as u32;
                    }
                    image.insert(&y);
                }
                let target = pb.locus(i, k);
                if hyp {
                    t.contain(i, k, &image, &target, "phi(R^i_k(A)) is not contained in R^i_k(B)")?;
                } else if let Some(y) = image.first_outside(&target)? {
                    notes.push(format!(
                        "degree {i}: hypotheses fail (phi^{i} injective: {}, phi^{} surjective: {}); phi(R^{i}_{k}(A)) ⊄ R^{i}_{k}(B) at {y:?}",
                        inj(i),
                        i - 1,
                        surj(i - 1)
                    ));
                    break;
                }
            }
            if hyp {
                for x in PointLocus::full(q, na, self.budget)?.points() {
                    t.comparisons += 1;
                    if !induced_injective(phi, i, &point_scalars(a, &x))? {
                        t.first.get_or_insert(Counterexample {
                            i,
                            k: 0,
                            point: x,
                            in_variety: false,
                            detail: format!("H^{i}(A, a) -> H^{i}(B, phi(a)) is not injective"),
                        });
                        break;
                    }
                }
            } else {
                let witness = PointLocus::full(q, na, self.budget)?
                    .points()
                    .find(|x| !induced_injective(phi, i, &point_scalars(a, x)).unwrap_or(true));
                if let Some(x) = witness {
                    notes.push(format!("degree {i}: H^{i}(A, a) -> H^{i}(B, phi(a)) fails to be injective at a = {x:?}"));
                }
            }
        }
        Ok(t.report(ClaimId::Functoriality, notes))
    }
}
