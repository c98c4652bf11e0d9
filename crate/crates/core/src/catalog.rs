//! The embedded table of irreducible 3-forms of rank at most 8 and the driver that
//! checks computed resonance varieties against it.
//!
//! The data lives in `data/catalog.toml`; its header documents the record format.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::PdAlgebra;
use crate::error::{Error, Result};
use crate::forms::Trivector;
use crate::polyring::Polynomial;
use crate::resonance::{BggComplex, PointLocus, ResonanceProfile, Status, SweepOptions};
use crate::scalars::{Field, FieldSpec};

const CATALOG_TOML: &str = include_str!("../data/catalog.toml");

/// One irreducible component `{ p_1 = ... = 0 }`, stored as the polynomial texts that vanish on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub text: String,
    pub equations: Vec<String>,
}

/// What the table predicts for `R^1_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "components", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Expectation {
    Full,
    ZeroPoint,
    Empty,
    /// Cut out by cubics that are not listed; only properties are checked.
    Codim3Cubics,
    Equations(Vec<Component>),
}

impl Expectation {
    pub fn parse(text: &str, n: usize) -> Result<Expectation> {
        let t = text.trim();
        match t {
            "FULL" => return Ok(Expectation::Full),
            "ZERO" => return Ok(Expectation::ZeroPoint),
            "EMPTY" => return Ok(Expectation::Empty),
            "CODIM3_CUBICS" => return Ok(Expectation::Codim3Cubics),
            _ => {}
        }
        let comps = t.split('∪').map(|c| parse_component(c.trim(), n)).collect::<Result<Vec<_>>>()?;
        Ok(Expectation::Equations(comps))
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self, Expectation::Codim3Cubics)
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Full => f.write_str("FULL"),
            Expectation::ZeroPoint => f.write_str("ZERO"),
            Expectation::Empty => f.write_str("EMPTY"),
            Expectation::Codim3Cubics => f.write_str("CODIM3_CUBICS"),
            Expectation::Equations(cs) => {
                let parts: Vec<&str> = cs.iter().map(|c| c.text.as_str()).collect();
                f.write_str(&parts.join(" ∪ "))
            }
        }
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_component(text: &str, n: usize) -> Result<Component> {
    let bad = || Error::Catalog(format!("cannot read component {text:?}"));
    let equations: Vec<String> = if let Some(inner) = text.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        let parts: Vec<&str> = inner.split('=').map(str::trim).collect();
        if parts.len() < 2 || parts.iter().any(|p| p.is_empty()) {
            return Err(bad());
        }
        let (last, rest) = parts.split_last().expect("nonempty");
        if *last == "0" {
            rest.iter().map(|p| p.to_string()).collect()
        } else {
            // a chain p = q = r means every member equals the last one
            rest.iter().map(|p| format!("({p}) - ({last})")).collect()
        }
    } else if let Some(inner) = text.strip_prefix("V(").and_then(|r| r.strip_suffix(')')) {
        split_top_level(inner, ',').into_iter().map(|p| p.trim().to_string()).collect()
    } else {
        return Err(bad());
    };
    let f = Field::rational();
    for e in &equations {
        let p = Polynomial::parse(e, n, f).map_err(|err| Error::Catalog(format!("{text}: {err}")))?;
        if p.is_zero() || p.homogeneous_degree().is_none() {
            return Err(Error::Catalog(format!("{text}: equation {e:?} is not a nonzero homogeneous polynomial")));
        }
    }
    Ok(Component { text: text.to_string(), equations })
}

/// A tabulated column: the depths it covers and its prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub depths: Vec<i64>,
    pub expected: Expectation,
}

/// Replacement columns for a row whose printed equations do not match its printed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Amendment {
    pub note: String,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub orbit: String,
    pub real_form: Option<String>,
    pub n: usize,
    pub expr: String,
    pub columns: Vec<Column>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amendment: Option<Amendment>,
}

impl CatalogEntry {
    pub fn trivector(&self, field: Field) -> Result<Trivector> {
        Trivector::parse(&self.expr, self.n, field)
    }

    pub fn algebra(&self, field: Field) -> Result<PdAlgebra> {
        Ok(PdAlgebra::from_trivector(&self.trivector(field)?))
    }

    fn column(&self, k: i64) -> Option<&Column> {
        self.columns.iter().find(|c| c.depths.contains(&k))
    }

    /// The prediction for `R^1_k`, falling back on filtration when `k` is not tabulated.
    ///
    /// `None` means the table says nothing about this depth.
    pub fn expected(&self, k: i64) -> Option<Expectation> {
        if k <= 0 {
            return Some(Expectation::Full);
        }
        if k > self.n as i64 {
            return Some(Expectation::Empty);
        }
        if let Some(c) = self.column(k) {
            return Some(c.expected.clone());
        }
        // between the last tabulated {0} and n the locus can only be {0}
        let last = self.columns.iter().filter(|c| c.depths.iter().any(|&d| d < k)).max_by_key(|c| c.depths.iter().max())?;
        (last.expected == Expectation::ZeroPoint).then_some(Expectation::ZeroPoint)
    }

    /// Depths with a closed-form or derived prediction, `0..=n+1`.
    pub fn checked_depths(&self) -> Vec<i64> {
        (0..=self.n as i64 + 1).filter(|&k| self.expected(k).is_some()).collect()
    }

    pub fn has_closed_form(&self) -> bool {
        self.columns.iter().all(|c| c.expected.has_closed_form())
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// The entry with amended columns substituted, if it has any.
    pub fn amended(&self) -> Option<CatalogEntry> {
        let a = self.amendment.as_ref()?;
        let mut out = self.clone();
        out.amendment = None;
        for c in &a.columns {
            if let Some(slot) = out.columns.iter_mut().find(|o| o.depths == c.depths) {
                *slot = c.clone();
            }
        }
        Some(out)
    }
}

#[derive(Deserialize)]
struct RawCatalog {
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    orbit: String,
    real_form: Option<String>,
    n: usize,
    form: String,
    columns: BTreeMap<String, String>,
    amended: Option<RawAmendment>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmendment {
    note: String,
    columns: BTreeMap<String, String>,
}

fn parse_columns(raw: &BTreeMap<String, String>, n: usize) -> Result<Vec<Column>> {
    let mut columns = Vec::with_capacity(raw.len());
    for (key, value) in raw {
        columns.push(Column { depths: parse_depths(key)?, expected: Expectation::parse(value, n)? });
    }
    columns.sort_by_key(|c| c.depths[0]);
    if columns.windows(2).any(|w| w[0].depths.last() >= w[1].depths.first()) {
        return Err(Error::Catalog("overlapping columns".into()));
    }
    Ok(columns)
}

fn parse_depths(key: &str) -> Result<Vec<i64>> {
    let depths = key
        .split('=')
        .map(|d| d.trim().parse::<i64>().map_err(|_| Error::Catalog(format!("bad column key {key:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if depths.windows(2).any(|w| w[1] != w[0] + 1) || depths.iter().any(|&d| d < 1) {
        return Err(Error::Catalog(format!("column key {key:?} is not a run of consecutive depths")));
    }
    Ok(depths)
}

/// Parses catalog text in the format of the embedded data file.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
    let mut out = Vec::with_capacity(raw.entry.len());
    for r in raw.entry {
        let ctx = |e: Error| Error::Catalog(format!("entry {}: {e}", r.id));
        let mu = Trivector::parse(&r.form, r.n, Field::rational()).map_err(ctx)?;
        let (rank, _) = mu.form_rank();
        if rank != r.n {
            return Err(Error::Catalog(format!("entry {}: form has rank {rank}, expected {}", r.id, r.n)));
        }
        let columns = parse_columns(&r.columns, r.n).map_err(ctx)?;
        let amendment = match &r.amended {
            None => None,
            Some(a) => {
                let cols = parse_columns(&a.columns, r.n).map_err(ctx)?;
                if let Some(c) = cols.iter().find(|c| !columns.iter().any(|o| o.depths == c.depths)) {
                    return Err(Error::Catalog(format!("entry {}: amended column {:?} replaces nothing", r.id, c.depths)));
                }
                Some(Amendment { note: a.note.clone(), columns: cols })
            }
        };
        if out.iter().any(|e: &CatalogEntry| e.id == r.id) {
            return Err(Error::Catalog(format!("duplicate entry {}", r.id)));
        }
        out.push(CatalogEntry { id: r.id, orbit: r.orbit, real_form: r.real_form, n: r.n, expr: r.form, columns, amendment });
    }
    Ok(out)
}

/// The embedded catalog.
pub fn load_catalog() -> Result<Vec<CatalogEntry>> {
    parse_catalog(CATALOG_TOML)
}

/// Looks up an entry by id, ignoring case.
pub fn find_entry<'a>(entries: &'a [CatalogEntry], id: &str) -> Result<&'a CatalogEntry> {
    entries
        .iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::Catalog(format!("no entry named {id:?}")))
}

fn prime_of(field: Field) -> Result<u32> {
    field.order().ok_or_else(|| Error::Catalog("catalog checks run over a prime field".into()))
}

/// Evaluates a prediction over `GF(q)^n`.
pub fn expectation_points(expected: &Expectation, n: usize, field: Field, budget: u64) -> Result<PointLocus> {
    let q = prime_of(field)?;
    match expected {
        Expectation::Full => PointLocus::full(q, n, budget),
        Expectation::ZeroPoint => PointLocus::origin(q, n, budget),
        Expectation::Empty => PointLocus::empty(q, n, budget),
        Expectation::Codim3Cubics => Err(Error::Catalog("no closed-form expectation (unlisted cubics)".into())),
        Expectation::Equations(comps) => {
            let evals = comps
                .iter()
                .map(|c| {
                    c.equations
                        .iter()
                        .map(|e| Polynomial::parse(e, n, field).map(|p| p.residue_evaluator()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            // every equation is homogeneous, so membership is constant along lines
            PointLocus::from_projective(q, n, budget, true, |pt| evals.iter().any(|c| c.iter().all(|e| e.eval(pt) == 0)))
        }
    }
}

/// The predicted `R^1_k` of `entry` over `GF(q)`.
pub fn expected_points(entry: &CatalogEntry, k: i64, field: Field, budget: u64) -> Result<PointLocus> {
    let e = entry
        .expected(k)
        .ok_or_else(|| Error::Catalog(format!("entry {} has no expectation at depth {k}", entry.id)))?;
    expectation_points(&e, entry.n, field, budget)
}

/// Builds the BGG complex of the entry and sweeps it over `field`.
pub fn entry_profile(entry: &CatalogEntry, field: Field, opts: SweepOptions) -> Result<ResonanceProfile> {
    prime_of(field)?;
    let complex = BggComplex::for_pd3(&entry.algebra(field)?)?;
    ResonanceProfile::compute(&complex, opts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthCheck {
    pub k: i64,
    pub expected: String,
    pub status: Status,
    pub computed_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_count: Option<usize>,
    /// A point on which the two sets disagree, and whether it lies in the computed locus.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<(Vec<u32>, bool)>,
}

/// Result of comparing one entry against the table over one prime field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldReport {
    pub field: FieldSpec,
    pub status: Status,
    pub depths: Vec<DepthCheck>,
    /// `|R^1_2|` for entries whose depth-2 locus is only described by properties.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codim3_count: Option<usize>,
}

/// Compares a computed profile against the table.
pub fn check_profile(entry: &CatalogEntry, profile: &ResonanceProfile, field: Field, budget: u64) -> Result<FieldReport> {
    if profile.nvars() != entry.n || Some(profile.q()) != field.order() {
        return Err(Error::Catalog(format!("profile does not belong to entry {} over {field}", entry.id)));
    }
    let mut depths = Vec::new();
    let mut codim3_count = None;
    for k in entry.checked_depths() {
        let expected = entry.expected(k).expect("checked depth");
        let computed = profile.locus(1, k);
        let check = if expected.has_closed_form() {
            let want = expectation_points(&expected, entry.n, field, budget)?;
            let mismatch = computed.first_difference(&want)?.map(|pt| {
                let inside = computed.contains(&pt);
                (pt, inside)
            });
            DepthCheck {
                k,
                expected: expected.to_string(),
                status: Status::of(mismatch.is_none()),
                computed_count: computed.count(),
                expected_count: Some(want.count()),
                mismatch,
            }
        } else {
            // properties only: a proper nonzero locus equal to its neighbour column
            let proper = !computed.is_origin() && !computed.is_full() && computed.contains_index(0);
            let same_column = entry.column(k).is_none_or(|c| c.depths.iter().all(|&d| profile.locus(1, d) == computed));
            if k == 2 {
                codim3_count = Some(computed.count());
            }
            DepthCheck {
                k,
                expected: expected.to_string(),
                status: Status::of(proper && same_column),
                computed_count: computed.count(),
                expected_count: None,
                mismatch: None,
            }
        };
        depths.push(check);
    }
    let status = Status::of(depths.iter().all(|d| d.status == Status::Pass));
    Ok(FieldReport { field: field.spec(), status, depths, codim3_count })
}

/// Sweeps the entry over one prime field and compares with the table.
pub fn verify_entry(entry: &CatalogEntry, field: Field, opts: SweepOptions) -> Result<FieldReport> {
    let profile = entry_profile(entry, field, opts)?;
    check_profile(entry, &profile, field, opts.budget)
}

/// Outcome of an entry across several primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    /// Agreement at some primes only; the others are flagged as possibly bad reductions.
    Warn,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Warn => "WARN",
            Verdict::Fail => "FAIL",
        })
    }
}

/// `ln(N_2 / N_1) / ln(q_2 / q_1)` for the depth-2 point counts of a codimension-3 entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCheck {
    pub primes: (u32, u32),
    pub counts: (usize, usize),
    pub exponent: f64,
    pub window: (f64, f64),
    pub status: Status,
}

/// Expected affine dimension window for `R^1_2` of the codimension-3 entries in `k^8`.
pub const CODIM3_GROWTH_WINDOW: (f64, f64) = (4.5, 5.5);

pub fn growth_exponent(q1: u32, n1: usize, q2: u32, n2: usize) -> f64 {
    (n2 as f64 / n1 as f64).ln() / (q2 as f64 / q1 as f64).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub n: usize,
    pub verdict: Verdict,
    pub fields: Vec<FieldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// The same checks against the amended columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amended: Option<AmendedReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmendedReport {
    pub note: String,
    pub verdict: Verdict,
    pub fields: Vec<FieldReport>,
}

impl EntryReport {
    /// The amended verdict where there is one, the printed one otherwise.
    pub fn effective_verdict(&self) -> Verdict {
        self.amended.as_ref().map_or(self.verdict, |a| a.verdict)
    }
}

/// Combines per-prime reports: all pass is a pass, some pass is a warning, none is a failure.
/// A failed growth check is always a failure.
pub fn combine_reports(entry: &CatalogEntry, fields: Vec<FieldReport>) -> EntryReport {
    let mut notes = Vec::new();
    let passed = fields.iter().filter(|r| r.status == Status::Pass).count();
    let mut verdict = if passed == fields.len() {
        Verdict::Pass
    } else if passed > 0 {
        for r in fields.iter().filter(|r| r.status == Status::Fail) {
            notes.push(format!("mismatch only over {}; treated as a bad prime", r.field));
        }
        Verdict::Warn
    } else {
        Verdict::Fail
    };
    let counts: Vec<(u32, usize)> = fields
        .iter()
        .filter_map(|r| match (r.field, r.codim3_count) {
            (FieldSpec::Prime(p), Some(c)) => Some((p, c)),
            _ => None,
        })
        .collect();
    let mut growth = None;
    if !entry.has_closed_form() {
        if counts.len() >= 2 {
            let (lo, hi) = (counts[0], counts[counts.len() - 1]);
            let exponent = growth_exponent(lo.0, lo.1, hi.0, hi.1);
            let window = CODIM3_GROWTH_WINDOW;
            let ok = exponent > window.0 && exponent < window.1;
            if !ok {
                verdict = Verdict::Fail;
            }
            growth = Some(GrowthCheck { primes: (lo.0, hi.0), counts: (lo.1, hi.1), exponent, window, status: Status::of(ok) });
        } else {
            notes.push("growth exponent needs two primes".into());
        }
    }
    EntryReport { id: entry.id.clone(), n: entry.n, verdict, fields, growth, notes, amended: None }
}

/// Sweeps `entry` once per field and checks both the printed and the amended columns.
pub fn verify_entry_fields(entry: &CatalogEntry, fields: &[Field], opts: SweepOptions) -> Result<EntryReport> {
    let amended = entry.amended();
    let mut printed = Vec::with_capacity(fields.len());
    let mut fixed = Vec::new();
    for &f in fields {
        let profile = entry_profile(entry, f, opts)?;
        printed.push(check_profile(entry, &profile, f, opts.budget)?);
        if let Some(a) = &amended {
            fixed.push(check_profile(a, &profile, f, opts.budget)?);
        }
    }
    let mut report = combine_reports(entry, printed);
    if let (Some(a), Some(m)) = (&amended, &entry.amendment) {
        let r = combine_reports(a, fixed);
        report.amended = Some(AmendedReport { note: m.note.clone(), verdict: r.verdict, fields: r.fields });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogReport {
    pub fields: Vec<FieldSpec>,
    pub entries: Vec<EntryReport>,
    pub passed: usize,
    pub warned: usize,
    pub failed: usize,
    /// Entries that fail as printed and pass once amended.
    pub amended_passes: usize,
}

impl CatalogReport {
    pub fn verdict(&self) -> Verdict {
        if self.failed > 0 {
            Verdict::Fail
        } else if self.warned > 0 {
            Verdict::Warn
        } else {
            Verdict::Pass
        }
    }
}

/// Verifies every entry over every field. Entries run in parallel on `opts.workers` threads.
pub fn verify_catalog(entries: &[CatalogEntry], fields: &[Field], opts: SweepOptions) -> Result<CatalogReport> {
    if fields.is_empty() {
        return Err(Error::Catalog("no fields given".into()));
    }
    let inner = SweepOptions { workers: 1, ..opts };
    let one = |e: &CatalogEntry| verify_entry_fields(e, fields, inner);
    let results: Vec<Result<EntryReport>> = if opts.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        pool.install(|| entries.par_iter().map(one).collect())
    } else {
        entries.iter().map(one).collect()
    };
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| entries.iter().filter(|e| e.verdict == v).count();
    Ok(CatalogReport {
        fields: fields.iter().map(|f| f.spec()).collect(),
        passed: count(Verdict::Pass),
        warned: count(Verdict::Warn),
        failed: count(Verdict::Fail),
        amended_passes: entries.iter().filter(|e| e.verdict != Verdict::Pass && e.effective_verdict() == Verdict::Pass).count(),
        entries,
    })
}
