//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! The verdict is in the printed lines and the closing summary. The process exits 0 once
//! everything has been reported, so `cargo test` still runs the targets after this one; it exits
//! non-zero only when the run itself cannot start.

use std::process::ExitCode;
use std::time::Instant;

use pdres::algebra::{pinch_morphism, GradedAlgebra, PdAlgebra};
use pdres::catalog::{check_profile, entry_profile, load_catalog, CatalogEntry, FieldReport};
use pdres::enumerate::DEFAULT_BUDGET;
use pdres::forms::Trivector;
use pdres::matlin::{combinations, MinorTable, PolyMatrix, ScalarMatrix};
use pdres::polyring::{Monomial, Polynomial};
use pdres::resonance::{
    turaev_det_pf, union_singular_planes, BggComplex, ClaimReport, IdealOracle, PointLocus, ResonanceIdeal,
    ResonanceProfile, Status, SweepOptions, Verifier,
};
use pdres::scalars::{Field, Scalar};
use pdres::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = DEFAULT_BUDGET;

fn gf(p: u32) -> Field {
    Field::prime(p).expect("prime")
}

fn opts() -> SweepOptions {
    SweepOptions { budget: BUDGET, workers: 1, projective: true }
}

/// Outcome of one criterion: pass flag and a one-line summary.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Collects failure descriptions, keeping the first few.
#[derive(Default)]
struct Failures {
    count: usize,
    first: Vec<String>,
}

impl Failures {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.count += 1;
            if self.first.len() < 3 {
                self.first.push(what());
            }
        }
    }

    fn outcome(self, checks: usize, what: &str) -> Outcome {
        if self.count == 0 {
            Outcome::new(true, format!("{checks} {what}, no mismatches"))
        } else {
            Outcome::new(false, format!("{} of {checks} {what} failed: {}", self.count, self.first.join("; ")))
        }
    }
}

/// Everything computed from one sweep of one catalog entry over one prime.
struct EntrySweep {
    id: String,
    n: usize,
    q: u32,
    table: Result<FieldReport>,
    amended_table: Option<Result<FieldReport>>,
    parity: Vec<String>,
    vanish: Option<String>,
    top: Option<String>,
    duality: Vec<String>,
    codim3: Option<Codim3>,
    oracle: Option<Result<Vec<String>>>,
}

struct Codim3 {
    full_at_1: bool,
    zero_at_4: bool,
    middle_ok: bool,
    count_2: usize,
}

fn locus_eq(a: &PointLocus, b: &PointLocus) -> bool {
    a.first_difference(b).ok().flatten().is_none()
}

fn sweep_entry(entry: &CatalogEntry, q: u32, with_oracle: bool) -> Result<EntrySweep> {
    let field = gf(q);
    let profile = entry_profile(entry, field, opts())?;
    let table = check_profile(entry, &profile, field, BUDGET);
    let amended_table = entry.amended().map(|a| check_profile(&a, &profile, field, BUDGET));
    let mu = entry.trivector(field)?;
    let n = entry.n;
    let ni = n as i64;

    let mut parity = Vec::new();
    let mut k = if n % 2 == 0 { 0 } else { 1 };
    while k + 1 < ni {
        if !locus_eq(&profile.locus(1, k), &profile.locus(1, k + 1)) {
            parity.push(format!("R_{k} != R_{}", k + 1));
        }
        k += 2;
    }
    let vanish = (n >= 3 && !profile.locus(1, ni - 2).is_origin()).then(|| format!("R_{} is not {{0}}", ni - 2));

    let top = if n % 2 == 1 && n >= 3 { top_locus_mismatch(entry, &mu, &profile)? } else { None };

    let mut duality = Vec::new();
    let m = profile.top_degree();
    for i in 0..=m {
        for k in 0..=profile.dims()[i] as i64 + 1 {
            if !locus_eq(&profile.locus(i, k), &profile.locus(m - i, k)) {
                duality.push(format!("R^{i}_{k} != R^{}_{k}", m - i));
            }
        }
    }

    let codim3 = (!entry.has_closed_form()).then(|| {
        let r2 = profile.locus(1, 2);
        Codim3 {
            full_at_1: profile.locus(1, 1).is_full(),
            zero_at_4: profile.locus(1, 4).is_origin(),
            middle_ok: !r2.is_origin() && !r2.is_full() && r2.count() > 1,
            count_2: r2.count(),
        }
    });

    let oracle = with_oracle.then(|| oracle_mismatches(entry, &profile));
    Ok(EntrySweep { id: entry.id.clone(), n, q, table, amended_table, parity, vanish, top, duality, codim3, oracle })
}

/// For an odd form: BP-generic means `R^1_1 = V(Pf) ∪ {0}`, otherwise `R^1_1` is everything.
fn top_locus_mismatch(entry: &CatalogEntry, mu: &Trivector, profile: &ResonanceProfile) -> Result<Option<String>> {
    let (q, n) = (profile.q(), profile.nvars());
    let actual = profile.locus(1, 1);
    let expected = if mu.is_bp_generic()?.generic {
        let pf = turaev_det_pf(&entry.trivector(Field::rational())?)?.pf.change_field(gf(q))?;
        let ev = pf.residue_evaluator();
        PointLocus::from_fn(q, n, BUDGET, |p| p.iter().all(|&x| x == 0) || ev.eval(p) == 0)?
    } else {
        PointLocus::full(q, n, BUDGET)?
    };
    Ok(actual.first_difference(&expected)?.map(|p| format!("R_1 differs from the predicted locus at {p:?}")))
}

/// The ideal-theoretic loci against the sweep, and minors against Pfaffians in degree 1.
fn oracle_mismatches(entry: &CatalogEntry, profile: &ResonanceProfile) -> Result<Vec<String>> {
    let pd = entry.algebra(gf(profile.q()))?;
    let complex = BggComplex::for_pd3(&pd)?;
    let mut oracle = IdealOracle::new(&complex, BUDGET)?;
    let dims = complex.dims().to_vec();
    let mut bad = Vec::new();
    for i in 0..dims.len() {
        for k in 0..=dims[i] as i64 + 1 {
            let truth = profile.locus(i, k);
            if oracle.ideal_locus(&ResonanceIdeal::for_depth(&dims, i, k))? != truth {
                bad.push(format!("ideal locus R^{i}_{k}"));
            }
            if oracle.ideal_locus(&ResonanceIdeal::block_form(&dims, i, k))? != truth {
                bad.push(format!("block ideal locus R^{i}_{k}"));
            }
        }
    }
    let n = entry.n;
    if n >= 1 {
        for k in 0..=n as i64 + 1 {
            let minors = oracle.ideal_locus(&ResonanceIdeal::for_depth(&dims, 1, k))?;
            if oracle.pfaffian_depth_locus(k)? != minors {
                bad.push(format!("minor and Pfaffian loci at k={k}"));
            }
        }
    }
    Ok(bad)
}

fn err_line(e: impl std::fmt::Display) -> String {
    format!("error: {e}")
}

fn criterion_table<'a>(sweeps: impl Iterator<Item = &'a EntrySweep>) -> Outcome {
    let mut checked = 0;
    let mut failed = Vec::new();
    let mut amended_ok = Vec::new();
    let mut amended_bad = Vec::new();
    for s in sweeps.filter(|s| s.codim3.is_none()) {
        checked += 1;
        let ok = match &s.table {
            Ok(r) => r.status == Status::Pass,
            Err(e) => {
                failed.push(format!("{} over GF({}): {}", s.id, s.q, err_line(e)));
                continue;
            }
        };
        if !ok {
            failed.push(format!("{}/GF({})", s.id, s.q));
            match &s.amended_table {
                Some(Ok(r)) if r.status == Status::Pass => amended_ok.push(format!("{}/GF({})", s.id, s.q)),
                _ => amended_bad.push(format!("{}/GF({})", s.id, s.q)),
            }
        }
    }
    if failed.is_empty() {
        return Outcome::new(true, format!("{checked} entry sweeps match the table"));
    }
    let mut detail = format!("{} of {checked} entry sweeps differ from the printed table: {}", failed.len(), failed.join(", "));
    if !amended_ok.is_empty() {
        detail.push_str(&format!("; amended columns match for {}", amended_ok.join(", ")));
    }
    if !amended_bad.is_empty() {
        detail.push_str(&format!("; no passing amendment for {}", amended_bad.join(", ")));
    }
    Outcome::new(false, detail)
}

fn criterion_codim3(p5: &[EntrySweep], p7: &[EntrySweep]) -> Outcome {
    let mut f = Failures::default();
    let mut parts = Vec::new();
    let mut checks = 0;
    for s in p5.iter().filter(|s| s.codim3.is_some()) {
        let c = s.codim3.as_ref().expect("filtered");
        checks += 1;
        f.check(c.full_at_1, || format!("{}: R_1 is not full", s.id));
        f.check(c.zero_at_4, || format!("{}: R_4 is not {{0}}", s.id));
        f.check(c.middle_ok, || format!("{}: R_2 is not a proper nonzero locus", s.id));
        let Some(c7) = p7.iter().find(|t| t.id == s.id).and_then(|t| t.codim3.as_ref()) else {
            f.check(false, || format!("{}: no GF(7) sweep", s.id));
            continue;
        };
        let g = (c7.count_2 as f64 / c.count_2 as f64).ln() / (7f64 / 5f64).ln();
        f.check(g > 4.5 && g < 5.5, || format!("{}: growth exponent {g:.3} outside (4.5, 5.5)", s.id));
        parts.push(format!("{} |R_2| {} -> {}, exponent {g:.3}", s.id, c.count_2, c7.count_2));
    }
    if checks == 0 {
        return Outcome::new(false, "no entries without closed-form expectations");
    }
    let mut o = f.outcome(checks, "entries");
    o.detail = format!("{} ({})", o.detail, parts.join("; "));
    o
}

fn algebra_duality(alg: &GradedAlgebra) -> Result<Vec<String>> {
    let pr = ResonanceProfile::compute(&BggComplex::build(alg)?, opts())?;
    let m = pr.top_degree();
    let mut bad = Vec::new();
    for i in 0..=m {
        for k in 0..=pr.dims()[i] as i64 + 1 {
            if !locus_eq(&pr.locus(i, k), &pr.locus(m - i, k)) {
                bad.push(format!("R^{i}_{k}"));
            }
        }
    }
    Ok(bad)
}

fn criterion_duality(p5: &[EntrySweep]) -> Outcome {
    let mut f = Failures::default();
    let mut checks = 0;
    for s in p5 {
        checks += 1;
        f.check(s.duality.is_empty(), || format!("{}: {}", s.id, s.duality.join(", ")));
    }
    let field = gf(5);
    let extra = [
        ("T^2", GradedAlgebra::exterior(field, 2)),
        ("T^3", GradedAlgebra::exterior(field, 3)),
        ("Sigma_2", GradedAlgebra::surface(field, 2)),
    ];
    for (name, alg) in &extra {
        checks += 1;
        match algebra_duality(alg) {
            Ok(bad) => f.check(bad.is_empty(), || format!("{name}: {}", bad.join(", "))),
            Err(e) => f.check(false, || format!("{name}: {}", err_line(e))),
        }
    }
    f.outcome(checks, "algebras over GF(5)")
}

fn criterion_parity(p5: &[EntrySweep], p7: &[EntrySweep]) -> Outcome {
    let mut f = Failures::default();
    let mut checks = 0;
    for s in p5.iter().chain(p7) {
        checks += 1;
        f.check(s.parity.is_empty(), || format!("{}/GF({}): {}", s.id, s.q, s.parity.join(", ")));
        if s.n >= 3 {
            f.check(s.vanish.is_none(), || format!("{}/GF({}): {}", s.id, s.q, s.vanish.clone().unwrap_or_default()));
        }
    }
    f.outcome(checks, "entry sweeps over GF(5) and GF(7)")
}

/// Det and Pf over the rationals: the quotients agree (checked inside), `Det = Pf^2`, and Pf has
/// the expected degree; a zero determinant for even `n`.
fn turaev_consistency(entry: &CatalogEntry) -> Result<Option<String>> {
    let mu = entry.trivector(Field::rational())?;
    let n = entry.n;
    let t = turaev_det_pf(&mu)?;
    if n % 2 == 0 {
        return Ok((!t.det.is_zero()).then(|| format!("{}: Det is not 0 for even n", entry.id)));
    }
    if t.det != t.pf.mul(&t.pf) {
        return Ok(Some(format!("{}: Det != Pf^2", entry.id)));
    }
    let want = ((n - 3) / 2) as u32;
    if t.pf.homogeneous_degree() != Some(want) {
        return Ok(Some(format!("{}: deg Pf is {:?}, expected {want}", entry.id, t.pf.homogeneous_degree())));
    }
    let expected_cofactors = n * n;
    if t.cofactors_checked != expected_cofactors || t.pfaffians_checked != n {
        return Ok(Some(format!("{}: only {} cofactors and {} Pfaffians checked", entry.id, t.cofactors_checked, t.pfaffians_checked)));
    }
    Ok(None)
}

fn criterion_top(catalog: &[CatalogEntry], p5: &[EntrySweep], p7: &[EntrySweep]) -> Outcome {
    let mut f = Failures::default();
    let mut sweeps = 0;
    for s in p5.iter().chain(p7).filter(|s| s.n % 2 == 1 && s.n >= 3) {
        sweeps += 1;
        f.check(s.top.is_none(), || format!("{}/GF({}): {}", s.id, s.q, s.top.clone().unwrap_or_default()));
    }
    let mut odd = 0;
    let mut even8 = 0;
    for e in catalog.iter().filter(|e| e.n >= 3 && (e.n <= 7 || e.n == 8)) {
        if e.n == 8 && even8 >= 2 {
            continue;
        }
        match turaev_consistency(e) {
            Ok(bad) => f.check(bad.is_none(), || bad.unwrap_or_default()),
            Err(err) => f.check(false, || format!("{}: {}", e.id, err_line(err))),
        }
        if e.n == 8 {
            even8 += 1;
        } else if e.n % 2 == 1 {
            odd += 1;
        }
    }
    let mut o = f.outcome(sweeps, "odd-n sweeps");
    o.detail = format!("{}; Det/Pf consistent for {odd} odd entries with n <= 7, even n with n <= 8 gives Det = 0 ({even8} at n = 8)", o.detail);
    o
}

fn criterion_circle_bundles() -> Outcome {
    let mut f = Failures::default();
    for g in [2usize, 3] {
        let n = 2 * g + 1;
        let expr: Vec<String> = (1..=g).map(|i| format!("{}{}{}", 2 * i - 1, 2 * i, n)).collect();
        let expr = expr.join("+");
        let run = || -> Result<bool> {
            let mu = Trivector::parse(&expr, n, Field::rational())?;
            let pf = turaev_det_pf(&mu)?.pf;
            let mut exps = vec![0u16; n];
            exps[n - 1] = (g - 1) as u16;
            let m = Monomial::from_exponents(exps);
            Ok(pf.num_terms() == 1 && !Field::rational().is_zero(&pf.coefficient(&m)))
        };
        match run() {
            Ok(ok) => f.check(ok, || format!("g = {g}: Pf is not a multiple of x{n}^{}", g - 1)),
            Err(e) => f.check(false, || format!("g = {g}: {}", err_line(e))),
        }
    }
    f.outcome(2, "genera")
}

fn record(f: &mut Failures, name: &str, r: Result<ClaimReport>, amended_passes: &mut usize) {
    match r {
        Ok(rep) => {
            if rep.status != Status::Pass {
                let amended = rep.amended.as_ref().map(|a| a.status == Status::Pass);
                let at = rep.counterexample.as_ref().map(|c| format!(" (i={}, k={}, {:?})", c.i, c.k, c.point)).unwrap_or_default();
                if amended == Some(true) {
                    *amended_passes += 1;
                }
                f.check(false, || match amended {
                    Some(true) => format!("{name}: literal statement fails{at}, amended statement passes"),
                    Some(false) => format!("{name}: literal and amended statements fail{at}"),
                    None => format!("{name}: fails{at}"),
                });
            } else if let Some(a) = &rep.amended {
                f.check(a.status == Status::Pass, || format!("{name}: amended statement fails"));
            }
        }
        Err(e) => f.check(false, || format!("{name}: {}", err_line(e))),
    }
}

fn criterion_structural(catalog: &[CatalogEntry]) -> Outcome {
    let field = gf(3);
    let v = Verifier::new(BUDGET, 1);
    let form = |id: &str| catalog.iter().find(|e| e.id == id).expect("catalog id").trivector(field).expect("form");
    let pd = |id: &str| PdAlgebra::from_trivector(&form(id));
    let pairs = [("II", "II"), ("II", "III"), ("III", "III")];
    let mut f = Failures::default();
    let mut amended_passes = 0;
    let mut checks = 0;
    let mut fails_by_claim: Vec<(&str, usize)> = Vec::new();
    let mut tally = |claim: &'static str, before: usize, after: usize| {
        if after > before {
            fails_by_claim.push((claim, after - before));
        }
    };
    for (name, run) in [
        ("tensor", 0usize),
        ("wedge", 1),
        ("connected sum", 2),
    ] {
        let before = f.count;
        for (b, c) in pairs {
            checks += 1;
            let (pb, pc) = (pd(b), pd(c));
            let r = match run {
                0 => v.tensor(pb.algebra(), pc.algebra()),
                1 => v.wedge(pb.algebra(), pc.algebra()),
                _ => v.connsum(&pb, &pc),
            };
            record(&mut f, &format!("{name} {b},{c}"), r, &mut amended_passes);
        }
        tally(name, before, f.count);
    }
    // Reducible forms: padded catalog forms, one moved off the coordinate radical.
    let mut g = ScalarMatrix::identity(field, 7);
    g.set(5, 0, field.one());
    g.set(6, 1, field.from_i64(2));
    let reducible = vec![
        ("III+1", form("III").padded(1)),
        ("II+2", form("II").padded(2)),
        ("III+2 moved", form("III").padded(2).transform(&g).expect("invertible")),
        ("IV+2", form("IV").padded(2)),
    ];
    let before = f.count;
    for (name, mu) in &reducible {
        checks += 1;
        record(&mut f, &format!("decomposition {name}"), v.decomp(mu), &mut amended_passes);
    }
    tally("decomposition", before, f.count);
    let before = f.count;
    for (name, mu) in &reducible {
        checks += 1;
        record(&mut f, &format!("full below corank {name}"), v.corank_full(mu), &mut amended_passes);
    }
    tally("full below corank", before, f.count);
    let coranks: Vec<usize> = reducible.iter().map(|(_, m)| m.form_rank().1).collect();
    let f_count = f.count;
    let mut o = f.outcome(checks, "instances over GF(3)");
    if !o.pass {
        let by: Vec<String> = fails_by_claim.iter().map(|(c, k)| format!("{c} {k}")).collect();
        o.detail = format!(
            "{} [failures by statement: {}; amended statements pass for {amended_passes} of {}]",
            o.detail,
            by.join(", "),
            f_count
        );
    }
    o.detail = format!("{}; coranks {:?}", o.detail, coranks);
    o
}

fn criterion_oracle(p5: &[EntrySweep]) -> Outcome {
    let mut f = Failures::default();
    let mut checks = 0;
    for s in p5 {
        checks += 1;
        match &s.oracle {
            Some(Ok(bad)) => f.check(bad.is_empty(), || format!("{}: {}", s.id, bad.join(", "))),
            Some(Err(e)) => f.check(false, || format!("{}: {}", s.id, err_line(e))),
            None => f.check(false, || format!("{}: oracle not run", s.id)),
        }
    }
    f.outcome(checks, "entries over GF(5)")
}

fn criterion_planes(catalog: &[CatalogEntry]) -> Outcome {
    let field = gf(3);
    let mut f = Failures::default();
    let mut checks = 0;
    for e in catalog.iter().filter(|e| e.n <= 6) {
        checks += 1;
        let run = || -> Result<Vec<String>> {
            let pd = e.algebra(field)?;
            let pr = ResonanceProfile::compute(&BggComplex::for_pd3(&pd)?, opts())?;
            let mut bad = Vec::new();
            let planes = union_singular_planes(pd.algebra(), BUDGET)?;
            if !locus_eq(&planes, &pr.locus(1, 1)) {
                bad.push("isotropic planes differ from R_1".into());
            }
            let mu = e.trivector(field)?;
            let (nu, u) = mu.nullity(e.n, BUDGET)?;
            if !u.is_two_singular(&mu) || u.dim() != nu {
                bad.push("nullity witness is not 2-singular".into());
            }
            let target = pr.locus(1, nu as i64 - 1);
            if let Some(p) = u.residue_points()?.into_iter().find(|p| !target.contains(p)) {
                bad.push(format!("witness point {p:?} outside R_{}", nu as i64 - 1));
            }
            Ok(bad)
        };
        match run() {
            Ok(bad) => f.check(bad.is_empty(), || format!("{}: {}", e.id, bad.join(", "))),
            Err(err) => f.check(false, || format!("{}: {}", e.id, err_line(err))),
        }
    }
    f.outcome(checks, "entries with n <= 6 over GF(3)")
}

fn criterion_pinch() -> Outcome {
    let field = gf(5);
    let run = || -> Result<Vec<String>> {
        let phi = pinch_morphism(field);
        let mut bad = Vec::new();
        for d in 0..=2 {
            if phi.map(d).rank() != phi.map(d).cols() {
                bad.push(format!("not injective in degree {d}"));
            }
        }
        let (src, tgt) = (phi.source(), phi.target());
        let ps = ResonanceProfile::compute(&BggComplex::build(src)?, opts())?;
        let pt = ResonanceProfile::compute(&BggComplex::build(tgt)?, opts())?;
        if !pt.locus(2, 1).is_origin() {
            bad.push("R^2_1 of the torus is not {0}".into());
        }
        let line = ps.locus(2, 1);
        if !line.is_full() || line.count() != 5 {
            bad.push("R^2_1 of the wedge is not the full line".into());
        }
        let image: Vec<Vec<u32>> = line.points().map(|x| vec![x[0], 0]).collect();
        if image.iter().all(|y| pt.locus(2, 1).contains(y)) {
            bad.push("image of R^2_1 lies inside R^2_1 of the torus".into());
        }
        Ok(bad)
    };
    match run() {
        Ok(bad) if bad.is_empty() => Outcome::new(true, "injective; R^2_1(T^2) = {0}; R^2_1(S^1 v S^2) = line of 5 points, image not contained"),
        Ok(bad) => Outcome::new(false, bad.join("; ")),
        Err(e) => Outcome::new(false, err_line(e)),
    }
}

fn random_linear(rng: &mut ChaCha8Rng, nvars: usize, field: Field) -> Polynomial {
    let coeffs: Vec<Scalar> = (0..nvars).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
    Polynomial::linear(nvars, field, &coeffs)
}

fn random_skew(rng: &mut ChaCha8Rng, size: usize, nvars: usize, field: Field) -> PolyMatrix {
    let mut upper = vec![Polynomial::zero(nvars, field); size * size];
    for i in 0..size {
        for j in i + 1..size {
            let mut e = random_linear(rng, nvars, field);
            if rng.gen_bool(0.3) {
                e = e.mul(&random_linear(rng, nvars, field));
            }
            upper[i * size + j] = e;
        }
    }
    PolyMatrix::from_fn(nvars, field, size, size, |i, j| {
        if i < j {
            upper[i * size + j].clone()
        } else if i > j {
            upper[j * size + i].neg()
        } else {
            Polynomial::zero(nvars, field)
        }
    })
}

fn random_point(rng: &mut ChaCha8Rng, nvars: usize, field: Field) -> Vec<Scalar> {
    (0..nvars).map(|_| field.from_i64(rng.gen_range(-5..=5))).collect()
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Trivector {
    let q = field.order().unwrap_or(5) as i64;
    let mut terms = Vec::new();
    for t in combinations(n, 3) {
        if rng.gen_bool(0.4) {
            terms.push(((t[0], t[1], t[2]), field.from_i64(rng.gen_range(1..q))));
        }
    }
    Trivector::from_terms(n, field, terms).expect("valid terms")
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize, field: Field) -> ScalarMatrix {
    let q = field.order().unwrap_or(5) as i64;
    loop {
        let m = ScalarMatrix::from_fn(field, n, n, |_, _| field.from_i64(rng.gen_range(0..q)));
        if m.rank() == n {
            return m;
        }
    }
}

fn constructed_complexes() -> Result<Vec<(String, BggComplex)>> {
    let mut out = Vec::new();
    for e in load_catalog()? {
        out.push((e.id.clone(), BggComplex::for_pd3(&e.algebra(Field::rational())?)?));
    }
    for field in [Field::rational(), gf(3)] {
        out.push(("T^2".into(), BggComplex::build(&GradedAlgebra::exterior(field, 2))?));
        out.push(("T^3".into(), BggComplex::build(&GradedAlgebra::exterior(field, 3))?));
        out.push(("Sigma_2".into(), BggComplex::build(&GradedAlgebra::surface(field, 2))?));
        out.push(("S^1 v S^2".into(), BggComplex::build(&GradedAlgebra::circle_wedge_sphere(field))?));
        let b = PdAlgebra::from_trivector(&Trivector::parse("123", 3, field)?);
        let c = PdAlgebra::from_trivector(&Trivector::parse("125+345", 5, field)?);
        out.push(("tensor".into(), BggComplex::build(&b.algebra().tensor(c.algebra())?)?));
        out.push(("wedge".into(), BggComplex::build(&b.algebra().wedge(c.algebra())?)?));
        out.push(("connected sum".into(), BggComplex::for_pd3(&b.connected_sum(&c)?)?));
    }
    Ok(out)
}

fn criterion_properties() -> Outcome {
    let mut f = Failures::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let q = Field::rational();

    let complexes = match constructed_complexes() {
        Ok(c) => c,
        Err(e) => return Outcome::new(false, err_line(e)),
    };
    for (name, c) in &complexes {
        f.check(c.squares_to_zero(), || format!("{name}: delta delta != 0"));
    }

    let mut pf_cases = 0;
    for case in 0..120 {
        let size = 2 * (1 + case % 3);
        let m = random_skew(&mut rng, size, 3, q);
        let (pf, det) = (m.pfaffian(), m.det());
        pf_cases += 1;
        match (pf, det) {
            (Ok(pf), Ok(det)) => f.check(pf.mul(&pf) == det, || format!("pf^2 != det for size {size}")),
            _ => f.check(false, || "pf or det failed".into()),
        }
        let odd = random_skew(&mut rng, size - 1, 3, q);
        f.check(odd.det().map(|d| d.is_zero()).unwrap_or(false), || format!("odd skew det of size {} is not 0", size - 1));
    }

    let mut eval_cases = 0;
    for case in 0..120 {
        let size = 2 + case % 5;
        let m = random_skew(&mut rng, size, 4, q);
        let pt = random_point(&mut rng, 4, q);
        eval_cases += 1;
        let run = || -> Result<bool> {
            let mv = m.eval(&pt)?;
            let mut ok = q.eq(&m.det()?.eval(&pt)?, &mv.determinant()?);
            if size % 2 == 0 {
                let constant = PolyMatrix::from_fn(4, q, size, size, |i, j| Polynomial::constant(4, q, mv.get(i, j).clone()));
                ok &= q.eq(&m.pfaffian()?.eval(&pt)?, &constant.pfaffian()?.constant_term());
            }
            let mut table = MinorTable::new(&m);
            for r in 1..size {
                let rows: Vec<usize> = (0..r).collect();
                let cols: Vec<usize> = (size - r..size).collect();
                let sub = ScalarMatrix::from_fn(q, r, r, |i, j| mv.get(rows[i], cols[j]).clone());
                ok &= q.eq(&table.minor(&rows, &cols).eval(&pt)?, &sub.determinant()?);
            }
            Ok(ok)
        };
        f.check(run().unwrap_or(false), || format!("evaluation does not commute for size {size}"));
    }

    let p5 = gf(5);
    let mut action_cases = 0;
    for case in 0..1000 {
        let n = 3 + case % 5;
        let mu = random_form(&mut rng, n, p5);
        let (g, h) = (random_invertible(&mut rng, n, p5), random_invertible(&mut rng, n, p5));
        action_cases += 1;
        let run = || -> Result<bool> {
            let gh = g.mul(&h)?;
            let left = mu.transform(&h)?.transform(&g)?;
            let ok_compose = left == mu.transform(&gh)?;
            let ok_identity = mu.transform(&ScalarMatrix::identity(p5, n))? == mu;
            let ok_inverse = mu.transform(&g)?.transform(&g.inverse()?)? == mu;
            let ok_rank = mu.transform(&g)?.form_rank() == mu.form_rank();
            Ok(ok_compose && ok_identity && ok_inverse && ok_rank)
        };
        f.check(run().unwrap_or(false), || format!("group action or rank law fails for n = {n}"));
    }
    // The resonance varieties move with the form.
    let mut equivariance = 0;
    for case in 0..40 {
        let n = 3 + case % 3;
        let mu = random_form(&mut rng, n, p5);
        let g = random_invertible(&mut rng, n, p5);
        equivariance += 1;
        let run = || -> Result<bool> {
            let v = Verifier::new(BUDGET, 1);
            let (a, b) = (v.profile_form(&mu)?, v.profile_form(&mu.transform(&g)?)?);
            let gr = g.residues();
            for k in 0..=n as i64 + 1 {
                if a.locus(1, k).image(&gr)? != b.locus(1, k) {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        f.check(run().unwrap_or(false), || format!("resonance is not equivariant for n = {n}"));
    }
    let checks = complexes.len() + pf_cases + eval_cases + action_cases + equivariance;
    let mut o = f.outcome(checks, "property cases");
    o.detail = format!(
        "{}; {} complexes, {pf_cases} Pfaffian cases, {eval_cases} evaluation cases, {action_cases} action cases, {equivariance} equivariance cases",
        o.detail,
        complexes.len()
    );
    o
}

fn main() -> ExitCode {
    let start = Instant::now();
    let catalog = match load_catalog() {
        Ok(c) => c,
        Err(e) => {
            println!("criterion 1: FAIL catalog does not load: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut p5 = Vec::new();
    let mut p7 = Vec::new();
    let mut sweep_errors = Vec::new();
    let t_sweep = Instant::now();
    for e in &catalog {
        for (q, out) in [(5u32, &mut p5), (7, &mut p7)] {
            match sweep_entry(e, q, q == 5) {
                Ok(s) => out.push(s),
                Err(err) => sweep_errors.push(format!("{}/GF({q}): {err}", e.id)),
            }
        }
    }
    let sweep_secs = t_sweep.elapsed().as_secs_f64();

    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut table = criterion_table(p5.iter().chain(&p7));
    table.detail = format!("{}; sweeps took {sweep_secs:.1} s", table.detail);
    results.push((1, "catalog table", table));
    results.push((2, "codimension-3 entries", criterion_codim3(&p5, &p7)));
    results.push((3, "duality", criterion_duality(&p5)));
    results.push((4, "parity chains and vanishing", criterion_parity(&p5, &p7)));
    results.push((5, "top locus and Det/Pf", criterion_top(&catalog, &p5, &p7)));
    results.push((6, "circle bundles over surfaces", criterion_circle_bundles()));
    results.push((7, "structural formulas", criterion_structural(&catalog)));
    results.push((8, "ideal oracle", criterion_oracle(&p5)));
    results.push((9, "isotropic planes and nullity", criterion_planes(&catalog)));
    results.push((10, "pinch map", criterion_pinch()));
    results.push((11, "property suites", criterion_properties()));

    if !sweep_errors.is_empty() {
        for (_, _, o) in results.iter_mut().filter(|(id, _, _)| [1, 2, 3, 4, 5, 8].contains(id)) {
            o.pass = false;
            o.detail = format!("{}; sweep errors: {}", o.detail, sweep_errors.join(", "));
        }
    }
    for (id, name, o) in &results {
        println!("criterion {id} ({name}): {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<String> = results.iter().filter(|(_, _, o)| !o.pass).map(|(id, _, _)| id.to_string()).collect();
    println!(
        "acceptance: {} PASS, {} FAIL{} in {:.1} s",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" (criteria {})", failed.join(", ")) },
        start.elapsed().as_secs_f64()
    );
    ExitCode::SUCCESS
}
