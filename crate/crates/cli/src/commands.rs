use pdres::algebra::{pinch_morphism, AlgebraFile, GradedAlgebra};
use pdres::catalog::{load_catalog, verify_catalog, CatalogEntry, CatalogReport, Verdict};
use pdres::polyring::Polynomial;
use pdres::resonance::{
    turaev_det_pf, BggComplex, ClaimId, ClaimInput, ClaimReport, PointLocus, ProfileSummary, ResonanceProfile, Status,
    SweepOptions, Verifier,
};
use pdres::scalars::{make_field, Field, Scalar};
use serde_json::{json, Value};

use crate::input::{catalog_entries, parse_fields, single_field, InputArgs, Operand, WithArgs};
use crate::{
    BinaryArgs, CatalogAction, Common, Failure, NullityArgs, Outcome, PfaffianArgs, ResonanceArgs, SingleArgs, Verb,
    VerifyArgs,
};

type Run = std::result::Result<Outcome, Failure>;

pub fn run(verb: Verb, common: &Common) -> Run {
    match verb {
        Verb::Resonance(a) => resonance(&a, common),
        Verb::Pfaffian(a) => pfaffian(&a, common),
        Verb::Turaev(a) => turaev(&a, common),
        Verb::Nullity(a) => nullity(&a, common),
        Verb::Generic(a) => generic(&a, common),
        Verb::Connsum(a) => binary(Op::Connsum, &a, common),
        Verb::Tensor(a) => binary(Op::Tensor, &a, common),
        Verb::Wedge(a) => binary(Op::Wedge, &a, common),
        Verb::Verify(a) => verify(&a, common),
        Verb::Catalog(a) => catalog(&a.action, common),
    }
}

/// `--field`, else the field of an algebra file operand, else `default`.
fn field_or(common: &Common, input: &InputArgs, default: &str) -> std::result::Result<Field, Failure> {
    match (&common.field, input.file_field()) {
        (Some(text), _) => single_field(text),
        (None, Some(spec)) => make_field(spec).map_err(Failure::usage_from),
        (None, None) => single_field(default),
    }
}

fn verifier(common: &Common) -> Verifier {
    Verifier::new(common.budget, common.workers)
}

fn sweep_options(common: &Common) -> SweepOptions {
    SweepOptions { budget: common.budget, workers: common.workers.max(1), projective: true }
}

fn render_vec(f: Field, v: &[Scalar]) -> Vec<String> {
    v.iter().map(|c| f.render(c)).collect()
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn parse_claims(names: &[String]) -> std::result::Result<Vec<ClaimId>, Failure> {
    let mut out = Vec::new();
    for name in names {
        if name.eq_ignore_ascii_case("all") {
            out.extend(ClaimId::ALL.into_iter().filter(|c| !c.is_binary()));
        } else {
            out.push(name.parse().map_err(Failure::usage_from)?);
        }
    }
    out.dedup();
    Ok(out)
}

/// The claim input for a single-operand claim.
fn unary_input(claim: ClaimId, op: &Operand) -> std::result::Result<ClaimInput, Failure> {
    match claim {
        ClaimId::Duality | ClaimId::IsotropicUnion => Ok(match op.form() {
            Some(mu) => ClaimInput::Form(mu.clone()),
            None => ClaimInput::Algebra(op.algebra()),
        }),
        _ => Ok(ClaimInput::Form(op.trivector().map_err(Failure::usage_from)?)),
    }
}

fn summarize(profile: &ResonanceProfile, depth: Option<i64>, samples: usize) -> ProfileSummary {
    ProfileSummary::from_profile(profile, depth, samples)
}

fn profile_of(alg: &GradedAlgebra, field: Field, depth: Option<i64>, samples: usize, common: &Common) -> std::result::Result<(ProfileSummary, BggComplex), Failure> {
    let complex = BggComplex::build(alg)?;
    let summary = if field.is_finite() {
        summarize(&ResonanceProfile::compute(&complex, sweep_options(common))?, depth, samples)
    } else {
        ProfileSummary::symbolic(&complex, depth)
    };
    Ok((summary, complex))
}

fn resonance(a: &ResonanceArgs, common: &Common) -> Run {
    let field = field_or(common, &a.input, "p5")?;
    let op = a.input.resolve(field, "--")?;
    let (mut summary, complex) = profile_of(&op.algebra(), field, a.depth, a.samples, common)?;
    if a.generators || !field.is_finite() {
        summary.attach_generators(&complex, a.generator_limit)?;
    }
    let v = verifier(common);
    for claim in parse_claims(&a.claim)? {
        if claim.is_binary() {
            return Err(Failure::usage(format!("{claim} needs two operands; use the verify verb")));
        }
        summary.push_check(&v.verify(claim, &unary_input(claim, &op)?)?);
    }
    let passed = summary.passed();
    let table = format!("{}\n{}", op.label(), summary.table());
    Ok(Outcome { json: to_json(&summary), table, passed })
}

fn zero_locus_count(gens: &[Polynomial], n: usize, field: Field, budget: u64) -> std::result::Result<Option<usize>, Failure> {
    let Some(q) = field.order() else { return Ok(None) };
    let evals: Vec<_> = gens.iter().map(|g| g.residue_evaluator()).collect();
    let homogeneous = gens.iter().all(|g| g.homogeneous_degree().is_some_and(|d| d > 0));
    let locus = if homogeneous {
        PointLocus::from_projective(q, n, budget, true, |pt| evals.iter().all(|e| e.eval(pt) == 0))?
    } else {
        PointLocus::from_fn(q, n, budget, |pt| evals.iter().all(|e| e.eval(pt) == 0))?
    };
    Ok(Some(locus.count()))
}

fn pfaffian(a: &PfaffianArgs, common: &Common) -> Run {
    let field = field_or(common, &a.input, "rational")?;
    let mu = a.input.resolve(field, "--")?.trivector().map_err(Failure::usage_from)?;
    let n = mu.n();
    let theta = mu.theta_matrix();
    let (label, gens) = match a.size {
        Some(s) => {
            if s % 2 == 1 || s > n {
                return Err(Failure::usage(format!("--size must be even and at most n = {n}")));
            }
            let gens: Vec<Polynomial> = theta.pfaffians_ideal(s)?.into_iter().filter(|p| !p.is_zero()).collect();
            (format!("Pf_{s}"), gens)
        }
        None => {
            let pf = mu.pf_polynomial()?;
            ("Pf".to_string(), if pf.is_zero() { Vec::new() } else { vec![pf] })
        }
    };
    let mut rendered: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    rendered.dedup();
    let ideal = if rendered.is_empty() { "(0)".to_string() } else { format!("({})", rendered.join(", ")) };
    let count = zero_locus_count(&gens, n, field, common.budget)?;
    let json = json!({
        "field": field.spec(),
        "n": n,
        "form": mu.render(),
        "size": a.size,
        "ideal": ideal,
        "generators": rendered,
        "zero_locus_count": count,
    });
    let mut table = format!("{label}({}) over {}\n  ideal {ideal}\n", mu.render(), field.spec());
    if let Some(c) = count {
        table.push_str(&format!("  zero locus: {c} points\n"));
    }
    Ok(Outcome { json, table, passed: true })
}

fn turaev(a: &SingleArgs, common: &Common) -> Run {
    let field = field_or(common, &a.input, "rational")?;
    let mu = a.input.resolve(field, "--")?.trivector().map_err(Failure::usage_from)?;
    let t = turaev_det_pf(&mu)?;
    let json = json!({
        "field": field.spec(),
        "n": mu.n(),
        "form": mu.render(),
        "det": t.det.to_string(),
        "pf": t.pf.to_string(),
        "pf_degree": t.pf.homogeneous_degree(),
        "cofactors_checked": t.cofactors_checked,
        "pfaffians_checked": t.pfaffians_checked,
    });
    let table = format!(
        "mu = {} over {}\n  Det = {}\n  Pf  = {}\n  checked {} cofactors, {} principal Pfaffians\n",
        mu.render(),
        field.spec(),
        t.det,
        t.pf,
        t.cofactors_checked,
        t.pfaffians_checked
    );
    Ok(Outcome { json, table, passed: true })
}

fn nullity(a: &NullityArgs, common: &Common) -> Run {
    let field = field_or(common, &a.input, "p5")?;
    let mu = a.input.resolve(field, "--")?.trivector().map_err(Failure::usage_from)?;
    let (nu, u) = mu.nullity(a.cap.unwrap_or(mu.n()), common.budget)?;
    let basis: Vec<Vec<String>> = u.basis().iter().map(|v| render_vec(field, v)).collect();
    let singular = u.is_two_singular(&mu);
    let json = json!({
        "field": field.spec(),
        "n": mu.n(),
        "form": mu.render(),
        "nullity": nu,
        "basis": basis,
        "two_singular": singular,
    });
    let table = format!("nu({}) = {nu} over {}\n  basis {:?}\n", mu.render(), field.spec(), basis);
    Ok(Outcome { json, table, passed: singular })
}

fn generic(a: &SingleArgs, common: &Common) -> Run {
    let field = field_or(common, &a.input, "p5")?;
    let mu = a.input.resolve(field, "--")?.trivector().map_err(Failure::usage_from)?;
    let bp = mu.is_bp_generic()?;
    let dfmr = if field.is_finite() { Some(mu.is_dfmr_generic(common.budget)?) } else { None };
    let json = json!({
        "field": field.spec(),
        "n": mu.n(),
        "form": mu.render(),
        "bp_generic": bp.generic,
        "bp_witness": bp.witness.as_ref().map(|w| render_vec(field, w)),
        "dfmr_generic": dfmr.as_ref().map(|d| d.generic),
        "dfmr_counterexample": dfmr.as_ref().and_then(|d| d.counterexample.as_ref()).map(|w| render_vec(field, w)),
    });
    let mut table = format!("{} over {}\n  BP-generic: {}\n", mu.render(), field.spec(), bp.generic);
    if let Some(d) = &dfmr {
        table.push_str(&format!("  DFMR-generic: {}\n", d.generic));
    }
    Ok(Outcome { json, table, passed: true })
}

#[derive(Clone, Copy)]
enum Op {
    Connsum,
    Tensor,
    Wedge,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Connsum => "connsum",
            Op::Tensor => "tensor",
            Op::Wedge => "wedge",
        }
    }

    fn claim(self) -> ClaimId {
        match self {
            Op::Connsum => ClaimId::Connsum,
            Op::Tensor => ClaimId::Tensor,
            Op::Wedge => ClaimId::Wedge,
        }
    }
}

fn second(with: &WithArgs, field: Field) -> std::result::Result<Operand, Failure> {
    if !with.is_given() {
        return Err(Failure::usage("missing second operand: give --with-form/--with-n, --with-algebra or --with-catalog"));
    }
    with.as_input().resolve(field, "--with-")
}

fn pair_input(claim: ClaimId, b: &Operand, c: &Operand) -> std::result::Result<ClaimInput, Failure> {
    match claim {
        ClaimId::Connsum => Ok(ClaimInput::PdPair(b.pd().map_err(Failure::usage_from)?, c.pd().map_err(Failure::usage_from)?)),
        _ => Ok(ClaimInput::Pair(b.algebra(), c.algebra())),
    }
}

fn binary(op: Op, a: &BinaryArgs, common: &Common) -> Run {
    let field = field_or(common, &a.input, "p5")?;
    let b = a.input.resolve(field, "--")?;
    let c = second(&a.with, field)?;
    let (alg, orientation) = match op {
        Op::Connsum => {
            let sum = b.pd().map_err(Failure::usage_from)?.connected_sum(&c.pd().map_err(Failure::usage_from)?)?;
            (sum.algebra().clone(), Some(sum.orientation().clone()))
        }
        Op::Tensor => (b.algebra().tensor(&c.algebra())?, None),
        Op::Wedge => (b.algebra().wedge(&c.algebra())?, None),
    };
    if let Some(path) = &a.emit_algebra {
        let file = AlgebraFile::from_algebra(&alg, orientation.as_ref());
        std::fs::write(path, file.to_json()).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let (mut summary, _) = profile_of(&alg, field, a.depth, a.samples, common)?;
    let v = verifier(common);
    for claim in parse_claims(&a.claim)? {
        let input = if claim == op.claim() || claim.is_binary() {
            pair_input(claim, &b, &c)?
        } else {
            ClaimInput::Algebra(alg.clone())
        };
        summary.push_check(&v.verify(claim, &input)?);
    }
    let passed = summary.passed();
    let json = json!({
        "operation": op.name(),
        "first": b.label(),
        "second": c.label(),
        "profile": to_json(&summary),
    });
    let table = format!("{} {} {}\n{}", b.label(), op.name(), c.label(), summary.table());
    Ok(Outcome { json, table, passed })
}

fn claim_table(field: Field, reports: &[ClaimReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{:<8} {:<16} {}", field.spec().to_string(), r.claim.name(), r.status));
        if let Some(c) = &r.counterexample {
            out.push_str(&format!("  at i={} k={} {:?}: {}", c.i, c.k, c.point, c.detail));
        }
        if let Some(am) = &r.amended {
            out.push_str(&format!("  [amended: {}]", am.status));
        }
        out.push('\n');
    }
    out
}

fn verify(a: &VerifyArgs, common: &Common) -> Run {
    let fields = match (&common.field, a.input.file_field()) {
        (None, Some(spec)) => vec![make_field(spec).map_err(Failure::usage_from)?],
        (text, _) => parse_fields(text.as_deref().unwrap_or("p5"))?,
    };
    let claims = parse_claims(&a.claim)?;
    let v = verifier(common);
    let mut runs = Vec::new();
    let mut table = String::new();
    let mut passed = true;
    for &field in &fields {
        let mut reports = Vec::new();
        for &claim in &claims {
            let input = match claim {
                ClaimId::Functoriality => {
                    let phi = match a.morphism.as_deref() {
                        Some("pinch") => pinch_morphism(field),
                        Some("inclusion") => {
                            let b = a.input.resolve(field, "--")?.pd().map_err(Failure::usage_from)?;
                            let c = second(&a.with, field)?.pd().map_err(Failure::usage_from)?;
                            b.connected_sum_inclusion(&c, true)?
                        }
                        Some(other) => return Err(Failure::usage(format!("unknown morphism {other:?}; use pinch or inclusion"))),
                        None => return Err(Failure::usage("FUNCTORIALITY needs --morphism pinch|inclusion")),
                    };
                    ClaimInput::Morphism(phi, a.degree)
                }
                c if c.is_binary() => pair_input(c, &a.input.resolve(field, "--")?, &second(&a.with, field)?)?,
                c => unary_input(c, &a.input.resolve(field, "--")?)?,
            };
            reports.push(v.verify(claim, &input)?);
        }
        passed &= reports.iter().all(|r| r.passed());
        table.push_str(&claim_table(field, &reports));
        runs.push(json!({ "field": field.spec(), "reports": to_json(&reports) }));
    }
    Ok(Outcome { json: json!({ "runs": runs }), table, passed })
}

fn entry_row(e: &CatalogEntry) -> String {
    let cols: Vec<String> = e
        .columns
        .iter()
        .map(|c| {
            let key = c.depths.iter().map(|d| format!("R{d}")).collect::<Vec<_>>().join("=");
            format!("{key}: {}", c.expected)
        })
        .collect();
    format!("{:<7} n={}  {:<32} {}\n", e.id, e.n, e.expr, cols.join(" | "))
}

fn catalog_table(r: &CatalogReport, amended: bool) -> String {
    let mut out = String::new();
    for e in &r.entries {
        let per_field: Vec<String> = e.fields.iter().map(|f| format!("{}:{}", f.field, f.status)).collect();
        out.push_str(&format!("{:<7} n={} {:<5} {}", e.id, e.n, e.verdict.to_string(), per_field.join(" ")));
        if let Some(g) = &e.growth {
            out.push_str(&format!("  growth {:.3} in ({}, {}) {}", g.exponent, g.window.0, g.window.1, g.status));
        }
        if let Some(a) = &e.amended {
            out.push_str(&format!("  amended {}", a.verdict));
        }
        out.push('\n');
        for f in &e.fields {
            for d in f.depths.iter().filter(|d| d.status == Status::Fail) {
                out.push_str(&format!("        {} R_{} expected {}: computed {} points", f.field, d.k, d.expected, d.computed_count));
                if let Some((pt, inside)) = &d.mismatch {
                    out.push_str(&format!(", {pt:?} {}", if *inside { "only in computed" } else { "only in expected" }));
                }
                out.push('\n');
            }
        }
        for n in &e.notes {
            out.push_str(&format!("        note: {n}\n"));
        }
    }
    let verdict = if amended { amended_verdict(r) } else { r.verdict() };
    out.push_str(&format!(
        "{} passed, {} warned, {} failed ({} pass once amended): {}\n",
        r.passed, r.warned, r.failed, r.amended_passes, verdict
    ));
    out
}

fn amended_verdict(r: &CatalogReport) -> Verdict {
    let vs: Vec<Verdict> = r.entries.iter().map(|e| e.effective_verdict()).collect();
    if vs.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if vs.contains(&Verdict::Warn) {
        Verdict::Warn
    } else {
        Verdict::Pass
    }
}

fn catalog(action: &CatalogAction, common: &Common) -> Run {
    match action {
        CatalogAction::List => {
            let cat = load_catalog()?;
            let table = cat.iter().map(entry_row).collect();
            Ok(Outcome { json: to_json(&cat), table, passed: true })
        }
        CatalogAction::Show { id } => {
            let e = catalog_entries(std::slice::from_ref(id), false)?.remove(0);
            let depths: Vec<Value> = (0..=e.n as i64 + 1)
                .map(|k| json!({ "k": k, "expected": e.expected(k).map(|x| x.to_string()) }))
                .collect();
            let mut table = entry_row(&e);
            for k in 0..=e.n as i64 + 1 {
                table.push_str(&format!("  R_{k}: {}\n", e.expected(k).map_or("-".into(), |x| x.to_string())));
            }
            if let Some(a) = &e.amendment {
                table.push_str(&format!("  amended: {}\n", a.note));
            }
            Ok(Outcome { json: json!({ "entry": to_json(&e), "depths": depths }), table, passed: true })
        }
        CatalogAction::Verify { ids, all, amended } => {
            let entries = catalog_entries(ids, *all)?;
            let fields = parse_fields(common.field.as_deref().unwrap_or("p5,p7"))?;
            if fields.iter().any(|f| !f.is_finite()) {
                return Err(Failure::usage("catalog verification runs over prime fields"));
            }
            let report = verify_catalog(&entries, &fields, sweep_options(common))?;
            let verdict = if *amended { amended_verdict(&report) } else { report.verdict() };
            let table = catalog_table(&report, *amended);
            let mut json = to_json(&report);
            json["verdict"] = to_json(&verdict);
            Ok(Outcome { json, table, passed: verdict != Verdict::Fail })
        }
    }
}
