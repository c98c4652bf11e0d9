use std::path::PathBuf;

use clap::Args;
use pdres::algebra::{AlgebraFile, GradedAlgebra, PdAlgebra};
use pdres::catalog::{find_entry, load_catalog, CatalogEntry};
use pdres::forms::Trivector;
use pdres::scalars::{make_field, Field, FieldSpec};
use pdres::{Error, Result};

use crate::Failure;

/// The first operand: exactly one of a form, an algebra file or a catalog id.
#[derive(Debug, Clone, Args, Default)]
pub struct InputArgs {
    /// Trivector expression such as "125+345"
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub form: Option<String>,
    /// Number of variables for --form
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,
    /// JSON algebra file
    #[arg(long, value_name = "FILE")]
    pub algebra: Option<PathBuf>,
    /// Catalog entry id, e.g. III or V_a
    #[arg(long, value_name = "ID")]
    pub catalog: Option<String>,
}

/// The second operand of the binary verbs, same rules as the first.
#[derive(Debug, Clone, Args, Default)]
pub struct WithArgs {
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub with_form: Option<String>,
    #[arg(long, value_name = "N")]
    pub with_n: Option<usize>,
    #[arg(long, value_name = "FILE")]
    pub with_algebra: Option<PathBuf>,
    #[arg(long, value_name = "ID")]
    pub with_catalog: Option<String>,
}

impl WithArgs {
    pub fn as_input(&self) -> InputArgs {
        InputArgs {
            form: self.with_form.clone(),
            n: self.with_n,
            algebra: self.with_algebra.clone(),
            catalog: self.with_catalog.clone(),
        }
    }

    pub fn is_given(&self) -> bool {
        self.with_form.is_some() || self.with_algebra.is_some() || self.with_catalog.is_some()
    }
}

/// A resolved operand.
#[derive(Debug, Clone)]
pub enum Operand {
    Form { mu: Trivector, label: String },
    Algebra { alg: GradedAlgebra, pd: Option<PdAlgebra>, label: String },
}

impl Operand {
    pub fn label(&self) -> &str {
        match self {
            Operand::Form { label, .. } | Operand::Algebra { label, .. } => label,
        }
    }

    pub fn form(&self) -> Option<&Trivector> {
        match self {
            Operand::Form { mu, .. } => Some(mu),
            Operand::Algebra { .. } => None,
        }
    }

    /// The trivector, also recovered from a `PD_3` algebra file.
    pub fn trivector(&self) -> Result<Trivector> {
        match self {
            Operand::Form { mu, .. } => Ok(mu.clone()),
            Operand::Algebra { pd: Some(pd), .. } if pd.top_degree() == 3 => pd.trivector(),
            Operand::Algebra { .. } => Err(Error::Structural("this verb needs a 3-form or a PD_3 algebra".into())),
        }
    }

    pub fn algebra(&self) -> GradedAlgebra {
        match self {
            Operand::Form { mu, .. } => PdAlgebra::from_trivector(mu).algebra().clone(),
            Operand::Algebra { alg, .. } => alg.clone(),
        }
    }

    pub fn pd(&self) -> Result<PdAlgebra> {
        match self {
            Operand::Form { mu, .. } => Ok(PdAlgebra::from_trivector(mu)),
            Operand::Algebra { pd: Some(pd), .. } => Ok(pd.clone()),
            Operand::Algebra { .. } => Err(Error::Structural("algebra file has no orientation, so it is not a PD algebra".into())),
        }
    }
}

impl InputArgs {
    fn count(&self) -> usize {
        [self.form.is_some(), self.algebra.is_some(), self.catalog.is_some()].iter().filter(|&&b| b).count()
    }

    /// The field named inside an algebra file, when that is the operand and it parses.
    pub fn file_field(&self) -> Option<FieldSpec> {
        let text = std::fs::read_to_string(self.algebra.as_ref()?).ok()?;
        AlgebraFile::from_json(&text).ok().map(|f| f.field)
    }

    /// Resolves the operand over `field`. Exactly one source must be given.
    pub fn resolve(&self, field: Field, flag: &str) -> std::result::Result<Operand, Failure> {
        match self.count() {
            0 => return Err(Failure::usage(format!("no input: give {flag}form EXPR {flag}n N, {flag}algebra FILE or {flag}catalog ID"))),
            1 => {}
            _ => return Err(Failure::usage(format!("conflicting inputs: give only one of {flag}form, {flag}algebra, {flag}catalog"))),
        }
        if self.n.is_some() && self.form.is_none() {
            return Err(Failure::usage(format!("{flag}n only applies to {flag}form")));
        }
        if let Some(expr) = &self.form {
            let n = self.n.ok_or_else(|| Failure::usage(format!("{flag}form needs {flag}n")))?;
            let mu = Trivector::parse(expr, n, field).map_err(Failure::usage_from)?;
            return Ok(Operand::Form { mu, label: expr.clone() });
        }
        if let Some(id) = &self.catalog {
            let cat = load_catalog().map_err(Failure::from)?;
            let e = find_entry(&cat, id).map_err(Failure::usage_from)?;
            return Ok(Operand::Form { mu: e.trivector(field).map_err(Failure::from)?, label: e.id.clone() });
        }
        let path = self.algebra.as_ref().expect("counted");
        let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let file = AlgebraFile::from_json(&text).map_err(Failure::usage_from)?;
        let (alg, orientation) = file.build(Some(field)).map_err(Failure::usage_from)?;
        let pd = match orientation {
            Some(o) => Some(PdAlgebra::new(alg.clone(), o).map_err(Failure::usage_from)?),
            None => None,
        };
        Ok(Operand::Algebra { alg, pd, label: path.display().to_string() })
    }
}

/// Parses `rational`, `p5` or a comma-separated list `p5,p7`.
pub fn parse_fields(text: &str) -> std::result::Result<Vec<Field>, Failure> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let spec: FieldSpec = part.parse().map_err(Failure::usage_from)?;
        out.push(make_field(spec).map_err(Failure::usage_from)?);
    }
    if out.is_empty() {
        return Err(Failure::usage("empty --field"));
    }
    Ok(out)
}

pub fn single_field(text: &str) -> std::result::Result<Field, Failure> {
    let fields = parse_fields(text)?;
    if fields.len() != 1 {
        return Err(Failure::usage("this verb takes a single --field"));
    }
    Ok(fields[0])
}

pub fn catalog_entries(ids: &[String], all: bool) -> std::result::Result<Vec<CatalogEntry>, Failure> {
    let cat = load_catalog().map_err(Failure::from)?;
    if all {
        if !ids.is_empty() {
            return Err(Failure::usage("--all conflicts with explicit ids"));
        }
        return Ok(cat);
    }
    if ids.is_empty() {
        return Err(Failure::usage("give entry ids or --all"));
    }
    ids.iter().map(|id| find_entry(&cat, id).cloned().map_err(Failure::usage_from)).collect()
}
