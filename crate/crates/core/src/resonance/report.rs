use serde::Serialize;

use crate::error::Result;
use crate::scalars::FieldSpec;

use super::bgg::BggComplex;
use super::claims::{ClaimId, ClaimReport, Counterexample, Status};
use super::ideal::ResonanceIdeal;
use super::sweep::ResonanceProfile;

/// One `(i, k)` row of a rendered profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocusSummary {
    pub i: usize,
    pub k: i64,
    /// Number of points over the field; absent over the rationals.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    pub sample_points: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal_generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub claim: ClaimId,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl From<&ClaimReport> for CheckSummary {
    fn from(r: &ClaimReport) -> Self {
        CheckSummary { claim: r.claim, status: r.status, counterexample: r.counterexample.clone() }
    }
}

/// The JSON shape emitted for a resonance computation. Loci are sorted by `(i, k)` and sample
/// points are the lexicographically first ones, so output is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileSummary {
    pub field: FieldSpec,
    pub n: usize,
    pub dims: Vec<usize>,
    pub loci: Vec<LocusSummary>,
    pub checks: Vec<CheckSummary>,
}

/// Depths reported by default for degree `i`: `1..=b_i`.
pub fn default_depths(dims: &[usize], i: usize) -> Vec<i64> {
    (1..=dims[i] as i64).collect()
}

impl ProfileSummary {
    /// Summarises a sweep. `depth` restricts every degree to one depth.
    pub fn from_profile(profile: &ResonanceProfile, depth: Option<i64>, samples: usize) -> Self {
        let dims = profile.dims().to_vec();
        let mut loci = Vec::new();
        for i in 0..dims.len() {
            let ks = depth.map_or_else(|| default_depths(&dims, i), |k| vec![k]);
            for k in ks {
                let l = profile.locus(i, k);
                loci.push(LocusSummary { i, k, count: Some(l.count()), sample_points: l.sample_points(samples), ideal_generators: None });
            }
        }
        ProfileSummary { field: FieldSpec::Prime(profile.q()), n: profile.nvars(), dims, loci, checks: Vec::new() }
    }

    /// A profile with no point data, for fields where sweeping is impossible.
    pub fn symbolic(complex: &BggComplex, depth: Option<i64>) -> Self {
        let dims = complex.dims().to_vec();
        let mut loci = Vec::new();
        for i in 0..dims.len() {
            for k in depth.map_or_else(|| default_depths(&dims, i), |k| vec![k]) {
                loci.push(LocusSummary { i, k, count: None, sample_points: Vec::new(), ideal_generators: None });
            }
        }
        ProfileSummary { field: complex.field().spec(), n: complex.nvars(), dims, loci, checks: Vec::new() }
    }

    /// Fills in ideal generators for every locus, refusing above `limit` generators per ideal.
    pub fn attach_generators(&mut self, complex: &BggComplex, limit: usize) -> Result<()> {
        for l in &mut self.loci {
            let ideal = if l.i == 1 && complex.top_degree() == 3 {
                ResonanceIdeal::for_depth(complex.dims(), l.i, l.k)
            } else {
                ResonanceIdeal::block_form(complex.dims(), l.i, l.k)
            };
            let mut gens: Vec<String> = ideal.generators(complex, limit)?.iter().filter(|p| !p.is_zero()).map(|p| p.to_string()).collect();
            gens.dedup();
            l.ideal_generators = Some(gens);
        }
        Ok(())
    }

    pub fn push_check(&mut self, report: &ClaimReport) {
        self.checks.push(report.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// Plain-text table: one line per locus.
    pub fn table(&self) -> String {
        let mut out = format!("field {}  n = {}  dims {:?}\n", self.field, self.n, self.dims);
        out.push_str("  i   k     count  sample\n");
        for l in &self.loci {
            let count = l.count.map_or("-".to_string(), |c| c.to_string());
            let sample = l.sample_points.iter().take(3).map(|p| format!("{p:?}")).collect::<Vec<_>>().join(" ");
            out.push_str(&format!("{:>3} {:>3} {:>9}  {}\n", l.i, l.k, count, sample));
            if let Some(g) = &l.ideal_generators {
                if !g.is_empty() {
                    out.push_str(&format!("          ideal: {}\n", g.join(", ")));
                }
            }
        }
        for c in &self.checks {
            out.push_str(&format!("{:<14} {}\n", c.claim.name(), c.status));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PdAlgebra;
    use crate::forms::Trivector;
    use crate::resonance::SweepOptions;
    use crate::scalars::Field;

    #[test]
    fn renders_form_three() {
        let f = Field::prime(5).unwrap();
        let pd = PdAlgebra::from_trivector(&Trivector::parse("125+345", 5, f).unwrap());
        let c = BggComplex::for_pd3(&pd).unwrap();
        let p = ResonanceProfile::compute(&c, SweepOptions::default()).unwrap();
        let mut s = ProfileSummary::from_profile(&p, None, 2);
        assert_eq!(s.loci.len(), 1 + 5 + 5 + 1);
        let r11 = s.loci.iter().find(|l| l.i == 1 && l.k == 1).unwrap();
        assert_eq!(r11.count, Some(625));
        assert_eq!(r11.sample_points, vec![vec![0, 0, 0, 1, 0], vec![0, 0, 0, 2, 0]]);
        s.attach_generators(&c, 1000).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, serde_json::to_string(&s).unwrap());
        assert!(json.contains("\"ideal_generators\""));
        let only = ProfileSummary::from_profile(&p, Some(3), 1);
        assert!(only.loci.iter().all(|l| l.k == 3));
    }
}
