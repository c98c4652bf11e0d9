//! BGG complexes, twisted Betti numbers and resonance varieties over finite fields.

mod bgg;
mod chain;
mod claims;
mod ideal;
mod locus;
mod planes;
mod report;
mod sweep;
mod turaev;

pub use bgg::{twisted_betti_direct, BggComplex};
pub use claims::{AmendedCheck, ClaimId, ClaimInput, ClaimReport, Counterexample, Status, Verifier};
pub use chain::{bgg_chain_map, default_splitting, induced_injective, ChainMapReport};
pub use ideal::{pfaffian_loci, pfaffian_shape, IdealOracle, IdealShape, PfaffianShape, ResonanceIdeal};
pub use locus::PointLocus;
pub use planes::{plane_count, union_singular_planes};
pub use report::{default_depths, CheckSummary, LocusSummary, ProfileSummary};
pub use sweep::{ResidueBgg, ResonanceProfile, Scratch, SweepOptions};
pub use turaev::{turaev_det_pf, TuraevPair};
