//! Exhaustive enumeration of small networks, counterexample audits, and family checks.

mod audit;
mod enumerate;
mod verify;

pub use audit::{audit, AuditConfig, AuditResult, ControlOutcome, Counterexample, TheoremId};
pub use enumerate::{
    canonical_form, canonical_network, canonical_pairs, complexes_up_to, enumerate_networks,
    EnumSpec, Pair, MAX_CANONICAL_ESTIMATE,
};
pub use verify::{verify_family_claims, Clause, FamilyReport, CLAIM_TOL};
