//! Checks the multistationarity and ACR claims of the parametric families at given rates.

use serde::Serialize;

use crate::acr::{acr_check, AcrStatus};
use crate::error::AtlasError;
use crate::families::{acr_species, check_params, family, FamilyId};
use crate::massaction::{build_system, RateAssignment};
use crate::rational::{to_f64, Q};
use crate::steady::{closed_form_family, same_point_tol, ClassContext, SolveOptions};

/// Relative tolerance for claimed values and closed-form agreement.
pub const CLAIM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clause {
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: FamilyId,
    pub n: usize,
    pub k: usize,
    pub clauses: Vec<Clause>,
    pub holds: bool,
}

impl FamilyReport {
    pub fn failing(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.holds)
    }
}

/// Claimed ACR value of species `s` (0-based).
fn claimed_value(id: FamilyId, n: usize, k: usize, s: usize, kap: &[f64]) -> f64 {
    match id {
        FamilyId::GnFulldim => kap[1] / kap[0],
        _ if s == 2 => kap[1] / (2.0 * kap[2]),
        _ => {
            debug_assert!(s < n + 1 - k);
            kap[1] * kap[1] / (2.0 * kap[2] * kap[s])
        }
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Solves each anchor's class numerically and compares against the closed forms and the
/// claimed ACR values.
pub fn verify_family_claims(
    id: FamilyId,
    n: usize,
    k: Option<usize>,
    rates: &[Q],
    anchors: &[Vec<f64>],
    opts: SolveOptions,
) -> Result<FamilyReport, AtlasError> {
    let k = check_params(id, n, k)?;
    let net = family(id, n, Some(k))?;
    let assignment =
        RateAssignment::positional(&net, rates).map_err(crate::error::SteadyError::from)?;
    let sys = build_system(&net, &assignment).map_err(crate::error::SteadyError::from)?;
    let kap: Vec<f64> = rates.iter().map(to_f64).collect();
    let ctx = ClassContext::new(&net);
    let mut clauses = Vec::new();

    let mut best = 0;
    let mut agree = true;
    let mut notes = Vec::new();
    for a in anchors {
        let numeric = ctx.solve(&sys, a, opts)?;
        let totals = ctx.totals(a);
        let closed = closed_form_family(id, n, Some(k), rates, Some(&totals))?;
        best = best.max(numeric.count_nondeg);
        let matched = closed.states.len() == numeric.states.len()
            && closed.states.iter().all(|c| {
                numeric
                    .states
                    .iter()
                    .any(|s| same_point_tol(&s.point, &c.point, CLAIM_TOL))
            });
        agree &= matched;
        notes.push(format!(
            "class {:?}: {} numeric, {} closed-form",
            totals, numeric.count_nondeg, closed.count_nondeg
        ));
    }
    clauses.push(Clause {
        claim: "two nondegenerate positive steady states in some class".into(),
        holds: best >= 2,
        detail: notes.join("; "),
    });
    clauses.push(Clause {
        claim: "closed-form states match the numeric search".into(),
        holds: agree,
        detail: format!("tolerance {CLAIM_TOL:e} relative"),
    });
    for s in acr_species(id, n, k) {
        let want = claimed_value(id, n, k, s, &kap);
        let v = acr_check(&sys, s, anchors, opts).map_err(|e| AtlasError::Claim(e.to_string()))?;
        let holds = v.status == AcrStatus::Acr
            && v.acr_value
                .is_some_and(|got| rel_close(got, want, CLAIM_TOL));
        clauses.push(Clause {
            claim: format!("ACR in {} with value {want}", net.species()[s]),
            holds,
            detail: format!("status {:?}, value {:?}", v.status, v.acr_value),
        });
    }
    let holds = clauses.iter().all(|c| c.holds);
    Ok(FamilyReport {
        family: id,
        n,
        k,
        clauses,
        holds,
    })
}
