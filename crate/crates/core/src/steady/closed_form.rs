//! Explicit steady states of the parametric families.
//!
//! Each family reduces to one quadratic: for `Gn_fulldim` in `x2` after `x1 = κ2/κ1`, and for
//! `Gn_conserved`/`Gnk` in `x1` after `x3 = κ2/(2κ3)` fixes the product `x1 x2`.

use super::{anchor_from_totals, Method, SteadyState, SteadyStateReport};
use crate::error::SteadyError;
use crate::families::{check_params, family, FamilyId};
use crate::massaction::{
    build_system, nondegenerate_unchecked, stoichiometric_basis_matrix, RateAssignment,
};
use crate::rational::{to_f64, Q};

/// Positive roots of `a z² + b z + c`, ascending. A double root is reported once.
fn positive_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    // Stable form avoiding cancellation.
    let qv = -0.5 * (b + b.signum() * s);
    let mut roots = if s == 0.0 {
        vec![-b / (2.0 * a)]
    } else {
        vec![qv / a, c / qv]
    };
    roots.retain(|r| *r > 0.0 && r.is_finite());
    roots.sort_by(f64::total_cmp);
    roots
}

/// Steady states from the family formulas. Conserved families need the class totals (in
/// conservation-basis order); `Gn_fulldim` ignores them.
pub fn closed_form_family(
    id: FamilyId,
    n: usize,
    k: Option<usize>,
    rates: &[Q],
    totals: Option<&[f64]>,
) -> Result<SteadyStateReport, SteadyError> {
    let k = check_params(id, n, k)?;
    let net = family(id, n, Some(k))?;
    let assignment = RateAssignment::positional(&net, rates)?;
    let sys = build_system(&net, &assignment)?;
    let kap: Vec<f64> = rates.iter().map(to_f64).collect();
    let points: Vec<Vec<f64>>;
    let anchor: Vec<f64>;
    let class_totals: Vec<f64>;
    match id {
        FamilyId::GnFulldim => {
            let x1 = kap[1] / kap[0];
            points = positive_roots(kap[2], -kap[1], kap[3])
                .into_iter()
                .map(|x2| {
                    let mut p = vec![x1, x2];
                    p.extend((2..n).map(|s| kap[1] * x2 / kap[s + 2]));
                    p
                })
                .collect();
            anchor = points.first().cloned().unwrap_or_else(|| vec![1.0; n]);
            class_totals = Vec::new();
        }
        FamilyId::GnConserved | FamilyId::Gnk => {
            let t = totals.ok_or_else(|| SteadyError::BadTotals("class totals required".into()))?;
            anchor = anchor_from_totals(&net, t)?;
            class_totals = t.to_vec();
            let big_t = anchor[0] + anchor[1] + anchor[2];
            let cats = (n + 1 - k)..n;
            let cat_product: f64 = cats.clone().map(|j| anchor[j]).product();
            let x3 = kap[1] / (2.0 * kap[2]);
            let product = kap[1] * x3 / (kap[0] * cat_product);
            points = positive_roots(1.0, -(big_t - x3), product)
                .into_iter()
                .filter(|_| big_t > x3)
                .flat_map(|x1| {
                    let x2 = product / x1;
                    // Both orderings are states; a double root gives one.
                    let mut v = vec![x1];
                    if (x2 - x1).abs() > 1e-12 * x1 {
                        v.push(x2);
                    }
                    v.into_iter().map(move |a| (a, product / a))
                })
                .map(|(x1, x2)| {
                    let mut p = vec![0.0; n];
                    p[0] = x1;
                    p[1] = x2;
                    p[2] = x3;
                    for s in 3..n + 1 - k {
                        p[s] = kap[1] * x3 / kap[s];
                    }
                    for j in cats.clone() {
                        p[j] = anchor[j];
                    }
                    p
                })
                .collect();
        }
    }
    let mut unique: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !unique.iter().any(|u| super::same_point(u, &p)) {
            unique.push(p);
        }
    }
    let basis = stoichiometric_basis_matrix(&net).to_f64();
    let states = unique
        .into_iter()
        .map(|p| SteadyState {
            residual: sys.residual(&p),
            nondegenerate: nondegenerate_unchecked(&sys, &basis, &p),
            point: p,
        })
        .collect();
    Ok(SteadyStateReport::new(
        anchor,
        class_totals,
        states,
        Method::ClosedForm,
        0,
        0,
    ))
}
