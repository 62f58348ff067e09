//! Positive steady states: exact binomial route, multistart Newton inside compatibility
//! classes, closed forms for the parametric families, and no-steady-state witnesses.

mod binomial;
mod closed_form;
mod newton;
mod witness;

pub use binomial::{
    binomial_reduce, log_linear_solve, monomial_relations, no_positive_certificate,
    pinned_coordinates, BinomialReduction, LogLinearOutcome, MonomialRelation, PinnedCoordinate,
};
pub use closed_form::closed_form_family;
pub use newton::{anchor_from_totals, birch_point, solve_in_class, ClassContext};
pub use witness::{emptiness_certificate, no_pss_witness_search};

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::SteadyError;
use crate::linalg::QMatrix;
use crate::massaction::{
    nondegenerate_unchecked, stoichiometric_basis_matrix, MassActionSystem, RateAssignment,
};
use crate::network::ReactionNetwork;
use crate::par::{map_ordered, Exec};
use crate::rational::{q_frac, q_from_f64_sig, to_f64, Q};
use crate::structural::conservation_basis;

pub const DEFAULT_BUDGET: usize = 200;
/// Two states are the same if every coordinate agrees to this relative distance.
pub const DEDUP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BinomialExact,
    NewtonMultistart,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyState {
    pub point: Vec<f64>,
    pub residual: f64,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyStateReport {
    pub class_anchor: Vec<f64>,
    /// Values of the conservation laws (RREF basis order) on the class.
    pub totals: Vec<f64>,
    pub states: Vec<SteadyState>,
    pub count_pos: usize,
    pub count_nondeg: usize,
    pub method: Method,
    pub seed: u64,
    pub budget: usize,
}

impl SteadyStateReport {
    pub(crate) fn new(
        anchor: Vec<f64>,
        totals: Vec<f64>,
        mut states: Vec<SteadyState>,
        method: Method,
        seed: u64,
        budget: usize,
    ) -> Self {
        states.sort_by(|a, b| {
            a.point
                .iter()
                .zip(&b.point)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Self {
            class_anchor: anchor,
            totals,
            count_pos: states.len(),
            count_nondeg: states.iter().filter(|s| s.nondegenerate).count(),
            states,
            method,
            seed,
            budget,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub budget: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

/// Agreement to the deduplication tolerance.
pub fn same_point(a: &[f64], b: &[f64]) -> bool {
    same_point_tol(a, b, DEDUP_TOL)
}

/// Componentwise relative agreement.
pub fn same_point_tol(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()))
}

/// Log-grid `{1/10, 1, 10}^n`, keeping the first anchor of each compatibility class.
pub fn default_anchors(net: &ReactionNetwork) -> Vec<Vec<Q>> {
    let n = net.n();
    let levels = [q_frac(1, 10), Q::one(), q_frac(10, 1)];
    let w = conservation_basis(net);
    let wm = (!w.is_empty()).then(|| QMatrix::from_rows(w));
    let mut seen: Vec<Vec<Q>> = Vec::new();
    let mut anchors = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut anchor = vec![Q::one(); n];
        for slot in anchor.iter_mut().rev() {
            *slot = levels[c % 3].clone();
            c /= 3;
        }
        let totals = wm.as_ref().map_or_else(Vec::new, |m| m.mul_vec(&anchor));
        if !seen.contains(&totals) {
            seen.push(totals);
            anchors.push(anchor);
        }
    }
    anchors
}

pub fn anchors_f64(anchors: &[Vec<Q>]) -> Vec<Vec<f64>> {
    anchors
        .iter()
        .map(|a| a.iter().map(to_f64).collect())
        .collect()
}

/// `solve_in_class` over each anchor, results in anchor order.
pub fn solve_anchors(
    sys: &MassActionSystem,
    anchors: &[Vec<f64>],
    opts: SolveOptions,
) -> Vec<SteadyStateReport> {
    let ctx = ClassContext::new(&sys.net);
    map_ordered(opts.exec, anchors, |a| {
        ctx.solve(sys, a, opts)
            .expect("anchors are positive with one entry per species")
    })
}

/// Binomial route when it decides the class (unique point or empty), multistart Newton
/// otherwise. A full-dimensional system has a single class, so the anchor is then unused.
pub fn find_steady_states(
    sys: &MassActionSystem,
    anchor: &[f64],
    opts: SolveOptions,
) -> Result<SteadyStateReport, SteadyError> {
    if let Ok(Some(red)) = binomial_reduce(sys) {
        let points = match log_linear_solve(&red) {
            LogLinearOutcome::Unique(p) => Some(vec![p]),
            LogLinearOutcome::Empty => Some(Vec::new()),
            LogLinearOutcome::PositiveDimensional => None,
        };
        if let Some(points) = points {
            let basis = stoichiometric_basis_matrix(&sys.net).to_f64();
            let states = points
                .into_iter()
                .map(|p| SteadyState {
                    residual: sys.residual(&p),
                    nondegenerate: nondegenerate_unchecked(sys, &basis, &p),
                    point: p,
                })
                .collect();
            return Ok(SteadyStateReport::new(
                anchor.to_vec(),
                Vec::new(),
                states,
                Method::BinomialExact,
                opts.seed,
                0,
            ));
        }
    }
    solve_in_class(sys, anchor, opts)
}

/// Log-uniform rate on `[1e-2, 1e2]`, rounded to six significant digits.
pub fn sample_rate(rng: &mut impl Rng) -> Q {
    let exponent: f64 = rng.random_range(-2.0..=2.0);
    q_from_f64_sig(10f64.powf(exponent), 6)
}

pub fn sample_rates(net: &ReactionNetwork, rng: &mut impl Rng) -> RateAssignment {
    RateAssignment(
        net.labels()
            .into_iter()
            .map(|l| (l, sample_rate(rng)))
            .collect(),
    )
}
