//! Exact consequences of `f = N m(x) = 0` that only involve two monomials at a time.
//!
//! When a full-dimensional network has exactly `n+1` reactant monomials and `rank N = n`,
//! row reduction turns the steady-state equations into the binomials `m_i = β_i m_{n+1}`,
//! and taking logarithms gives the linear system `A ln x = ln β`. More generally, any
//! vector in the row space of `N` supported on two columns yields a relation
//! `m_a = β m_b` valid at every positive steady state.

use itertools::Itertools;
use nalgebra::DVector;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::SteadyError;
use crate::linalg::QMatrix;
use crate::massaction::{n_matrix, MassActionSystem, NMatrixDecomposition};
use crate::rational::{exact_root, q, to_f64, Q};
use crate::structural::is_full_dimensional;

#[derive(Debug, Clone, PartialEq)]
pub struct BinomialReduction {
    pub betas: Vec<Q>,
    pub pivot_monomial: Vec<u32>,
    /// Column order used for the reduction; the last entry is the pivot monomial.
    pub pivot_order: Vec<usize>,
    pub monomials: Vec<Vec<u32>>,
    /// Row `i` is `exponent(m_{pivot_order[i]}) − exponent(pivot_monomial)`.
    pub a: QMatrix,
    pub rank_a: usize,
}

/// `Ok(None)` when `rank N < n` (binomial route not applicable).
pub fn binomial_reduce(sys: &MassActionSystem) -> Result<Option<BinomialReduction>, SteadyError> {
    let n = sys.n();
    let d = n_matrix(sys);
    if d.monomials.len() != n + 1 {
        return Err(SteadyError::WrongReactantCount {
            expected: n + 1,
            got: d.monomials.len(),
        });
    }
    if !is_full_dimensional(&sys.net) {
        return Err(SteadyError::NotFullDimensional);
    }
    if d.rank_n < n {
        return Ok(None);
    }
    let subset = (0..=n)
        .combinations(n)
        .find(|cols| d.n.select_columns(cols).rank() == n)
        .expect("rank n guarantees an invertible column subset");
    let pivot = (0..=n)
        .find(|c| !subset.contains(c))
        .expect("one column left");
    let mut order = subset.clone();
    order.push(pivot);
    let (r, _) = d.n.select_columns(&order).rref();
    let betas = (0..n).map(|i| -r[(i, n)].clone()).collect();
    let pivot_monomial = d.monomials[pivot].clone();
    let mut a = QMatrix::zeros(n, n);
    for (i, &c) in subset.iter().enumerate() {
        for l in 0..n {
            a[(i, l)] = q(d.monomials[c][l] as i64 - pivot_monomial[l] as i64);
        }
    }
    let rank_a = a.rank();
    Ok(Some(BinomialReduction {
        betas,
        pivot_monomial,
        pivot_order: order,
        monomials: d.monomials,
        a,
        rank_a,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "point")]
pub enum LogLinearOutcome {
    Unique(Vec<f64>),
    Empty,
    PositiveDimensional,
}

pub fn log_linear_solve(red: &BinomialReduction) -> LogLinearOutcome {
    if red.betas.iter().any(|b| !b.is_positive()) {
        return LogLinearOutcome::Empty;
    }
    let n = red.betas.len();
    let ln_beta: Vec<f64> = red.betas.iter().map(|b| to_f64(b).ln()).collect();
    if red.rank_a == n {
        let inv = red.a.inverse().expect("full rank").to_f64();
        let z = inv * DVector::from_vec(ln_beta);
        return LogLinearOutcome::Unique(z.iter().map(|v| v.exp()).collect());
    }
    let a = red.a.to_f64();
    let b = DVector::from_vec(ln_beta);
    let Ok(z) = a.clone().svd(true, true).solve(&b, 1e-12) else {
        return LogLinearOutcome::Empty;
    };
    let residual = (&a * z - &b).amax();
    if residual < 1e-9 * b.amax().max(1.0) {
        LogLinearOutcome::PositiveDimensional
    } else {
        LogLinearOutcome::Empty
    }
}

/// A consequence of `N m = 0` involving one or two reactant monomials (column indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialRelation {
    /// `m_a = beta * m_b`.
    Proportional { a: usize, b: usize, beta: Q },
    /// `m_a = 0`: no positive steady state can exist.
    ForcedZero { a: usize },
}

/// Every relation supported on at most two monomials (one per pair, plus forced zeros).
pub fn monomial_relations(d: &NMatrixDecomposition) -> Vec<MonomialRelation> {
    let j = d.monomials.len();
    let mut forced = vec![false; j];
    let mut out = Vec::new();
    let mut pair_vectors = Vec::new();
    for (a, b) in (0..j).tuple_combinations() {
        let others: Vec<usize> = (0..j).filter(|&c| c != a && c != b).collect();
        // Row-space vectors yᵀN vanishing on `others` come from the left null space of N[:, others].
        let ys = if others.is_empty() {
            QMatrix::identity(d.n.nrows()).to_rows()
        } else {
            d.n.select_columns(&others).left_null_space_rref()
        };
        let ab = d.n.select_columns(&[a, b]);
        let vecs: Vec<Vec<Q>> = ys
            .iter()
            .map(|y| {
                vec![
                    crate::linalg::dot(y, &ab.column(0)),
                    crate::linalg::dot(y, &ab.column(1)),
                ]
            })
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect();
        if vecs.is_empty() {
            continue;
        }
        let span = QMatrix::from_rows(vecs.clone()).rref();
        if span.1.len() == 2 {
            forced[a] = true;
            forced[b] = true;
            continue;
        }
        let v = &span.0;
        let (va, vb) = (v[(0, 0)].clone(), v[(0, 1)].clone());
        if vb.is_zero() {
            forced[a] = true;
        } else if va.is_zero() {
            forced[b] = true;
        } else {
            pair_vectors.push((a, b, -vb / va));
        }
    }
    for (a, f) in forced.iter().enumerate() {
        if *f {
            out.push(MonomialRelation::ForcedZero { a });
        }
    }
    out.extend(
        pair_vectors
            .into_iter()
            .map(|(a, b, beta)| MonomialRelation::Proportional { a, b, beta }),
    );
    out
}

/// Human-readable reason why no positive steady state exists, if the relations prove it.
pub fn no_positive_certificate(d: &NMatrixDecomposition) -> Option<String> {
    monomial_relations(d).into_iter().find_map(|r| match r {
        MonomialRelation::ForcedZero { a } => Some(format!(
            "monomial {} must vanish",
            crate::poly::format_monomial(&d.monomials[a])
        )),
        MonomialRelation::Proportional { a, b, beta } if !beta.is_positive() => Some(format!(
            "{} = ({}) * {} with a non-positive factor",
            crate::poly::format_monomial(&d.monomials[a]),
            crate::rational::format_q(&beta),
            crate::poly::format_monomial(&d.monomials[b])
        )),
        _ => None,
    })
}

/// A species whose value is the same at every positive steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinnedCoordinate {
    pub species: usize,
    pub value: f64,
    /// Exact value when it is rational.
    #[serde(serialize_with = "serialize_opt_q")]
    pub exact: Option<Q>,
}

fn serialize_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&crate::rational::format_q(q)),
        None => s.serialize_none(),
    }
}

/// Coordinates fixed by the positive proportional relations: `x_i` is pinned when the unit
/// vector `e_i` is a rational combination of the relation exponent differences.
pub fn pinned_coordinates(d: &NMatrixDecomposition) -> Vec<PinnedCoordinate> {
    let rels: Vec<(Vec<i64>, Q)> = monomial_relations(d)
        .into_iter()
        .filter_map(|r| match r {
            MonomialRelation::Proportional { a, b, beta } if beta.is_positive() => {
                let e = d.monomials[a]
                    .iter()
                    .zip(&d.monomials[b])
                    .map(|(&x, &y)| x as i64 - y as i64)
                    .collect();
                Some((e, beta))
            }
            _ => None,
        })
        .collect();
    if rels.is_empty() {
        return Vec::new();
    }
    let n = d.n.nrows();
    let r = rels.len();
    let mut out = Vec::new();
    for i in 0..n {
        // Solve Σ c_r e_r = e_i, i.e. Eᵀ c = e_i with an augmented column.
        let mut aug = QMatrix::zeros(n, r + 1);
        for (col, (e, _)) in rels.iter().enumerate() {
            for l in 0..n {
                aug[(l, col)] = q(e[l]);
            }
        }
        aug[(i, r)] = Q::one();
        let (rr, pivots) = aug.rref();
        if pivots.contains(&r) {
            continue;
        }
        let mut c = vec![Q::zero(); r];
        for (row, &p) in pivots.iter().enumerate() {
            c[p] = rr[(row, r)].clone();
        }
        let value: f64 = c
            .iter()
            .zip(&rels)
            .map(|(ci, (_, beta))| to_f64(ci) * to_f64(beta).ln())
            .sum::<f64>()
            .exp();
        out.push(PinnedCoordinate {
            species: i,
            value,
            exact: exact_product(&c, &rels),
        });
    }
    out
}

/// `Π β_r^{c_r}` when it is rational.
fn exact_product(c: &[Q], rels: &[(Vec<i64>, Q)]) -> Option<Q> {
    let den = crate::rational::lcm_of_denominators(c.iter());
    let den_u: u32 = den.try_into().ok()?;
    let mut acc = Q::one();
    for (ci, (_, beta)) in c.iter().zip(rels) {
        let p = ci * Q::from_integer(den_u.into());
        let p: i64 = p.to_integer().try_into().ok()?;
        if p.unsigned_abs() > 64 {
            return None;
        }
        let base = if p >= 0 { beta.clone() } else { beta.recip() };
        acc *= num_traits::pow(base, p.unsigned_abs() as usize);
    }
    exact_root(&acc, den_u)
}
