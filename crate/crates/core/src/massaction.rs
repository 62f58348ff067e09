//! Mass-action ODEs, the reactant-monomial decomposition `f = N m(x)`, Jacobians and
//! nondegeneracy.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::MassActionError;
use crate::linalg::{singular_values, QMatrix};
use crate::network::{RateLabel, ReactionNetwork};
use crate::poly::{sign_changes, SparsePolynomial};
use crate::rational::{q, to_f64, Q};
use crate::structural::{conservation_basis, stoichiometric_basis};

/// Relative singular-value threshold for numeric ranks.
pub const RANK_REL_TOL: f64 = 1e-8;
/// Singular values at or below this are treated as an all-zero matrix.
pub const RANK_ABS_FLOOR: f64 = 1e-12;
/// Steady-state acceptance: `‖f(x)‖∞ < STEADY_TOL * (1 + ‖x‖∞)`.
pub const STEADY_TOL: f64 = 1e-9;

/// Values for the symbolic rate labels of a network.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RateAssignment(pub BTreeMap<String, Q>);

impl RateAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, label: impl Into<String>, value: Q) -> &mut Self {
        self.0.insert(label.into(), value);
        self
    }

    pub fn get(&self, label: &str) -> Option<&Q> {
        self.0.get(label)
    }

    /// Every label of `net` bound to one.
    pub fn ones(net: &ReactionNetwork) -> Self {
        Self(net.labels().into_iter().map(|l| (l, Q::one())).collect())
    }

    /// Binds `values` to the labels of `net` in first-appearance order.
    pub fn positional(net: &ReactionNetwork, values: &[Q]) -> Result<Self, MassActionError> {
        let labels = net.labels();
        if labels.len() != values.len() {
            return Err(MassActionError::Dimension {
                expected: labels.len(),
                got: values.len(),
            });
        }
        Ok(Self(
            labels.into_iter().zip(values.iter().cloned()).collect(),
        ))
    }
}

/// Resolved per-reaction rate constants.
pub fn resolve_rates(
    net: &ReactionNetwork,
    rates: &RateAssignment,
) -> Result<Vec<Q>, MassActionError> {
    let unbound: Vec<String> = net
        .labels()
        .into_iter()
        .filter(|l| rates.get(l).is_none())
        .collect();
    if !unbound.is_empty() {
        return Err(MassActionError::UnboundLabels(unbound));
    }
    net.reactions()
        .iter()
        .map(|r| {
            let (name, v) = match &r.rate {
                RateLabel::Label(l) => (l.clone(), rates.get(l).cloned().expect("bound")),
                RateLabel::Literal(v) => (r.rate.to_string(), v.clone()),
            };
            if v.is_positive() {
                Ok(v)
            } else {
                Err(MassActionError::NonPositiveRate(name))
            }
        })
        .collect()
}

/// Reactant monomials of a network in first-appearance order.
pub fn reactant_monomials(net: &ReactionNetwork) -> Vec<Vec<u32>> {
    net.reactant_complexes().into_iter().map(|c| c.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassActionSystem {
    pub net: ReactionNetwork,
    pub rates: RateAssignment,
    pub kappa: Vec<Q>,
    pub rhs: Vec<SparsePolynomial>,
    monomials: Vec<Vec<u32>>,
    n_exact: QMatrix,
    n_float: Vec<f64>,
}

pub fn build_system(
    net: &ReactionNetwork,
    rates: &RateAssignment,
) -> Result<MassActionSystem, MassActionError> {
    let kappa = resolve_rates(net, rates)?;
    let n = net.n();
    let monomials = reactant_monomials(net);
    let mut n_exact = QMatrix::zeros(n, monomials.len());
    for (r, k) in net.reactions().iter().zip(&kappa) {
        let col = monomials
            .iter()
            .position(|m| *m == r.reactant.0)
            .expect("reactant monomial present");
        for (i, v) in r.vector().into_iter().enumerate() {
            if v != 0 {
                n_exact[(i, col)] += k * q(v);
            }
        }
    }
    let rhs = (0..n)
        .map(|i| {
            SparsePolynomial::from_terms(
                n,
                monomials
                    .iter()
                    .enumerate()
                    .map(|(j, m)| (m.clone(), n_exact[(i, j)].clone())),
            )
        })
        .collect();
    let n_float = (0..n)
        .flat_map(|i| (0..monomials.len()).map(move |j| (i, j)))
        .map(|(i, j)| to_f64(&n_exact[(i, j)]))
        .collect();
    Ok(MassActionSystem {
        net: net.clone(),
        rates: rates.clone(),
        kappa,
        rhs,
        monomials,
        n_exact,
        n_float,
    })
}

impl MassActionSystem {
    pub fn n(&self) -> usize {
        self.net.n()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    /// Row-major f64 copy of N.
    pub fn n_float(&self) -> &[f64] {
        &self.n_float
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let m = monomial_values(&self.monomials, x);
        let j = m.len();
        (0..self.n())
            .map(|i| (0..j).map(|k| self.n_float[i * j + k] * m[k]).sum())
            .collect()
    }

    pub fn eval_q(&self, x: &[Q]) -> Vec<Q> {
        self.rhs.iter().map(|f| f.eval_q(x)).collect()
    }

    /// `‖f(x)‖∞`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.eval(x).iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn is_steady_state(&self, x: &[f64]) -> bool {
        let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        self.residual(x) < STEADY_TOL * scale
    }
}

pub fn monomial_values(monomials: &[Vec<u32>], x: &[f64]) -> Vec<f64> {
    monomials
        .iter()
        .map(|e| {
            e.iter()
                .zip(x)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, &xi)| xi.powi(k as i32))
                .product()
        })
        .collect()
}

/// `f = N · (m_1, …, m_j)ᵀ` with reactant monomials in first-appearance order.
#[derive(Debug, Clone, PartialEq)]
pub struct NMatrixDecomposition {
    pub monomials: Vec<Vec<u32>>,
    pub n: QMatrix,
    pub rank_n: usize,
}

pub fn n_matrix(sys: &MassActionSystem) -> NMatrixDecomposition {
    NMatrixDecomposition {
        monomials: sys.monomials.clone(),
        n: sys.n_exact.clone(),
        rank_n: sys.n_exact.rank(),
    }
}

/// Integer-linear form in rate labels plus a rational constant (from literal rates).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm {
    pub coeffs: BTreeMap<String, i64>,
    pub constant: Q,
}

impl LinearForm {
    pub fn eval(&self, rates: &RateAssignment) -> Q {
        let mut v = self.constant.clone();
        for (l, &c) in &self.coeffs {
            v += rates.get(l).cloned().unwrap_or_else(Q::zero) * q(c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(l, c)| match c {
                1 => l.clone(),
                -1 => format!("-{l}"),
                c => format!("{c}*{l}"),
            })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(crate::rational::format_q(&self.constant));
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicNMatrix {
    pub monomials: Vec<Vec<u32>>,
    pub entries: Vec<Vec<LinearForm>>,
}

impl SymbolicNMatrix {
    pub fn evaluate(&self, rates: &RateAssignment) -> QMatrix {
        QMatrix::from_rows(
            self.entries
                .iter()
                .map(|row| row.iter().map(|e| e.eval(rates)).collect())
                .collect(),
        )
    }
}

pub fn symbolic_n_matrix(net: &ReactionNetwork) -> SymbolicNMatrix {
    let monomials = reactant_monomials(net);
    let mut entries = vec![vec![LinearForm::default(); monomials.len()]; net.n()];
    for r in net.reactions() {
        let col = monomials
            .iter()
            .position(|m| *m == r.reactant.0)
            .expect("present");
        for (i, v) in r.vector().into_iter().enumerate() {
            if v == 0 {
                continue;
            }
            let entry = &mut entries[i][col];
            match &r.rate {
                RateLabel::Label(l) => {
                    let c = entry.coeffs.entry(l.clone()).or_insert(0);
                    *c += v;
                    if *c == 0 {
                        entry.coeffs.remove(l);
                    }
                }
                RateLabel::Literal(k) => entry.constant += k * q(v),
            }
        }
    }
    SymbolicNMatrix { monomials, entries }
}

/// Random positive rational rates (numerators 1..=1000 over 97).
pub fn random_rates(net: &ReactionNetwork, rng: &mut impl Rng) -> RateAssignment {
    RateAssignment(
        net.labels()
            .into_iter()
            .map(|l| (l, crate::rational::q_frac(rng.random_range(1..=1000), 97)))
            .collect(),
    )
}

/// Maximum rank of N over five random rational rate assignments.
pub fn generic_rank(net: &ReactionNetwork, seed: u64) -> usize {
    let sym = symbolic_n_matrix(net);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..5)
        .map(|_| sym.evaluate(&random_rates(net, &mut rng)).rank())
        .max()
        .unwrap_or(0)
}

fn check_point(sys: &MassActionSystem, x: &[f64]) -> Result<(), MassActionError> {
    if x.len() != sys.n() {
        return Err(MassActionError::Dimension {
            expected: sys.n(),
            got: x.len(),
        });
    }
    if !x.iter().all(|&v| v > 0.0 && v.is_finite()) {
        return Err(MassActionError::NonPositivePoint);
    }
    Ok(())
}

/// Jacobian of the right-hand side at `x` in monomial form: `J = N · diag(m) · E · diag(1/x)`.
pub fn jacobian_unchecked(sys: &MassActionSystem, x: &[f64]) -> DMatrix<f64> {
    jacobian_terms(sys, x).0
}

/// The Jacobian together with the same sum taken over absolute values of its terms.
fn jacobian_terms(sys: &MassActionSystem, x: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = sys.n();
    let j = sys.monomials.len();
    let mut out = DMatrix::zeros(n, n);
    let mut gross = DMatrix::zeros(n, n);
    for (k, e) in sys.monomials.iter().enumerate() {
        for l in 0..n {
            if e[l] == 0 {
                continue;
            }
            // d/dx_l of x^e, computed without dividing by x_l.
            let mut d = e[l] as f64;
            for (t, (&et, &xt)) in e.iter().zip(x).enumerate() {
                let p = if t == l { et - 1 } else { et };
                if p > 0 {
                    d *= xt.powi(p as i32);
                }
            }
            for i in 0..n {
                let a = sys.n_float[i * j + k];
                if a != 0.0 {
                    out[(i, l)] += a * d;
                    gross[(i, l)] += (a * d).abs();
                }
            }
        }
    }
    (out, gross)
}

pub fn jacobian(sys: &MassActionSystem, x: &[f64]) -> Result<DMatrix<f64>, MassActionError> {
    check_point(sys, x)?;
    Ok(jacobian_unchecked(sys, x))
}

/// Exact Jacobian at a rational point.
pub fn jacobian_q(sys: &MassActionSystem, x: &[Q]) -> QMatrix {
    let n = sys.n();
    let mut out = QMatrix::zeros(n, n);
    for (i, f) in sys.rhs.iter().enumerate() {
        for l in 0..n {
            out[(i, l)] = f.derivative(l).eval_q(x);
        }
    }
    out
}

/// Columns form a basis of the stoichiometric subspace.
pub fn stoichiometric_basis_matrix(net: &ReactionNetwork) -> QMatrix {
    QMatrix::from_rows(stoichiometric_basis(net)).transpose()
}

/// Rank of `J(x)·B` against `dim S`, without checking that `x` is a steady state.
pub fn nondegenerate_unchecked(sys: &MassActionSystem, basis: &DMatrix<f64>, x: &[f64]) -> bool {
    let d = basis.ncols();
    if d == 0 {
        return true;
    }
    let (jac, gross) = jacobian_terms(sys, x);
    let jb = jac * basis;
    // Singular values are measured against the size of the individual terms, so a Jacobian
    // that is small only through cancellation counts as singular.
    let scale = (gross * basis.abs()).amax();
    if scale <= RANK_ABS_FLOOR {
        return false;
    }
    singular_values(&jb)
        .iter()
        .filter(|&&v| v > RANK_REL_TOL * scale)
        .count()
        == d
}

pub fn is_nondegenerate(sys: &MassActionSystem, x: &[f64]) -> Result<bool, MassActionError> {
    check_point(sys, x)?;
    if !sys.is_steady_state(x) {
        return Err(MassActionError::NotSteadyState(sys.residual(x)));
    }
    let basis = stoichiometric_basis_matrix(&sys.net).to_f64();
    Ok(nondegenerate_unchecked(sys, &basis, x))
}

/// Exact rank of `J(x)·B` at a rational point.
pub fn restricted_jacobian_rank_q(sys: &MassActionSystem, x: &[Q]) -> usize {
    jacobian_q(sys, x)
        .mul(&stoichiometric_basis_matrix(&sys.net))
        .rank()
}

/// f_i with every other variable fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateRestriction {
    /// `(degree, coefficient)` pairs in increasing degree, zero coefficients omitted.
    pub coeffs: Vec<(u32, Q)>,
    pub sign_changes: usize,
    pub is_zero: bool,
}

/// Restricts `rhs[i]` to `x_i` with the other coordinates fixed to `values` (length n−1,
/// in species order with coordinate `i` omitted).
pub fn restrict_univariate(
    sys: &MassActionSystem,
    i: usize,
    values: &[Q],
) -> Result<UnivariateRestriction, MassActionError> {
    let n = sys.n();
    if i >= n {
        return Err(MassActionError::SpeciesIndex(i));
    }
    if values.len() + 1 != n {
        return Err(MassActionError::Dimension {
            expected: n - 1,
            got: values.len(),
        });
    }
    if !values.iter().all(Signed::is_positive) {
        return Err(MassActionError::NonPositivePoint);
    }
    let mut full = values.to_vec();
    full.insert(i, Q::one());
    let coeffs = sys.rhs[i].restrict_to(i, &full);
    Ok(UnivariateRestriction {
        sign_changes: sign_changes(coeffs.iter().map(|(_, c)| c)),
        is_zero: coeffs.is_empty(),
        coeffs,
    })
}

/// Every conservation vector annihilates the right-hand side as a polynomial identity.
pub fn conservation_annihilates(sys: &MassActionSystem) -> bool {
    conservation_basis(&sys.net).iter().all(|w| {
        let mut acc = SparsePolynomial::zero(sys.n());
        for (wi, f) in w.iter().zip(&sys.rhs) {
            acc = &acc + &f.scale(wi);
        }
        acc.is_zero()
    })
}

/// Some right-hand side is a nonzero polynomial whose coefficients all share one sign.
pub fn strictly_signed_species(sys: &MassActionSystem) -> Option<usize> {
    sys.rhs.iter().position(|f| {
        !f.is_zero()
            && (f.terms().all(|(_, c)| c.is_positive()) || f.terms().all(|(_, c)| c.is_negative()))
    })
}
