//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_q, to_f64, Q};

/// Polynomial in `nvars` variables `x1..xn`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponent: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> Q {
        self.terms.get(exponent).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, exponent: Vec<u32>, c: Q) {
        assert_eq!(exponent.len(), self.nvars, "exponent arity");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval_q(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for (xi, &ei) in x.iter().zip(e) {
                    if ei > 0 {
                        t *= num_traits::pow(xi.clone(), ei as usize);
                    }
                }
                t
            })
            .sum()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = to_f64(c);
                for (xi, &ei) in x.iter().zip(e) {
                    if ei > 0 {
                        t *= xi.powi(ei as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * Q::from_integer(e[i].into()));
        }
        out
    }

    /// Substitutes `x_{i+1} = value`; the result keeps the same arity with exponent `i` zero.
    pub fn substitute(&self, i: usize, value: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut d = e.clone();
            d[i] = 0;
            out.add_term(d, c * num_traits::pow(value.clone(), e[i] as usize));
        }
        out
    }

    /// Fixes every variable except `x_{i+1}`; returns `(degree, coefficient)` pairs by degree.
    pub fn restrict_to(&self, i: usize, values: &[Q]) -> Vec<(u32, Q)> {
        assert_eq!(values.len(), self.nvars);
        let mut by_degree: BTreeMap<u32, Q> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, (&ej, v)) in e.iter().zip(values).enumerate() {
                if j != i && ej > 0 {
                    t *= num_traits::pow(v.clone(), ej as usize);
                }
            }
            *by_degree.entry(e[i]).or_insert_with(Q::zero) += t;
        }
        by_degree
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Terms in descending graded-lex order (higher total degree first, then lex on exponents).
    pub fn graded_lex_terms(&self) -> Vec<(&Vec<u32>, &Q)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }
}

impl std::ops::Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: Self) -> SparsePolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: Self) -> SparsePolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

/// Number of sign changes in a coefficient sequence, zeros skipped.
pub fn sign_changes<'a>(coeffs: impl IntoIterator<Item = &'a Q>) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let positive = c.is_positive();
        if let Some(prev) = last {
            if prev != positive {
                changes += 1;
            }
        }
        last = Some(positive);
    }
    changes
}

pub fn format_monomial(exponent: &[u32]) -> String {
    let parts: Vec<String> = exponent
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.graded_lex_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let constant = e.iter().all(|&v| v == 0);
            if constant {
                write!(f, "{}", format_q(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{}", format_monomial(e))?;
            } else {
                write!(f, "{}*{}", format_q(&magnitude), format_monomial(e))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), q(*c))))
    }

    #[test]
    fn display_is_graded_lex() {
        let f = p(3, &[(&[1, 1, 0], 2), (&[0, 0, 1], -1), (&[0, 0, 2], -2)]);
        assert_eq!(f.to_string(), "2*x1*x2 - 2*x3^2 - x3");
        assert_eq!(SparsePolynomial::zero(2).to_string(), "0");
        assert_eq!(p(1, &[(&[0], -1)]).to_string(), "-1");
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = p(2, &[(&[1, 0], 1)]);
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        let f = p(2, &[(&[0, 0], 1), (&[1, 1], -1)]);
        let dx = f.derivative(0);
        assert_eq!(dx, p(2, &[(&[0, 1], -1)]));
        assert_eq!(f.eval_q(&[q(1), q(1)]), q(0));
        assert!((f.eval_f64(&[2.0, 0.25]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn restriction_and_sign_changes() {
        let f = p(2, &[(&[0, 0], 1), (&[1, 1], -1)]);
        let g = f.restrict_to(0, &[q(0), q(2)]);
        assert_eq!(g, vec![(0, q(1)), (1, q(-2))]);
        assert_eq!(sign_changes(g.iter().map(|(_, c)| c)), 1);
    }

    #[test]
    fn substitution_detects_linear_factor() {
        // x1*(x1 - 1/2) vanishes identically at x1 = 1/2.
        let f = SparsePolynomial::from_terms(2, [(vec![2, 1], q(1)), (vec![1, 1], q_frac(-1, 2))]);
        assert!(f.substitute(0, &q_frac(1, 2)).is_zero());
        assert!(!f.substitute(0, &q(1)).is_zero());
    }
}
