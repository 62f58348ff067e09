//! Polynomial systems that are (or are not) mass-action systems.
//!
//! A polynomial vector field is the mass-action ODE of some network exactly when every
//! negative term of `f_i` is divisible by `x_i`. The construction below is the standard
//! one: each term `c * x^a` of `f_i` becomes the reaction `a -> a ± e_i` with rate `|c|`.

use num_traits::Signed;

use crate::error::RealizeError;
use crate::network::{default_species, Complex, RateLabel, Reaction, ReactionNetwork};
use crate::poly::{format_monomial, SparsePolynomial};

/// True iff every negatively signed term of `polys[i]` contains `x_i`.
pub fn check_mass_action_form(polys: &[SparsePolynomial]) -> bool {
    first_violation(polys).is_none()
}

fn first_violation(polys: &[SparsePolynomial]) -> Option<(usize, String)> {
    polys.iter().enumerate().find_map(|(i, f)| {
        f.terms()
            .find(|(e, c)| c.is_negative() && e[i] == 0)
            .map(|(e, _)| (i, format_monomial(e)))
    })
}

/// Network over `X1..Xn` whose mass-action ODEs equal `polys` term by term.
pub fn realize_network(polys: &[SparsePolynomial]) -> Result<ReactionNetwork, RealizeError> {
    if polys.is_empty() {
        return Err(RealizeError::NoPolynomials);
    }
    let n = polys.len();
    if let Some((species, monomial)) = first_violation(polys) {
        return Err(RealizeError::Infeasible {
            species: species + 1,
            monomial,
        });
    }
    let mut reactions = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        assert_eq!(
            f.nvars(),
            n,
            "polynomial arity must equal the number of polynomials"
        );
        for (e, c) in f.terms() {
            let mut product = e.clone();
            if c.is_positive() {
                product[i] += 1;
            } else {
                product[i] -= 1;
            }
            reactions.push(Reaction {
                reactant: Complex(e.clone()),
                product: Complex(product),
                rate: RateLabel::Literal(c.abs()),
            });
        }
    }
    Ok(ReactionNetwork::new(default_species(n), reactions)?)
}
