//! Reaction networks: complexes, reactions, rate labels and derived predicates.

use std::collections::HashSet;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::NetworkError;
use crate::rational::{format_q, Q};

/// Non-negative stoichiometric coefficients, one per species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Complex(pub Vec<u32>);

impl Complex {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize, count: u32) -> Self {
        let mut c = vec![0; n];
        c[i] = count;
        Self(c)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn molecularity(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_bimolecular(&self) -> bool {
        self.molecularity() <= 2
    }

    /// Human form using the given species names, e.g. `A+2B` or `0`.
    pub fn display_with(&self, species: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| {
                if c == 1 {
                    species[i].clone()
                } else {
                    format!("{c}{}", species[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// A symbolic rate name or a fixed positive rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RateLabel {
    Label(String),
    Literal(Q),
}

impl fmt::Display for RateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateLabel::Label(s) => write!(f, "{s}"),
            RateLabel::Literal(q) => write!(f, "{}", format_q(q)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    pub reactant: Complex,
    pub product: Complex,
    pub rate: RateLabel,
}

impl Reaction {
    pub fn vector(&self) -> Vec<i64> {
        self.reactant
            .0
            .iter()
            .zip(&self.product.0)
            .map(|(&a, &b)| b as i64 - a as i64)
            .collect()
    }

    /// Species `k` has equal coefficients on both sides.
    pub fn is_catalyst_only(&self, k: usize) -> bool {
        self.reactant.0[k] == self.product.0[k]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionNetwork {
    species: Vec<String>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn new(species: Vec<String>, reactions: Vec<Reaction>) -> Result<Self, NetworkError> {
        let n = species.len();
        if reactions.is_empty() {
            return Err(NetworkError::Empty);
        }
        let mut seen = HashSet::new();
        for r in &reactions {
            for c in [&r.reactant, &r.product] {
                if c.0.len() != n {
                    return Err(NetworkError::Arity {
                        expected: n,
                        got: c.0.len(),
                    });
                }
            }
            let shown = format!(
                "{} -> {}",
                r.reactant.display_with(&species),
                r.product.display_with(&species)
            );
            if r.reactant == r.product {
                return Err(NetworkError::TrivialReaction(shown));
            }
            if let RateLabel::Literal(v) = &r.rate {
                if !v.is_positive() {
                    return Err(NetworkError::NonPositiveLiteral(format_q(v)));
                }
            }
            if !seen.insert((r.reactant.clone(), r.product.clone())) {
                return Err(NetworkError::DuplicateReaction(shown));
            }
        }
        for (i, name) in species.iter().enumerate() {
            let used = reactions
                .iter()
                .any(|r| r.reactant.0[i] > 0 || r.product.0[i] > 0);
            if !used {
                return Err(NetworkError::UnusedSpecies(name.clone()));
            }
        }
        Ok(Self { species, reactions })
    }

    /// Builds a network over species `X1..Xn` with labels `k1..kr`.
    pub fn from_pairs(n: usize, pairs: &[(Vec<u32>, Vec<u32>)]) -> Result<Self, NetworkError> {
        Self::from_named_pairs(default_species(n), pairs)
    }

    pub fn from_named_pairs(
        species: Vec<String>,
        pairs: &[(Vec<u32>, Vec<u32>)],
    ) -> Result<Self, NetworkError> {
        let reactions = pairs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| Reaction {
                reactant: Complex(a.clone()),
                product: Complex(b.clone()),
                rate: RateLabel::Label(auto_label(i)),
            })
            .collect();
        Self::new(species, reactions)
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn n(&self) -> usize {
        self.species.len()
    }

    pub fn r(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    /// Distinct complexes in first-appearance order (reactant before product).
    pub fn complexes(&self) -> Vec<Complex> {
        let mut out: Vec<Complex> = Vec::new();
        for r in &self.reactions {
            for c in [&r.reactant, &r.product] {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    /// Distinct reactant complexes in first-appearance order.
    pub fn reactant_complexes(&self) -> Vec<Complex> {
        let mut out: Vec<Complex> = Vec::new();
        for r in &self.reactions {
            if !out.contains(&r.reactant) {
                out.push(r.reactant.clone());
            }
        }
        out
    }

    pub fn is_bimolecular(&self) -> bool {
        self.reactions
            .iter()
            .all(|r| r.reactant.is_bimolecular() && r.product.is_bimolecular())
    }

    /// Every reaction has its reverse in the network.
    pub fn is_reversible(&self) -> bool {
        self.reactions.iter().all(|r| {
            self.reactions
                .iter()
                .any(|s| s.reactant == r.product && s.product == r.reactant)
        })
    }

    pub fn is_catalyst_only(&self, species: usize, reaction: usize) -> bool {
        self.reactions[reaction].is_catalyst_only(species)
    }

    /// Symbolic labels in first-appearance order, deduplicated.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.reactions {
            if let RateLabel::Label(s) = &r.rate {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Same reactions with every rate replaced by `k{i}` (1-based reaction index).
    pub fn with_auto_labels(&self) -> Self {
        let reactions = self
            .reactions
            .iter()
            .enumerate()
            .map(|(i, r)| Reaction {
                rate: RateLabel::Label(auto_label(i)),
                ..r.clone()
            })
            .collect();
        Self {
            species: self.species.clone(),
            reactions,
        }
    }

    /// Structure only: (reactant, product) exponent pairs in reaction order.
    pub fn pairs(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        self.reactions
            .iter()
            .map(|r| (r.reactant.0.clone(), r.product.0.clone()))
            .collect()
    }

    /// Sub-network on the given reaction indices; species unused by the subset are dropped.
    pub fn sub_network(&self, indices: &[usize]) -> Result<Self, NetworkError> {
        let chosen: Vec<&Reaction> = indices.iter().map(|&i| &self.reactions[i]).collect();
        let keep: Vec<usize> = (0..self.n())
            .filter(|&k| {
                chosen
                    .iter()
                    .any(|r| r.reactant.0[k] > 0 || r.product.0[k] > 0)
            })
            .collect();
        let project = |c: &Complex| Complex(keep.iter().map(|&k| c.0[k]).collect());
        let reactions = chosen
            .iter()
            .map(|r| Reaction {
                reactant: project(&r.reactant),
                product: project(&r.product),
                rate: r.rate.clone(),
            })
            .collect();
        Self::new(
            keep.iter().map(|&k| self.species[k].clone()).collect(),
            reactions,
        )
    }
}

pub fn default_species(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

/// Default rate label for the reaction at 0-based position `i`.
pub fn auto_label(i: usize) -> String {
    format!("k{}", i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min3() -> ReactionNetwork {
        ReactionNetwork::from_pairs(
            3,
            &[
                (vec![1, 1, 0], vec![0, 0, 2]),
                (vec![0, 0, 1], vec![1, 0, 0]),
                (vec![0, 0, 2], vec![0, 2, 0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn complex_counts() {
        let net = min3();
        assert_eq!(net.complexes().len(), 5);
        assert_eq!(net.reactant_complexes().len(), 3);
        assert!(net.is_bimolecular());
        assert!(!net.is_reversible());
        assert_eq!(net.labels(), vec!["k1", "k2", "k3"]);
    }

    #[test]
    fn rejects_invalid_networks() {
        let trivial = ReactionNetwork::from_pairs(1, &[(vec![1], vec![1])]);
        assert!(matches!(trivial, Err(NetworkError::TrivialReaction(_))));
        let dup = ReactionNetwork::from_pairs(1, &[(vec![0], vec![1]), (vec![0], vec![1])]);
        assert!(matches!(dup, Err(NetworkError::DuplicateReaction(_))));
        let unused = ReactionNetwork::from_pairs(2, &[(vec![0, 0], vec![1, 0])]);
        assert!(matches!(unused, Err(NetworkError::UnusedSpecies(_))));
        assert!(matches!(
            ReactionNetwork::from_pairs(1, &[]),
            Err(NetworkError::Empty)
        ));
    }

    #[test]
    fn catalyst_only_matches_coordinates() {
        let net = ReactionNetwork::from_pairs(2, &[(vec![1, 1], vec![0, 1])]).unwrap();
        assert!(net.is_catalyst_only(1, 0));
        assert!(!net.is_catalyst_only(0, 0));
    }

    #[test]
    fn sub_network_drops_unused_species() {
        let net = min3();
        let sub = net.sub_network(&[1]).unwrap();
        assert_eq!(sub.species(), &["X1".to_string(), "X3".to_string()]);
    }
}
