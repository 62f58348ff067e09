//! Parametric network families with known steady states.
//!
//! Rate labels are `k1, k2, …` and follow the family's rate-constant numbering, which is
//! also the reaction order.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::SteadyError;
use crate::network::ReactionNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyId {
    /// Full-dimensional, `n+2` reactants, ACR in `X1`.
    #[serde(rename = "Gn_fulldim")]
    GnFulldim,
    /// One conservation law `x1+x2+x3 = T`, `n` reactants, ACR in `X3..Xn`.
    #[serde(rename = "Gn_conserved")]
    GnConserved,
    /// Dimension `n-k`, `n-k+1` reactants, ACR in `X3..X_{n-k+1}`.
    #[serde(rename = "Gnk")]
    Gnk,
}

impl FamilyId {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::GnFulldim => "Gn_fulldim",
            FamilyId::GnConserved => "Gn_conserved",
            FamilyId::Gnk => "Gnk",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = SteadyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Gn_fulldim" => Ok(FamilyId::GnFulldim),
            "Gn_conserved" => Ok(FamilyId::GnConserved),
            "Gnk" => Ok(FamilyId::Gnk),
            other => Err(SteadyError::UnknownFamily(other.to_string())),
        }
    }
}

/// Validates `(n, k)` and returns the effective `k` (1 for `Gn_conserved`, 0 for `Gn_fulldim`).
pub fn check_params(id: FamilyId, n: usize, k: Option<usize>) -> Result<usize, SteadyError> {
    let range = |msg: String| Err(SteadyError::FamilyRange(msg));
    match id {
        FamilyId::GnFulldim if n < 2 => range(format!("Gn_fulldim needs n >= 2, got {n}")),
        FamilyId::GnFulldim => Ok(0),
        FamilyId::GnConserved if n < 3 => range(format!("Gn_conserved needs n >= 3, got {n}")),
        FamilyId::GnConserved => Ok(1),
        FamilyId::Gnk => {
            let Some(k) = k else {
                return range("Gnk needs k".to_string());
            };
            if n < 4 || k < 2 || k + 2 > n {
                return range(format!(
                    "Gnk needs n >= 4 and 2 <= k <= n-2, got n={n}, k={k}"
                ));
            }
            Ok(k)
        }
    }
}

/// Indices (0-based) of the species pinned by the family's ACR claim.
pub fn acr_species(id: FamilyId, n: usize, k: usize) -> Vec<usize> {
    match id {
        FamilyId::GnFulldim => vec![0],
        FamilyId::GnConserved | FamilyId::Gnk => (2..=n - k).collect(),
    }
}

fn unit_sum(n: usize, idx: impl IntoIterator<Item = usize>, c: u32) -> Vec<u32> {
    let mut v = vec![0; n];
    for i in idx {
        v[i] += c;
    }
    v
}

pub fn family(id: FamilyId, n: usize, k: Option<usize>) -> Result<ReactionNetwork, SteadyError> {
    let k = check_params(id, n, k)?;
    let e = |i: usize, c: u32| unit_sum(n, [i], c);
    let zero = vec![0; n];
    let pairs = match id {
        FamilyId::GnFulldim => {
            let mut product = unit_sum(n, 2..n, 1);
            product[1] += 2;
            let mut top = e(1, 2);
            top[0] += 1;
            let mut pairs = vec![
                (unit_sum(n, [0, 1], 1), product),
                (e(1, 1), zero.clone()),
                (e(1, 2), top),
                (zero.clone(), e(0, 1)),
            ];
            pairs.extend((2..n).map(|j| (e(j, 1), zero.clone())));
            pairs
        }
        FamilyId::GnConserved | FamilyId::Gnk => {
            // Catalysts X_{n+2-k}..X_n (none when k = 1); degraded species X4..X_{n+1-k}.
            let catalysts = (n + 1 - k)..n;
            let reactant = unit_sum(n, [0, 1].into_iter().chain(catalysts), 1);
            let mut product = unit_sum(n, 3..n, 1);
            product[2] += 2;
            let mut pairs = vec![(reactant, product), (e(2, 1), e(0, 1)), (e(2, 2), e(1, 2))];
            pairs.extend((3..n + 1 - k).map(|j| (e(j, 1), zero.clone())));
            pairs
        }
    };
    Ok(ReactionNetwork::from_pairs(n, &pairs)?)
}
