//! Orderly enumeration of small networks up to species relabeling.
//!
//! Candidate reactions are all ordered pairs of distinct complexes with bounded
//! molecularity. A reaction subset is yielded only when its sorted reaction list is the
//! lexicographic minimum over all species permutations, so each isomorphism class appears
//! exactly once without a seen-set.

use itertools::Itertools;
use serde::Serialize;

use crate::error::AtlasError;
use crate::network::ReactionNetwork;
use crate::structural::is_full_dimensional;

/// Upper bound on raw candidate subsets divided by the permutation count.
pub const MAX_CANONICAL_ESTIMATE: f64 = 1e7;

pub type Pair = (Vec<u32>, Vec<u32>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumSpec {
    pub n_species: usize,
    pub max_reactions: usize,
    pub require_bimolecular: bool,
    pub require_reversible: bool,
    pub require_full_dimensional: Option<bool>,
}

impl EnumSpec {
    pub fn bimolecular(n_species: usize, max_reactions: usize) -> Self {
        Self {
            n_species,
            max_reactions,
            require_bimolecular: true,
            require_reversible: false,
            require_full_dimensional: None,
        }
    }

    pub fn reversible(mut self) -> Self {
        self.require_reversible = true;
        self
    }

    pub fn full_dimensional(mut self, v: bool) -> Self {
        self.require_full_dimensional = Some(v);
        self
    }

    /// Largest molecularity of a candidate complex.
    pub fn max_molecularity(&self) -> u32 {
        if self.require_bimolecular {
            2
        } else {
            3
        }
    }
}

/// Complexes over `n` species with molecularity at most `max`, in lexicographic order.
pub fn complexes_up_to(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out.sort();
    out
}

fn binomial(m: usize, r: usize) -> f64 {
    if r > m {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Candidate units: single reactions, or reversible pairs (as two reactions).
fn units(spec: &EnumSpec) -> Vec<Vec<Pair>> {
    let cx = complexes_up_to(spec.n_species, spec.max_molecularity());
    let mut out = Vec::new();
    for (a, b) in (0..cx.len()).tuple_combinations() {
        let fwd = (cx[a].clone(), cx[b].clone());
        let rev = (cx[b].clone(), cx[a].clone());
        if spec.require_reversible {
            out.push(vec![fwd, rev]);
        } else {
            out.push(vec![fwd]);
            out.push(vec![rev]);
        }
    }
    out.sort();
    out
}

fn check_bounds(spec: &EnumSpec) -> Result<(), AtlasError> {
    if spec.n_species == 0 || spec.n_species > 3 {
        return Err(AtlasError::OutOfBounds(format!(
            "n_species must be 1..=3, got {}",
            spec.n_species
        )));
    }
    if spec.max_reactions == 0 {
        return Err(AtlasError::OutOfBounds(
            "max_reactions must be positive".into(),
        ));
    }
    let m = units(spec).len();
    let per = if spec.require_reversible { 2 } else { 1 };
    let raw: f64 = (1..=spec.max_reactions / per).map(|r| binomial(m, r)).sum();
    let perms: f64 = (1..=spec.n_species).product::<usize>() as f64;
    if raw / perms > MAX_CANONICAL_ESTIMATE {
        return Err(AtlasError::OutOfBounds(format!(
            "about {:.1e} canonical networks exceeds the limit of {:.0e}",
            raw / perms,
            MAX_CANONICAL_ESTIMATE
        )));
    }
    Ok(())
}

fn permute(c: &[u32], perm: &[usize]) -> Vec<u32> {
    let mut v = vec![0; c.len()];
    for (i, &x) in c.iter().enumerate() {
        v[perm[i]] = x;
    }
    v
}

/// Sorted reaction list that is lexicographically least over all species relabelings.
pub fn canonical_pairs(pairs: &[Pair], n: usize) -> Vec<Pair> {
    (0..n)
        .permutations(n)
        .map(|p| {
            let mut v: Vec<Pair> = pairs
                .iter()
                .map(|(a, b)| (permute(a, &p), permute(b, &p)))
                .collect();
            v.sort();
            v
        })
        .min()
        .expect("at least the identity permutation")
}

/// Canonical form of a network's reaction set (rates ignored).
pub fn canonical_form(net: &ReactionNetwork) -> Vec<Pair> {
    canonical_pairs(&net.pairs(), net.n())
}

/// Network with species `X1..Xn`, auto labels, and reactions in canonical order.
pub fn canonical_network(net: &ReactionNetwork) -> ReactionNetwork {
    ReactionNetwork::from_pairs(net.n(), &canonical_form(net))
        .expect("relabeling preserves validity")
}

fn uses_every_species(pairs: &[Pair], n: usize) -> bool {
    (0..n).all(|i| pairs.iter().any(|(a, b)| a[i] > 0 || b[i] > 0))
}

fn is_canonical(sorted: &[Pair], n: usize) -> bool {
    let mut buf: Vec<Pair> = Vec::with_capacity(sorted.len());
    for p in (0..n).permutations(n).skip(1) {
        buf.clear();
        buf.extend(sorted.iter().map(|(a, b)| (permute(a, &p), permute(b, &p))));
        buf.sort();
        if buf.as_slice() < sorted {
            return false;
        }
    }
    true
}

/// Every network matching `spec`, one per isomorphism class, in a deterministic order
/// (by reaction count, then lexicographically).
pub fn enumerate_networks(
    spec: EnumSpec,
) -> Result<impl Iterator<Item = ReactionNetwork>, AtlasError> {
    check_bounds(&spec)?;
    let units = units(&spec);
    let n = spec.n_species;
    let per = if spec.require_reversible { 2 } else { 1 };
    let max_units = spec.max_reactions / per;
    let iter = (1..=max_units.min(units.len()))
        .flat_map(move |r| {
            let units = units.clone();
            (0..units.len()).combinations(r).map(move |idx| {
                idx.iter()
                    .flat_map(|&i| units[i].clone())
                    .collect::<Vec<Pair>>()
            })
        })
        .filter_map(move |mut pairs| {
            pairs.sort();
            if !uses_every_species(&pairs, n) || !is_canonical(&pairs, n) {
                return None;
            }
            let net = ReactionNetwork::from_pairs(n, &pairs).ok()?;
            match spec.require_full_dimensional {
                Some(want) if is_full_dimensional(&net) != want => None,
                _ => Some(net),
            }
        });
    Ok(iter)
}
