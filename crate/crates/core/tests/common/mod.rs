//! Random networks and systems shared by the integration suites.
#![allow(dead_code)]

use crnscope::atlas::complexes_up_to;
use crnscope::massaction::{build_system, MassActionSystem};
use crnscope::network::ReactionNetwork;
use crnscope::steady::sample_rates;
use rand::seq::IndexedRandom;
use rand::Rng;

/// Up to `max_reactions` distinct reactions between complexes of molecularity at most
/// `max_mol`; `None` if the draw leaves a species unused.
pub fn random_network(
    rng: &mut impl Rng,
    n: usize,
    max_reactions: usize,
    max_mol: u32,
) -> Option<ReactionNetwork> {
    let complexes = complexes_up_to(n, max_mol);
    let r = rng.random_range(1..=max_reactions);
    let mut pairs: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    while pairs.len() < r {
        let a = complexes.choose(rng).unwrap().clone();
        let b = complexes.choose(rng).unwrap().clone();
        if a != b && !pairs.contains(&(a.clone(), b.clone())) {
            pairs.push((a, b));
        }
    }
    ReactionNetwork::from_pairs(n, &pairs).ok()
}

pub fn random_system(
    rng: &mut impl Rng,
    n: usize,
    max_reactions: usize,
    max_mol: u32,
) -> Option<MassActionSystem> {
    let net = random_network(rng, n, max_reactions, max_mol)?;
    let rates = sample_rates(&net, rng);
    build_system(&net, &rates).ok()
}

/// A network whose reactant set is exactly `n+1` distinct complexes, each with one or two
/// outgoing reactions.
pub fn random_n_plus_one_reactant_network(rng: &mut impl Rng, n: usize) -> Option<ReactionNetwork> {
    let complexes = complexes_up_to(n, 2);
    let mut reactants: Vec<Vec<u32>> = Vec::new();
    while reactants.len() < n + 1 {
        let c = complexes.choose(rng).unwrap().clone();
        if !reactants.contains(&c) {
            reactants.push(c);
        }
    }
    let mut pairs = Vec::new();
    for a in &reactants {
        let k = rng.random_range(1..=2);
        let mut outs: Vec<Vec<u32>> = Vec::new();
        while outs.len() < k {
            let b = complexes.choose(rng).unwrap().clone();
            if &b != a && !outs.contains(&b) {
                outs.push(b);
            }
        }
        pairs.extend(outs.into_iter().map(|b| (a.clone(), b)));
    }
    ReactionNetwork::from_pairs(n, &pairs).ok()
}

/// A full-dimensional system with `n+1` reactants where the binomial route applies and the
/// exponent-difference matrix has full rank.
pub fn oracle_case(
    rng: &mut impl Rng,
    n: usize,
) -> Option<(MassActionSystem, crnscope::steady::BinomialReduction)> {
    let net = random_n_plus_one_reactant_network(rng, n)?;
    if !crnscope::structural::is_full_dimensional(&net) {
        return None;
    }
    let rates = sample_rates(&net, rng);
    let sys = build_system(&net, &rates).ok()?;
    let red = crnscope::steady::binomial_reduce(&sys).ok()??;
    (red.rank_a == n).then_some((sys, red))
}
