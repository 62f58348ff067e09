//! Rate assignments under which a network provably has no positive steady state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::binomial::{
    binomial_reduce, log_linear_solve, no_positive_certificate, LogLinearOutcome,
};
use super::sample_rates;
use crate::massaction::{
    build_system, n_matrix, strictly_signed_species, MassActionSystem, RateAssignment,
};
use crate::network::ReactionNetwork;

/// Why a system has no positive steady state, if one of the exact tests proves it.
pub fn emptiness_certificate(sys: &MassActionSystem) -> Option<String> {
    if let Some(i) = strictly_signed_species(sys) {
        return Some(format!("d{}/dt has constant sign", sys.net.species()[i]));
    }
    if let Some(reason) = no_positive_certificate(&n_matrix(sys)) {
        return Some(reason);
    }
    if let Ok(Some(red)) = binomial_reduce(sys) {
        if log_linear_solve(&red) == LogLinearOutcome::Empty {
            return Some("binomial system has no positive solution".to_string());
        }
    }
    None
}

/// First sampled assignment (log-uniform on `[1e-2, 1e2]`) with an emptiness certificate.
pub fn no_pss_witness_search(
    net: &ReactionNetwork,
    trials: usize,
    seed: u64,
) -> Option<RateAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).find_map(|_| {
        let rates = sample_rates(net, &mut rng);
        let sys = build_system(net, &rates).ok()?;
        emptiness_certificate(&sys).map(|_| rates)
    })
}
