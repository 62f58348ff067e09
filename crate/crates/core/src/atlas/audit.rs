//! Counterexample searches for the coexistence and multistationarity bounds.
//!
//! Each audit enumerates networks satisfying a theorem's hypotheses, samples rate
//! constants (the all-ones assignment first), and checks the theorem's conclusion with
//! exact certificates where they exist and multistart Newton otherwise. A known violator
//! from outside the hypotheses is run through the same check as a positive control.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::enumerate::{enumerate_networks, EnumSpec};
use crate::acr::{classify_4reactant_3species, verdict_from_reports, AcrStatus, FourReactantClass};
use crate::dsl::{format_network, parse_network};
use crate::error::AtlasError;
use crate::families::{family, FamilyId};
use crate::linalg::QMatrix;
use crate::massaction::{build_system, generic_rank, n_matrix, MassActionSystem, RateAssignment};
use crate::network::ReactionNetwork;
use crate::par::{map_ordered, Exec};
use crate::rational::{format_q, parse_q, Q};
use crate::steady::{
    anchors_f64, binomial_reduce, default_anchors, emptiness_certificate, log_linear_solve,
    pinned_coordinates, sample_rates, ClassContext, LogLinearOutcome, SolveOptions,
    SteadyStateReport,
};
use crate::structural::{analyze_structure, dim_s};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::A1,
        TheoremId::A2,
        TheoremId::A3,
        TheoremId::A4,
        TheoremId::A5,
        TheoremId::A6,
        TheoremId::A7,
        TheoremId::A8,
    ];

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::A1 => "bimolecular networks with at most 2 species never combine ACR with nondegenerate multistationarity",
            TheoremId::A2 => "3-species bimolecular networks with at most 2 reactants or at most 4 complexes never combine ACR with nondegenerate multistationarity",
            TheoremId::A3 => "one-dimensional bimolecular networks are never nondegenerately multistationary",
            TheoremId::A4 => "bimolecular networks made of one or two reversible pairs are never multistationary",
            TheoremId::A5 => "reversible one-species bimolecular networks have exactly one positive steady state",
            TheoremId::A6 => "full-dimensional bimolecular networks with at most n+1 reactants never combine ACR with nondegenerate multistationarity",
            TheoremId::A7 => "full-dimensional 3-species networks with 4 reactants, rank-3 N, ACR in Z and multistationarity use one of two reactant sets",
            TheoremId::A8 => "networks of dimension n-k with at most n-k reactants never combine ACR with nondegenerate multistationarity",
        }
    }

    fn claim(self) -> Claim {
        match self {
            TheoremId::A1 | TheoremId::A2 | TheoremId::A6 | TheoremId::A8 => Claim::NoCoexistence,
            TheoremId::A3 => Claim::NoNondegenerateMss,
            TheoremId::A4 => Claim::NoMss,
            TheoremId::A5 => Claim::UniqueState,
            TheoremId::A7 => Claim::ListedReactantSets { require_rank: true },
        }
    }

    /// Extra hypotheses beyond the enumeration spec.
    fn admits(self, net: &ReactionNetwork) -> bool {
        let s = analyze_structure(net);
        match self {
            TheoremId::A1 | TheoremId::A4 | TheoremId::A5 => true,
            TheoremId::A2 => s.num_reactants <= 2 || s.m <= 4,
            TheoremId::A3 => s.dim_s == 1,
            TheoremId::A6 => s.num_reactants <= net.n() + 1,
            TheoremId::A7 => s.num_reactants == 4 && net.n() == 3,
            TheoremId::A8 => s.dim_s < net.n() && s.num_reactants <= s.dim_s,
        }
    }

    /// A network outside the hypotheses that violates the conclusion, with its rates.
    pub fn control(self) -> (ReactionNetwork, Vec<Q>) {
        let ones = |net: &ReactionNetwork| vec![Q::one(); net.labels().len()];
        let parse = |text: &str| parse_network(text).expect("control network parses");
        let qs = |v: &[&str]| {
            v.iter()
                .map(|s| parse_q(s).expect("rate"))
                .collect::<Vec<Q>>()
        };
        match self {
            TheoremId::A1 | TheoremId::A2 | TheoremId::A8 => {
                let net = family(FamilyId::GnConserved, 3, None).expect("family");
                let r = ones(&net);
                (net, r)
            }
            TheoremId::A3 | TheoremId::A5 => {
                (parse("0 <-> A; 2A <-> 3A"), qs(&["6", "11", "6", "1"]))
            }
            TheoremId::A4 => (
                parse("A+B <-> 2A; 2B <-> A; 0 <-> B"),
                qs(&["1/4", "1/32", "1/4", "1", "1", "1"]),
            ),
            TheoremId::A6 => (
                family(FamilyId::GnFulldim, 2, None).expect("family"),
                qs(&["1", "3", "1", "1"]),
            ),
            TheoremId::A7 => {
                let net = parse("0 -> X -> Y -> 2Y; Y <- Y+Z -> 2Z");
                let r = ones(&net);
                (net, r)
            }
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TheoremId {
    type Err = AtlasError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| AtlasError::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Claim {
    NoCoexistence,
    NoNondegenerateMss,
    NoMss,
    UniqueState,
    ListedReactantSets { require_rank: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditConfig {
    pub specs: Vec<EnumSpec>,
    /// Rate assignments per network, the all-ones assignment included.
    pub kappa_samples: usize,
    pub seed: u64,
    /// Newton seeds per compatibility class.
    pub budget: usize,
    /// Deterministic random subsample of the admitted networks.
    pub max_networks: Option<usize>,
    pub inject_control: bool,
    #[serde(skip)]
    pub exec: Exec,
}

impl AuditConfig {
    pub fn default_for(id: TheoremId) -> Self {
        let b = EnumSpec::bimolecular;
        let (specs, kappa_samples, max_networks) = match id {
            TheoremId::A1 => (vec![b(1, 3), b(2, 3)], 20, None),
            TheoremId::A2 => (vec![b(3, 3)], 4, Some(400)),
            TheoremId::A3 => (vec![b(1, 3), b(2, 3), b(3, 3)], 5, Some(600)),
            TheoremId::A4 => (
                vec![
                    b(1, 4).reversible(),
                    b(2, 4).reversible(),
                    b(3, 4).reversible(),
                ],
                5,
                Some(600),
            ),
            TheoremId::A5 => (vec![b(1, 6).reversible()], 20, None),
            TheoremId::A6 => (
                vec![
                    b(1, 4).full_dimensional(true),
                    b(2, 4).full_dimensional(true),
                    b(3, 3).full_dimensional(true),
                ],
                5,
                Some(600),
            ),
            TheoremId::A7 => (vec![b(3, 4).full_dimensional(true)], 5, Some(1500)),
            TheoremId::A8 => (vec![b(3, 3).full_dimensional(false)], 4, Some(400)),
        };
        Self {
            specs,
            kappa_samples,
            seed: 0,
            budget: 24,
            max_networks,
            inject_control: false,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub network: String,
    pub rates: BTreeMap<String, String>,
    pub detail: String,
    pub control: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControlOutcome {
    pub network: String,
    pub flagged: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditResult {
    pub theorem_id: TheoremId,
    pub statement: &'static str,
    pub specs: Vec<EnumSpec>,
    pub kappa_samples: usize,
    pub seed: u64,
    pub networks_enumerated: usize,
    pub networks_checked: usize,
    pub counterexamples: Vec<Counterexample>,
    pub control: ControlOutcome,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl AuditResult {
    /// No counterexample among the enumerated networks.
    pub fn claim_holds(&self) -> bool {
        self.counterexamples.iter().all(|c| c.control)
    }
}

fn rate_strings(r: &RateAssignment) -> BTreeMap<String, String> {
    r.0.iter().map(|(k, v)| (k.clone(), format_q(v))).collect()
}

fn solve_all(
    sys: &MassActionSystem,
    anchors: &[Vec<f64>],
    budget: usize,
) -> Vec<SteadyStateReport> {
    let ctx = ClassContext::new(&sys.net);
    let opts = SolveOptions {
        budget,
        seed: 0,
        exec: Exec::Sequential,
    };
    anchors
        .iter()
        .filter_map(|a| ctx.solve(sys, a, opts).ok())
        .collect()
}

/// Every positive steady state is degenerate or there is at most one, provably.
fn no_nondegenerate_pair(sys: &MassActionSystem) -> bool {
    if emptiness_certificate(sys).is_some() || n_matrix(sys).rank_n < dim_s(&sys.net) {
        return true;
    }
    matches!(binomial_reduce(sys), Ok(Some(_)))
}

fn best_nondegenerate(reports: &[SteadyStateReport]) -> Option<&SteadyStateReport> {
    reports
        .iter()
        .filter(|r| r.count_nondeg >= 2)
        .max_by_key(|r| r.count_nondeg)
}

fn acr_species(sys: &MassActionSystem, reports: &[SteadyStateReport]) -> Vec<(usize, f64)> {
    let pinned = pinned_coordinates(&n_matrix(sys));
    (0..sys.n())
        .filter_map(|i| {
            let p = pinned.iter().find(|p| p.species == i).cloned();
            let v = verdict_from_reports(sys, i, reports, p);
            (v.status == AcrStatus::Acr).then(|| (i, v.acr_value.unwrap_or(f64::NAN)))
        })
        .collect()
}

/// Multistationarity and ACR in one species, exactly when the binomial route applies.
fn mss_with_acr(
    sys: &MassActionSystem,
    anchors: &[Vec<f64>],
    budget: usize,
) -> Vec<(usize, String)> {
    if let Ok(Some(red)) = binomial_reduce(sys) {
        if log_linear_solve(&red) != LogLinearOutcome::PositiveDimensional {
            return Vec::new();
        }
        // Positive steady states form `{A ln x = ln β}`; x_z is constant iff e_z is in rowspace(A).
        return (0..sys.n())
            .filter(|&z| {
                let mut rows = red.a.to_rows();
                let mut e = vec![Q::zero(); sys.n()];
                e[z] = Q::one();
                rows.push(e);
                QMatrix::from_rows(rows).rank() == red.rank_a
            })
            .map(|z| (z, "binomial steady states form a curve".to_string()))
            .collect();
    }
    if emptiness_certificate(sys).is_some() {
        return Vec::new();
    }
    let reports = solve_all(sys, anchors, budget);
    if !reports.iter().any(|r| r.count_pos >= 2) {
        return Vec::new();
    }
    acr_species(sys, &reports)
        .into_iter()
        .map(|(z, v)| (z, format!("numeric states with x{} = {v:.6}", z + 1)))
        .collect()
}

fn violation(
    claim: Claim,
    sys: &MassActionSystem,
    anchors: &[Vec<f64>],
    budget: usize,
) -> Option<String> {
    let net = &sys.net;
    match claim {
        Claim::NoCoexistence => {
            if no_nondegenerate_pair(sys) {
                return None;
            }
            let reports = solve_all(sys, anchors, budget);
            let best = best_nondegenerate(&reports)?;
            let acr = acr_species(sys, &reports);
            let (i, v) = acr.first()?;
            Some(format!(
                "{} nondegenerate states in class {:?} and ACR in {} with value {v:.6}",
                best.count_nondeg,
                best.totals,
                net.species()[*i]
            ))
        }
        Claim::NoNondegenerateMss => {
            if no_nondegenerate_pair(sys) {
                return None;
            }
            let reports = solve_all(sys, anchors, budget);
            let best = best_nondegenerate(&reports)?;
            Some(format!(
                "{} nondegenerate states in class {:?}",
                best.count_nondeg, best.totals
            ))
        }
        Claim::NoMss => {
            if emptiness_certificate(sys).is_some() {
                return None;
            }
            let reports = solve_all(sys, anchors, budget);
            let r = reports.iter().find(|r| r.count_pos >= 2)?;
            Some(format!(
                "{} positive states in class {:?}",
                r.count_pos, r.totals
            ))
        }
        Claim::UniqueState => {
            if let Some(reason) = emptiness_certificate(sys) {
                return Some(format!("no positive steady state: {reason}"));
            }
            let reports = solve_all(sys, anchors, budget);
            let total: usize = reports.iter().map(|r| r.count_pos).sum();
            (total != 1).then(|| format!("{total} positive steady states"))
        }
        Claim::ListedReactantSets { require_rank } => {
            if require_rank && n_matrix(sys).rank_n != 3 {
                return None;
            }
            let class = classify_4reactant_3species(net).ok();
            mss_with_acr(sys, anchors, budget)
                .into_iter()
                .find(|(z, _)| {
                    !matches!(class, Some(FourReactantClass::SetXyZ(c)) | Some(FourReactantClass::Set0XyZ2z(c)) if c == *z)
                })
                .map(|(z, how)| {
                    format!("ACR in {} and multistationary ({how}), reactant set not listed", net.species()[z])
                })
        }
    }
}

/// Deterministic rate samples for network number `index`: all ones, then log-uniform draws.
fn kappa_list(net: &ReactionNetwork, count: usize, seed: u64, index: usize) -> Vec<RateAssignment> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut out = vec![RateAssignment::ones(net)];
    out.extend((1..count).map(|_| sample_rates(net, &mut rng)));
    out.truncate(count.max(1));
    out
}

fn check_network(
    claim: Claim,
    net: &ReactionNetwork,
    kappas: &[RateAssignment],
    budget: usize,
) -> Option<(RateAssignment, String)> {
    // κ-independent: rank N < dim S for every κ makes every steady state degenerate.
    if matches!(claim, Claim::NoCoexistence | Claim::NoNondegenerateMss)
        && generic_rank(net, 0) < dim_s(net)
    {
        return None;
    }
    let anchors = anchors_f64(&default_anchors(net));
    kappas.iter().find_map(|k| {
        let sys = build_system(net, k).ok()?;
        violation(claim, &sys, &anchors, budget).map(|d| (k.clone(), d))
    })
}

pub fn audit(id: TheoremId, cfg: &AuditConfig) -> Result<AuditResult, AtlasError> {
    let start = Instant::now();
    let claim = id.claim();
    let mut nets = Vec::new();
    let mut enumerated = 0;
    for spec in &cfg.specs {
        for net in enumerate_networks(*spec)? {
            enumerated += 1;
            if id.admits(&net) {
                nets.push(net);
            }
        }
    }
    if let Some(max) = cfg.max_networks {
        if nets.len() > max {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut idx = sample(&mut rng, nets.len(), max).into_vec();
            idx.sort_unstable();
            nets = idx.into_iter().map(|i| nets[i].clone()).collect();
        }
    }
    let indexed: Vec<(usize, ReactionNetwork)> = nets.into_iter().enumerate().collect();
    let found = map_ordered(cfg.exec, &indexed, |(i, net)| {
        let kappas = kappa_list(net, cfg.kappa_samples, cfg.seed, *i);
        check_network(claim, net, &kappas, cfg.budget).map(|(rates, detail)| Counterexample {
            network: format_network(net),
            rates: rate_strings(&rates),
            detail,
            control: false,
        })
    });
    let mut counterexamples: Vec<Counterexample> = found.into_iter().flatten().collect();

    let (cnet, crates) = id.control();
    let control_claim = match claim {
        Claim::ListedReactantSets { .. } => Claim::ListedReactantSets {
            require_rank: false,
        },
        c => c,
    };
    let csys = build_system(
        &cnet,
        &RateAssignment::positional(&cnet, &crates).expect("rates"),
    )
    .expect("control system");
    let canchors = anchors_f64(&default_anchors(&cnet));
    let detail = violation(control_claim, &csys, &canchors, cfg.budget.max(40));
    let control = ControlOutcome {
        network: format_network(&cnet),
        flagged: detail.is_some(),
        detail: detail.clone(),
    };
    if cfg.inject_control {
        if let Some(d) = detail {
            counterexamples.push(Counterexample {
                network: control.network.clone(),
                rates: rate_strings(&csys.rates),
                detail: d,
                control: true,
            });
        }
    }
    Ok(AuditResult {
        theorem_id: id,
        statement: id.statement(),
        specs: cfg.specs.clone(),
        kappa_samples: cfg.kappa_samples,
        seed: cfg.seed,
        networks_enumerated: enumerated,
        networks_checked: indexed.len(),
        counterexamples,
        control,
        elapsed: start.elapsed(),
    })
}
