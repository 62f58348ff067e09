//! Absolute concentration robustness: numeric and structural detection, vanishing-ODE
//! analysis, and classifiers for small bimolecular networks.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::AcrError;
use crate::massaction::{
    build_system, n_matrix, nondegenerate_unchecked, stoichiometric_basis_matrix, LinearForm,
    MassActionSystem, RateAssignment,
};
use crate::network::{RateLabel, ReactionNetwork};
use crate::par::map_ordered;
use crate::rational::{format_q, Q};
use crate::steady::{
    anchors_f64, binomial_reduce, default_anchors, emptiness_certificate, log_linear_solve,
    pinned_coordinates, sample_rates, ClassContext, LogLinearOutcome, PinnedCoordinate,
    SolveOptions, SteadyStateReport,
};
use crate::structural::{dim_s, is_full_dimensional};

/// Coefficient-of-variation threshold below which a coordinate counts as constant.
pub const ACR_CV_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcrStatus {
    Acr,
    NoAcr,
    NoPositiveStates,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    StructuralFormula,
    NumericSampling,
    ClosedForm,
    LogLinearUnique,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcrVerdict {
    pub species_index: usize,
    pub status: AcrStatus,
    pub acr_value: Option<f64>,
    #[serde(serialize_with = "serialize_opt_q")]
    pub exact_value: Option<Q>,
    pub evidence: Evidence,
    pub certificate: Option<String>,
    pub anchors_used: usize,
    pub states_examined: usize,
    /// Examined states whose Jacobian is singular on the stoichiometric subspace.
    pub degenerate_states: usize,
}

fn serialize_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&format_q(q)),
        None => s.serialize_none(),
    }
}

fn coefficient_of_variation(values: &[f64]) -> f64 {
    let m = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64;
    var.sqrt() / m.abs()
}

/// ACR verdict for one species. Exact certificates (emptiness, a pinned coordinate, a unique
/// binomial solution) take precedence over the multistart search across `anchors`.
pub fn acr_check(
    sys: &MassActionSystem,
    species: usize,
    anchors: &[Vec<f64>],
    opts: SolveOptions,
) -> Result<AcrVerdict, AcrError> {
    if species >= sys.n() {
        return Err(AcrError::SpeciesIndex(species));
    }
    let mut verdict = AcrVerdict {
        species_index: species,
        status: AcrStatus::NoPositiveStates,
        acr_value: None,
        exact_value: None,
        evidence: Evidence::StructuralFormula,
        certificate: None,
        anchors_used: 0,
        states_examined: 0,
        degenerate_states: 0,
    };
    if let Some(reason) = emptiness_certificate(sys) {
        verdict.certificate = Some(reason);
        return Ok(verdict);
    }
    if let Ok(Some(red)) = binomial_reduce(sys) {
        if let LogLinearOutcome::Unique(x) = log_linear_solve(&red) {
            verdict.status = AcrStatus::Acr;
            verdict.acr_value = Some(x[species]);
            verdict.evidence = Evidence::LogLinearUnique;
            verdict.states_examined = 1;
            let basis = stoichiometric_basis_matrix(&sys.net).to_f64();
            verdict.degenerate_states = usize::from(!nondegenerate_unchecked(sys, &basis, &x));
            verdict.certificate = Some("unique positive steady state".to_string());
            return Ok(verdict);
        }
    }
    let ctx = ClassContext::new(&sys.net);
    let reports: Vec<SteadyStateReport> =
        map_ordered(opts.exec, anchors, |a| ctx.solve(sys, a, opts).ok())
            .into_iter()
            .flatten()
            .collect();
    Ok(acr_from_reports(sys, species, &reports))
}

/// Verdict from already solved classes, upgraded by a pinned-coordinate certificate.
pub fn acr_from_reports(
    sys: &MassActionSystem,
    species: usize,
    reports: &[SteadyStateReport],
) -> AcrVerdict {
    let pinned = pinned_coordinates(&n_matrix(sys))
        .into_iter()
        .find(|p| p.species == species);
    verdict_from_reports(sys, species, reports, pinned)
}

pub(crate) fn verdict_from_reports(
    sys: &MassActionSystem,
    species: usize,
    reports: &[SteadyStateReport],
    pinned: Option<PinnedCoordinate>,
) -> AcrVerdict {
    let values: Vec<f64> = reports
        .iter()
        .flat_map(|r| r.states.iter().map(|s| s.point[species]))
        .collect();
    let mut verdict = AcrVerdict {
        species_index: species,
        status: AcrStatus::NoPositiveStates,
        acr_value: None,
        exact_value: None,
        evidence: Evidence::NumericSampling,
        certificate: None,
        anchors_used: reports.len(),
        states_examined: values.len(),
        degenerate_states: reports
            .iter()
            .flat_map(|r| &r.states)
            .filter(|s| !s.nondegenerate)
            .count(),
    };
    if values.is_empty() {
        return verdict;
    }
    if let Some(p) = pinned {
        verdict.status = AcrStatus::Acr;
        verdict.acr_value = Some(p.value);
        verdict.exact_value = p.exact;
        verdict.evidence = Evidence::StructuralFormula;
        verdict.certificate = Some(format!(
            "{} is fixed by binomial relations among reactant monomials",
            sys.net.species()[species]
        ));
        return verdict;
    }
    let cv = coefficient_of_variation(&values);
    verdict.status = if values.len() == 1 {
        AcrStatus::Undetermined
    } else if cv < ACR_CV_TOL {
        AcrStatus::Acr
    } else {
        AcrStatus::NoAcr
    };
    if verdict.status == AcrStatus::Acr {
        verdict.acr_value = Some(values.iter().sum::<f64>() / values.len() as f64);
    }
    verdict
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingCase {
    FZero,
    FZeroAtAlpha,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRelation {
    #[serde(skip)]
    pub form: LinearForm,
    /// `form = 0` rendered in rate labels.
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingOdeAnalysis {
    pub species_index: usize,
    pub case: VanishingCase,
    /// Every reaction changing the species has the shape `Xi+Xj -> 2Xi` or `Xi+Xj -> *` with
    /// `*` free of `Xi` (`Xj` possibly empty).
    pub allowed_reactions_ok: bool,
    pub rate_relations: Vec<RateRelation>,
    #[serde(serialize_with = "serialize_opt_q")]
    pub alpha: Option<Q>,
    pub alpha_formula: Option<String>,
}

/// Reaction shapes that keep `f_i` a combination of `x_i` and `x_i x_j` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// `Xi + Xj -> 2Xi`.
    Gain(Option<usize>),
    /// `Xi + Xj -> *` with `*` not involving `Xi`.
    Loss(Option<usize>),
}

fn shape(reactant: &[u32], product: &[u32], i: usize) -> Option<Shape> {
    if reactant[i] != 1 {
        return None;
    }
    let partners: Vec<usize> = (0..reactant.len())
        .filter(|&l| l != i && reactant[l] > 0)
        .collect();
    let partner = match partners.as_slice() {
        [] => None,
        [j] if reactant[*j] == 1 => Some(*j),
        _ => return None,
    };
    let two_i = product
        .iter()
        .enumerate()
        .all(|(l, &c)| if l == i { c == 2 } else { c == 0 });
    if two_i {
        Some(Shape::Gain(partner))
    } else if product[i] == 0 {
        Some(Shape::Loss(partner))
    } else {
        None
    }
}

fn add_rate(form: &mut LinearForm, rate: &RateLabel, sign: i64) {
    match rate {
        RateLabel::Label(l) => {
            let c = form.coeffs.entry(l.clone()).or_insert(0);
            *c += sign;
            if *c == 0 {
                form.coeffs.remove(l);
            }
        }
        RateLabel::Literal(v) => form.constant += v * Q::from_integer(sign.into()),
    }
}

/// Tests whether `f_species` vanishes identically, or after substituting `x_acr = alpha`.
/// Without `alpha`, the value implied by the rate constants of the `j = 0` and `j = acr`
/// reactions is used.
pub fn vanishing_ode_analysis(
    sys: &MassActionSystem,
    species: usize,
    acr_species: usize,
    alpha: Option<&Q>,
) -> Result<VanishingOdeAnalysis, AcrError> {
    let net = &sys.net;
    if !net.is_bimolecular() {
        return Err(AcrError::NotBimolecular);
    }
    let n = net.n();
    if species >= n {
        return Err(AcrError::SpeciesIndex(species));
    }
    if acr_species >= n {
        return Err(AcrError::SpeciesIndex(acr_species));
    }
    let mut allowed = true;
    let mut groups: BTreeMap<Option<usize>, LinearForm> = BTreeMap::new();
    for r in net.reactions() {
        if r.vector()[species] == 0 {
            continue;
        }
        match shape(r.reactant.coeffs(), r.product.coeffs(), species) {
            Some(Shape::Gain(j)) => add_rate(groups.entry(j).or_default(), &r.rate, 1),
            Some(Shape::Loss(j)) => add_rate(groups.entry(j).or_default(), &r.rate, -1),
            None => allowed = false,
        }
    }
    let relation = |form: &LinearForm| RateRelation {
        relation: format!("{form} = 0"),
        holds: form.eval(&sys.rates).is_zero(),
        form: form.clone(),
    };
    let f = &sys.rhs[species];
    let mut out = VanishingOdeAnalysis {
        species_index: species,
        case: VanishingCase::Neither,
        allowed_reactions_ok: allowed,
        rate_relations: Vec::new(),
        alpha: None,
        alpha_formula: None,
    };
    if f.is_zero() {
        out.case = VanishingCase::FZero;
        out.rate_relations = groups.values().map(relation).collect();
        return Ok(out);
    }
    if species == acr_species {
        return Ok(out);
    }
    let zero = LinearForm::default();
    let g0 = groups.get(&None).unwrap_or(&zero);
    let g1 = groups.get(&Some(acr_species)).unwrap_or(&zero);
    let numerator = negate(g0);
    let (num_v, den_v) = (numerator.eval(&sys.rates), g1.eval(&sys.rates));
    let formula_alpha = (!den_v.is_zero()).then(|| num_v / den_v);
    let candidate = alpha.cloned().or_else(|| formula_alpha.clone());
    if let Some(a) = candidate.filter(|a| a.is_positive()) {
        if f.substitute(acr_species, &a).is_zero() {
            out.case = VanishingCase::FZeroAtAlpha;
            out.alpha = formula_alpha;
            out.alpha_formula = Some(format!("({numerator}) / ({g1})"));
            out.rate_relations = groups
                .iter()
                .filter(|(j, _)| j.is_some() && **j != Some(acr_species))
                .map(|(_, form)| relation(form))
                .collect();
        }
    }
    Ok(out)
}

fn negate(form: &LinearForm) -> LinearForm {
    LinearForm {
        coeffs: form.coeffs.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        constant: -form.constant.clone(),
    }
}

type PairSet = BTreeSet<(Vec<u32>, Vec<u32>)>;

fn relabeled_pairs(net: &ReactionNetwork, perm: &[usize]) -> PairSet {
    let map = |c: &[u32]| {
        let mut v = vec![0; c.len()];
        for (i, &x) in c.iter().enumerate() {
            v[perm[i]] = x;
        }
        v
    };
    net.pairs().iter().map(|(a, b)| (map(a), map(b))).collect()
}

/// Some relabeling of the species of `net` turns its reaction set into `pattern`.
fn matches_up_to_relabeling(net: &ReactionNetwork, pattern: &PairSet) -> bool {
    (0..net.n())
        .permutations(net.n())
        .any(|p| relabeled_pairs(net, &p) == *pattern)
}

fn pattern(pairs: &[(&[u32], &[u32])]) -> PairSet {
    pairs
        .iter()
        .map(|(a, b)| (a.to_vec(), b.to_vec()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OneDimCapacity {
    InfiniteCap,
    FiniteCap,
}

/// One-dimensional bimolecular networks with infinitely many positive steady states.
pub fn classify_1d_infinite(net: &ReactionNetwork) -> Result<OneDimCapacity, AcrError> {
    if dim_s(net) != 1 {
        return Err(AcrError::NotOneDimensional);
    }
    if !net.is_bimolecular() {
        return Err(AcrError::NotBimolecular);
    }
    let n = net.n();
    let exchange = n == 2
        && matches_up_to_relabeling(net, &pattern(&[(&[1, 1], &[2, 0]), (&[1, 1], &[0, 2])]));
    // {X1 -> 2X1} plus some of X1 -> 0 and X1+Xi -> Xi, for each choice of X1.
    let autocatalytic = (0..n).permutations(n).any(|p| {
        let pairs = relabeled_pairs(net, &p);
        let e = |i: usize, c: u32| {
            let mut v = vec![0; n];
            v[i] = c;
            v
        };
        let birth = (e(0, 1), e(0, 2));
        let allowed: PairSet = std::iter::once((e(0, 1), vec![0; n]))
            .chain((1..n).map(|i| {
                let mut r = e(i, 1);
                r[0] = 1;
                (r, e(i, 1))
            }))
            .collect();
        pairs.contains(&birth)
            && pairs.len() >= 2
            && pairs.iter().all(|pr| *pr == birth || allowed.contains(pr))
    });
    Ok(if exchange || autocatalytic {
        OneDimCapacity::InfiniteCap
    } else {
        OneDimCapacity::FiniteCap
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoSpeciesClass {
    ListedNetwork,
    NotListed,
}

/// The two-species bimolecular networks that combine ACR with multistationarity (all degenerate).
pub fn classify_two_species_coexistence(
    net: &ReactionNetwork,
) -> Result<TwoSpeciesClass, AcrError> {
    if net.n() != 2 {
        return Err(AcrError::SpeciesCount {
            expected: 2,
            got: net.n(),
        });
    }
    if !net.is_bimolecular() {
        return Err(AcrError::NotBimolecular);
    }
    let base: [(&[u32], &[u32]); 2] = [(&[1, 1], &[0, 1]), (&[1, 0], &[2, 0])];
    let with_death: [(&[u32], &[u32]); 3] = [base[0], base[1], (&[1, 0], &[0, 0])];
    let listed = matches_up_to_relabeling(net, &pattern(&base))
        || matches_up_to_relabeling(net, &pattern(&with_death));
    Ok(if listed {
        TwoSpeciesClass::ListedNetwork
    } else {
        TwoSpeciesClass::NotListed
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "set", content = "z")]
pub enum FourReactantClass {
    /// Reactants `{X, X+Z, Y, Y+Z}`; the payload is the species playing `Z`.
    #[serde(rename = "set_XY_Z")]
    SetXyZ(usize),
    /// Reactants `{0, X+Y, Z, 2Z}`.
    #[serde(rename = "set_0_XY_Z2Z")]
    Set0XyZ2z(usize),
    Other,
}

/// Matches the reactant set of a 3-species, 4-reactant full-dimensional bimolecular network
/// against the two sets compatible with ACR in `Z` and multistationarity.
pub fn classify_4reactant_3species(net: &ReactionNetwork) -> Result<FourReactantClass, AcrError> {
    if !net.is_bimolecular() {
        return Err(AcrError::NotBimolecular);
    }
    if net.n() != 3 {
        return Err(AcrError::SpeciesCount {
            expected: 3,
            got: net.n(),
        });
    }
    if !is_full_dimensional(net) {
        return Err(AcrError::NotFullDimensional);
    }
    let reactants: BTreeSet<Vec<u32>> = net.reactant_complexes().into_iter().map(|c| c.0).collect();
    if reactants.len() != 4 {
        return Err(AcrError::ReactantCount(reactants.len()));
    }
    // Species order (X, Y, Z).
    let set1: BTreeSet<Vec<u32>> = [[1, 0, 0], [1, 0, 1], [0, 1, 0], [0, 1, 1]]
        .iter()
        .map(|v| v.to_vec())
        .collect();
    let set2: BTreeSet<Vec<u32>> = [[0, 0, 0], [1, 1, 0], [0, 0, 1], [0, 0, 2]]
        .iter()
        .map(|v| v.to_vec())
        .collect();
    for perm in (0..3).permutations(3) {
        let mapped: BTreeSet<Vec<u32>> = reactants
            .iter()
            .map(|c| {
                let mut v = vec![0; 3];
                for (i, &x) in c.iter().enumerate() {
                    v[perm[i]] = x;
                }
                v
            })
            .collect();
        let z = perm.iter().position(|&p| p == 2).expect("permutation");
        if mapped == set1 {
            return Ok(FourReactantClass::SetXyZ(z));
        }
        if mapped == set2 {
            return Ok(FourReactantClass::Set0XyZ2z(z));
        }
    }
    Ok(FourReactantClass::Other)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum ProbeOutcome {
    /// A sampled assignment without ACR (or without positive steady states).
    Refuted {
        #[serde(serialize_with = "serialize_rates")]
        rates: RateAssignment,
        status: AcrStatus,
    },
    /// Every sample showed ACR or was undetermined. Sampling evidence only.
    Consistent { values: Vec<Option<f64>> },
}

pub(crate) fn serialize_rates<S: serde::Serializer>(
    r: &RateAssignment,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(r.0.len()))?;
    for (k, v) in &r.0 {
        m.serialize_entry(k, &format_q(v))?;
    }
    m.end()
}

/// Samples rate assignments looking for one where `species` loses ACR.
pub fn unconditional_acr_probe(
    net: &ReactionNetwork,
    species: usize,
    samples: usize,
    seed: u64,
    opts: SolveOptions,
) -> Result<ProbeOutcome, AcrError> {
    if species >= net.n() {
        return Err(AcrError::SpeciesIndex(species));
    }
    let anchors = anchors_f64(&default_anchors(net));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::new();
    for _ in 0..samples {
        let rates = sample_rates(net, &mut rng);
        let sys = build_system(net, &rates)?;
        let v = acr_check(&sys, species, &anchors, opts)?;
        match v.status {
            AcrStatus::NoAcr | AcrStatus::NoPositiveStates => {
                return Ok(ProbeOutcome::Refuted {
                    rates,
                    status: v.status,
                })
            }
            _ => values.push(v.acr_value),
        }
    }
    Ok(ProbeOutcome::Consistent { values })
}

/// Exact ACR value when a binomial relation pins the species, as `f64` and rational.
pub fn structural_acr_value(sys: &MassActionSystem, species: usize) -> Option<(f64, Option<Q>)> {
    pinned_coordinates(&n_matrix(sys))
        .into_iter()
        .find(|p| p.species == species)
        .map(|p| (p.value, p.exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_network;
    use crate::rational::{q, q_frac};
    use crate::steady::anchor_from_totals;

    fn system(text: &str, rates: &[i64]) -> MassActionSystem {
        let net = parse_network(text).unwrap();
        let vals: Vec<Q> = rates.iter().map(|&v| q(v)).collect();
        build_system(&net, &RateAssignment::positional(&net, &vals).unwrap()).unwrap()
    }

    const ENLARGED_CORE: &str = "A+B -> 2B; B -> A; 0 <- B+C -> 2B; 0 -> C";

    #[test]
    fn min3_has_acr_in_x3() {
        let s = system("X1+X2 -> 2X3; X3 -> X1; 2X3 -> 2X2", &[1, 1, 1]);
        let anchors: Vec<Vec<f64>> = [5.0, 10.0, 20.0]
            .iter()
            .map(|t| anchor_from_totals(&s.net, &[*t]).unwrap())
            .collect();
        let v = acr_check(
            &s,
            2,
            &anchors,
            SolveOptions {
                budget: 40,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(v.status, AcrStatus::Acr);
        assert_eq!(v.exact_value, Some(q_frac(1, 2)));
        assert_eq!(v.states_examined, 6);
        let x1 = acr_check(
            &s,
            0,
            &anchors,
            SolveOptions {
                budget: 40,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(x1.status, AcrStatus::NoAcr);
    }

    #[test]
    fn generalized_network_acr_and_emptiness() {
        let s = system("0 <- A -> 2A; A+B -> B", &[1, 2, 1]);
        let anchors = anchors_f64(&default_anchors(&s.net));
        let v = acr_check(
            &s,
            1,
            &anchors,
            SolveOptions {
                budget: 20,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((v.status, v.exact_value), (AcrStatus::Acr, Some(q(1))));
        let empty = system("0 <- A -> 2A; A+B -> B", &[2, 1, 1]);
        let v = acr_check(&empty, 1, &anchors, SolveOptions::default()).unwrap();
        assert_eq!(v.status, AcrStatus::NoPositiveStates);
        assert!(v.certificate.is_some());
    }

    #[test]
    fn enlarged_core_value_and_vanishing_ode() {
        let s = system(ENLARGED_CORE, &[2, 3, 5, 5, 1]);
        let anchors = anchors_f64(&default_anchors(&s.net));
        let v = acr_check(
            &s,
            0,
            &anchors,
            SolveOptions {
                budget: 20,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            (v.status, v.exact_value),
            (AcrStatus::Acr, Some(q_frac(3, 2)))
        );
        let a = vanishing_ode_analysis(&s, 1, 0, None).unwrap();
        assert_eq!(a.case, VanishingCase::FZeroAtAlpha);
        assert_eq!(a.alpha, Some(q_frac(3, 2)));
        assert!(a.allowed_reactions_ok);
        assert_eq!(a.rate_relations.len(), 1);
        assert_eq!(a.rate_relations[0].relation, "-k3 + k4 = 0");
        assert!(a.rate_relations[0].holds);
        let off = system(ENLARGED_CORE, &[2, 3, 5, 4, 1]);
        assert_eq!(
            vanishing_ode_analysis(&off, 1, 0, None).unwrap().case,
            VanishingCase::Neither
        );
    }

    #[test]
    fn catalyst_only_species_has_zero_ode() {
        let s = system("0 <- A -> 2A; A+B -> B", &[1, 2, 1]);
        let a = vanishing_ode_analysis(&s, 1, 0, None).unwrap();
        assert_eq!(a.case, VanishingCase::FZero);
        assert!(a.rate_relations.is_empty());
        let t = system("A+B -> B", &[1]);
        assert!(matches!(
            vanishing_ode_analysis(&system("3A -> 0", &[1]), 0, 0, None),
            Err(AcrError::NotBimolecular)
        ));
        assert_eq!(
            vanishing_ode_analysis(&t, 1, 0, None).unwrap().case,
            VanishingCase::FZero
        );
    }

    #[test]
    fn one_dimensional_capacity() {
        let cases = [
            ("0 <- A -> 2A; A+B -> B", OneDimCapacity::InfiniteCap),
            ("X1+X2 -> 2X1; X1+X2 -> 2X2", OneDimCapacity::InfiniteCap),
            ("0 <-> A+B", OneDimCapacity::FiniteCap),
            ("B -> 2B; A+B -> A", OneDimCapacity::InfiniteCap),
            ("A -> 2A", OneDimCapacity::FiniteCap),
        ];
        for (text, want) in cases {
            assert_eq!(
                classify_1d_infinite(&parse_network(text).unwrap()).unwrap(),
                want,
                "{text}"
            );
        }
        assert!(classify_1d_infinite(&parse_network("0 -> A; 0 -> B").unwrap()).is_err());
    }

    #[test]
    fn two_species_listing() {
        let listed = [
            "A+B -> B; A -> 2A",
            "A+B -> B; 0 <- A -> 2A",
            "A+B -> A; B -> 2B",
        ];
        for text in listed {
            let c = classify_two_species_coexistence(&parse_network(text).unwrap()).unwrap();
            assert_eq!(c, TwoSpeciesClass::ListedNetwork, "{text}");
        }
        let c = classify_two_species_coexistence(&parse_network("X2 <-> X1+X2").unwrap()).unwrap();
        assert_eq!(c, TwoSpeciesClass::NotListed);
        assert!(classify_two_species_coexistence(&parse_network("0 -> A").unwrap()).is_err());
    }

    #[test]
    fn four_reactant_sets() {
        let a = parse_network("2Z -> Z; X+Y -> Z -> Y+Z; 0 -> X").unwrap();
        let z = a.species_index("Z").unwrap();
        assert_eq!(
            classify_4reactant_3species(&a).unwrap(),
            FourReactantClass::Set0XyZ2z(z)
        );
        let b = parse_network("X+Z -> Z; Y+Z <-> Y -> 0; 2X <- X -> X+Y").unwrap();
        let z = b.species_index("Z").unwrap();
        assert_eq!(
            classify_4reactant_3species(&b).unwrap(),
            FourReactantClass::SetXyZ(z)
        );
        let min3 = parse_network("X1+X2 -> 2X3; X3 -> X1; 2X3 -> 2X2").unwrap();
        assert!(matches!(
            classify_4reactant_3species(&min3),
            Err(AcrError::ReactantCount(3)) | Err(AcrError::NotFullDimensional)
        ));
    }

    #[test]
    fn unconditional_probes() {
        let opts = SolveOptions {
            budget: 12,
            ..Default::default()
        };
        let rev = parse_network("X2 <-> X1+X2").unwrap();
        let x1 = rev.species_index("X1").unwrap();
        assert!(matches!(
            unconditional_acr_probe(&rev, x1, 4, 7, opts).unwrap(),
            ProbeOutcome::Consistent { .. }
        ));
        let g = parse_network("2X2 <- X2 <-> X1+X2 -> X1").unwrap();
        let x1 = g.species_index("X1").unwrap();
        assert!(matches!(
            unconditional_acr_probe(&g, x1, 4, 7, opts).unwrap(),
            ProbeOutcome::Refuted { .. }
        ));
        let u = parse_network("A <-> A+B; 2B <-> 3B; A <-> 2A").unwrap();
        match unconditional_acr_probe(&u, 0, 3, 7, opts).unwrap() {
            ProbeOutcome::Consistent { values } => assert!(values.iter().all(Option::is_some)),
            other => panic!("{other:?}"),
        }
    }
}
