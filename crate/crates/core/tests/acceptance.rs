//! End-to-end acceptance checks. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process fails if any criterion does.

mod common;

use std::time::Instant;

use crnscope::acr::{acr_check, vanishing_ode_analysis, AcrStatus, VanishingCase};
use crnscope::atlas::{
    audit, canonical_form, canonical_network, enumerate_networks, AuditConfig, EnumSpec, TheoremId,
};
use crnscope::dsl::parse_network;
use crnscope::families::{family, FamilyId};
use crnscope::massaction::{
    build_system, conservation_annihilates, jacobian, n_matrix, restrict_univariate,
    restricted_jacobian_rank_q, MassActionSystem, RateAssignment,
};
use crnscope::rational::{q, q_frac, Q};
use crnscope::realize::check_mass_action_form;
use crnscope::steady::{
    anchor_from_totals, anchors_f64, binomial_reduce, default_anchors, log_linear_solve,
    pinned_coordinates, same_point_tol, sample_rates, solve_anchors, solve_in_class,
    LogLinearOutcome, SolveOptions,
};
use crnscope::structural::{
    analyze_structure, deficiency_one_applies, deficiency_zero_applies, dim_s, is_weakly_reversible,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

fn system(text: &str, rates: &[Q]) -> MassActionSystem {
    let net = parse_network(text).expect("network parses");
    build_system(
        &net,
        &RateAssignment::positional(&net, rates).expect("rate count"),
    )
    .expect("rates bind")
}

fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn grid(sys: &MassActionSystem) -> Vec<Vec<f64>> {
    anchors_f64(&default_anchors(&sys.net))
}

fn golden_examples() -> Outcome {
    let net = "0 <- A -> 2A; A+B -> B";
    let sys = system(net, &ints(&[1, 2, 1]));
    let v = acr_check(&sys, 1, &grid(&sys), SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure!(v.status == AcrStatus::Acr, "status {:?}", v.status);
    let value = v.acr_value.unwrap_or(f64::NAN);
    ensure!((value - 1.0).abs() <= 1e-9, "ACR value {value}");
    let empty = system(net, &ints(&[2, 1, 1]));
    let anchors = grid(&empty);
    let found: usize = solve_anchors(&empty, &anchors, SolveOptions::default())
        .iter()
        .map(|r| r.count_pos)
        .sum();
    ensure!(found == 0, "{found} states at kappa=(2,1,1)");
    Ok(format!(
        "ACR in B with value {value:.9}; 0 states over {} anchors when k1 > k2",
        anchors.len()
    ))
}

fn three_reversible() -> Outcome {
    let sys = system(
        "A+B -> 2A; 2A -> A+B; 2B -> A; A -> 2B; 0 -> B; B -> 0",
        &[q_frac(1, 4), q_frac(1, 32), q_frac(1, 4), q(1), q(1), q(1)],
    );
    let r =
        solve_in_class(&sys, &[1.0, 1.0], SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure!(r.count_pos == 3, "{} states", r.count_pos);
    ensure!(r.count_nondeg == 3, "{} nondegenerate", r.count_nondeg);
    let worst = r.states.iter().map(|s| s.residual).fold(0.0, f64::max);
    ensure!(worst < 1e-9, "residual {worst:e}");
    Ok(format!("3 nondegenerate states, max residual {worst:.1e}"))
}

fn conserved_family() -> Outcome {
    let mut notes = Vec::new();
    for n in 3..=5 {
        let net = family(FamilyId::GnConserved, n, None).map_err(|e| e.to_string())?;
        let report = analyze_structure(&net);
        ensure!(
            report.num_reactants == n,
            "n={n}: {} reactants",
            report.num_reactants
        );
        let mut expected = vec![q(0); n];
        expected[..3].fill(q(1));
        ensure!(
            report.conservation_basis == vec![expected],
            "n={n}: basis {:?}",
            report.conservation_basis
        );
        let sys = build_system(&net, &RateAssignment::ones(&net)).map_err(|e| e.to_string())?;
        let anchor = anchor_from_totals(&net, &[10.0]).map_err(|e| e.to_string())?;
        let r =
            solve_in_class(&sys, &anchor, SolveOptions::default()).map_err(|e| e.to_string())?;
        ensure!(
            r.count_pos == 2 && r.count_nondeg == 2,
            "n={n}: {} states, {} nondegenerate",
            r.count_pos,
            r.count_nondeg
        );
        for s in &r.states {
            for j in 2..n {
                ensure!(
                    (s.point[j] - 0.5).abs() <= 1e-8,
                    "n={n}: x{} = {}",
                    j + 1,
                    s.point[j]
                );
            }
        }
        notes.push(format!("n={n}"));
    }
    Ok(format!(
        "{}: 2 nondegenerate states at T=10, ACR values 0.5",
        notes.join(", ")
    ))
}

fn fulldim_family() -> Outcome {
    let mut notes = Vec::new();
    for n in 2..=3 {
        let net = family(FamilyId::GnFulldim, n, None).map_err(|e| e.to_string())?;
        let r = net.labels().len();
        let mut rates = vec![q(1); r];
        rates[1] = q(3);
        let sys = build_system(&net, &RateAssignment::positional(&net, &rates).unwrap())
            .map_err(|e| e.to_string())?;
        let pinned = pinned_coordinates(&n_matrix(&sys));
        let x1 = pinned
            .iter()
            .find(|p| p.species == 0)
            .ok_or("x1 not pinned")?;
        ensure!(x1.exact == Some(q(3)), "x1 = {:?}", x1.exact);
        let found = solve_in_class(&sys, &vec![1.0; n], SolveOptions::default())
            .map_err(|e| e.to_string())?;
        ensure!(
            found.count_pos == 2 && found.count_nondeg == 2,
            "n={n}: {} states, {} nondegenerate",
            found.count_pos,
            found.count_nondeg
        );
        let roots = [(3.0 - 5f64.sqrt()) / 2.0, (3.0 + 5f64.sqrt()) / 2.0];
        for (s, root) in found.states.iter().zip(roots) {
            ensure!(
                (s.point[1] - root).abs() <= 1e-10 * root,
                "n={n}: x2 = {} vs {root}",
                s.point[1]
            );
        }
        let mut inflated = rates.clone();
        inflated[2] = q(2);
        inflated[3] = q(2);
        let low = build_system(&net, &RateAssignment::positional(&net, &inflated).unwrap())
            .map_err(|e| e.to_string())?;
        let few = solve_in_class(&low, &vec![1.0; n], SolveOptions::default())
            .map_err(|e| e.to_string())?;
        ensure!(
            few.count_pos < 2,
            "n={n}: {} states with k2^2 < 4 k3 k4",
            few.count_pos
        );
        notes.push(format!("n={n} ({} when inflated)", few.count_pos));
    }
    Ok(format!(
        "x1 = 3 exactly from monomial relations, x2 = (3±√5)/2; {}",
        notes.join(", ")
    ))
}

/// `|a - b| < 1e-8`, measured relative to the terms once they exceed one, since far along a
/// curve of steady states the defining equation cancels large terms.
fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-8 * a.abs().max(b.abs()).max(1.0)
}

fn degenerate_varieties() -> Outcome {
    let a = system(
        "species: X, Y, Z\n2Z -> Z; X+Y -> Z -> Y+Z; 0 -> X",
        &ints(&[1, 1, 1, 1]),
    );
    let ra = solve_in_class(&a, &[1.0; 3], SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure!(ra.count_pos > 0, "no states for the 2Z -> Z network");
    for s in &ra.states {
        let (x, y, z) = (s.point[0], s.point[1], s.point[2]);
        ensure!(
            near(x * y, 1.0) && near(z, 1.0),
            "off the variety: {:?}",
            s.point
        );
        ensure!(!s.nondegenerate, "flagged nondegenerate: {:?}", s.point);
    }
    let pa = [q(2), q_frac(1, 2), q(1)];
    ensure!(
        a.eval_q(&pa).iter().all(|v| *v == q(0)),
        "(2, 1/2, 1) is not a steady state"
    );
    let rank_a = restricted_jacobian_rank_q(&a, &pa);
    ensure!(rank_a < dim_s(&a.net), "exact rank {rank_a}");

    let b = system("0 -> X -> Y -> 2Y; Y <- Y+Z -> 2Z", &ints(&[1, 1, 1, 1, 1]));
    let rb = solve_in_class(&b, &[1.0; 3], SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure!(rb.count_pos > 0, "no states for the rank-2 network");
    for s in &rb.states {
        let (x, y, z) = (s.point[0], s.point[1], s.point[2]);
        ensure!(
            near(x, 1.0) && near(y * z, y + 1.0),
            "off the variety: {:?}",
            s.point
        );
        ensure!(!s.nondegenerate, "flagged nondegenerate: {:?}", s.point);
    }
    let pb = [q(1), q(1), q(2)];
    ensure!(
        b.eval_q(&pb).iter().all(|v| *v == q(0)),
        "(1, 1, 2) is not a steady state"
    );
    let rank_b = restricted_jacobian_rank_q(&b, &pb);
    ensure!(rank_b < dim_s(&b.net), "exact rank {rank_b}");
    Ok(format!(
        "{} and {} states on the varieties, exact ranks {rank_a} and {rank_b} < 3",
        ra.count_pos, rb.count_pos
    ))
}

fn unique_per_sample(
    net: &crnscope::network::ReactionNetwork,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let anchors = anchors_f64(&default_anchors(net));
    for _ in 0..samples {
        let rates = sample_rates(net, rng);
        let sys = build_system(net, &rates).map_err(|e| e.to_string())?;
        for r in solve_anchors(&sys, &anchors, SolveOptions::default()) {
            ensure!(
                r.count_pos == 1,
                "{} states for {:?} in class {:?}",
                r.count_pos,
                rates.0,
                r.totals
            );
        }
    }
    Ok(())
}

fn deficiency_predicates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let net = parse_network("X2 <-> X1+X2").unwrap();
    let dz = deficiency_zero_applies(&net);
    ensure!(
        dz.applies && is_weakly_reversible(&net),
        "deficiency-zero predicate fails"
    );
    unique_per_sample(&net, 10, &mut rng)?;
    let nets: Vec<_> = enumerate_networks(EnumSpec::bimolecular(1, 6).reversible())
        .map_err(|e| e.to_string())?
        .collect();
    ensure!(
        nets.len() == 7,
        "{} reversible one-species networks",
        nets.len()
    );
    for net in &nets {
        ensure!(
            deficiency_zero_applies(net).applies || deficiency_one_applies(net),
            "predicate false for {net:?}"
        );
        unique_per_sample(net, 10, &mut rng)?;
    }
    Ok(
        "X2 <-> X1+X2 and all 7 reversible one-species networks: one state per sampled class"
            .into(),
    )
}

fn structural_acr_formula() -> Outcome {
    let text = "A+B -> 2B; B -> A; 0 <- B+C -> 2B; 0 -> C";
    let mut checked = Vec::new();
    for rates in [[2, 3, 5, 5, 1], [3, 7, 2, 2, 4]] {
        let sys = system(text, &ints(&rates));
        let alpha = q_frac(rates[1], rates[0]);
        let a = vanishing_ode_analysis(&sys, 1, 0, None).map_err(|e| e.to_string())?;
        ensure!(a.case == VanishingCase::FZeroAtAlpha, "case {:?}", a.case);
        ensure!(a.alpha.as_ref() == Some(&alpha), "alpha {:?}", a.alpha);
        let v =
            acr_check(&sys, 0, &grid(&sys), SolveOptions::default()).map_err(|e| e.to_string())?;
        let value = v.acr_value.unwrap_or(f64::NAN);
        let want = crnscope::rational::to_f64(&alpha);
        ensure!(
            v.status == AcrStatus::Acr && (value - want).abs() <= 1e-8 * want,
            "acr_check {:?} {value}",
            v.status
        );
        checked.push(crnscope::rational::format_q(&alpha));
    }
    Ok(format!(
        "f_B vanishes at alpha = k2/k1 in {{{}}}, acr_check agrees",
        checked.join(", ")
    ))
}

fn audits() -> Outcome {
    let mut lines = Vec::new();
    for id in TheoremId::ALL {
        let mut cfg = AuditConfig::default_for(id);
        cfg.inject_control = true;
        let start = Instant::now();
        let r = audit(id, &cfg).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let real: Vec<_> = r.counterexamples.iter().filter(|c| !c.control).collect();
        ensure!(
            real.is_empty(),
            "{id}: counterexample {} ({})",
            real[0].network,
            real[0].detail
        );
        ensure!(
            r.control.flagged,
            "{id}: control {} not flagged",
            r.control.network
        );
        ensure!(
            r.counterexamples.iter().any(|c| c.control),
            "{id}: injected control missing"
        );
        if id == TheoremId::A1 {
            ensure!(secs < 300.0, "A1 took {secs:.0}s");
        }
        lines.push(format!("{id} {}n/{secs:.1}s", r.networks_checked));
    }
    Ok(format!(
        "no counterexamples, every control flagged [{}]",
        lines.join(" ")
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut unique, mut empty, mut tries) = (0, 0, 0);
    while unique + empty < 200 {
        tries += 1;
        ensure!(tries < 200_000, "only {} cases generated", unique + empty);
        let n = rng.random_range(1..=3);
        let Some((sys, red)) = common::oracle_case(&mut rng, n) else {
            continue;
        };
        let r = solve_in_class(&sys, &vec![1.0; n], SolveOptions::default())
            .map_err(|e| e.to_string())?;
        match log_linear_solve(&red) {
            LogLinearOutcome::Unique(x) => {
                ensure!(
                    r.count_pos == 1,
                    "{:?}: {} states, log-linear point {x:?}",
                    sys.net,
                    r.count_pos
                );
                ensure!(
                    same_point_tol(&x, &r.states[0].point, 1e-8),
                    "{x:?} vs {:?}",
                    r.states[0].point
                );
                unique += 1;
            }
            LogLinearOutcome::Empty => {
                ensure!(
                    red.betas.iter().any(|b| *b <= q(0)),
                    "empty with positive betas"
                );
                ensure!(
                    r.count_pos == 0,
                    "{:?}: {} states with a nonpositive beta",
                    sys.net,
                    r.count_pos
                );
                empty += 1;
            }
            LogLinearOutcome::PositiveDimensional => {
                return Err("positive-dimensional with rank A = n".into())
            }
        }
    }
    ensure!(
        binomial_reduce(&system("0 -> A", &[q(1)])).is_err(),
        "single reaction accepted"
    );
    Ok(format!(
        "200 systems: {unique} unique points matched, {empty} empty"
    ))
}

fn invariant_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut built = 0;
    let mut descartes = 0;
    let mut jac = 0;
    while descartes < 1000 {
        let n = rng.random_range(1..=3);
        let bimolecular = built % 2 == 0;
        let Some(sys) = common::random_system(&mut rng, n, 6, if bimolecular { 2 } else { 3 })
        else {
            continue;
        };
        built += 1;
        ensure!(
            conservation_annihilates(&sys),
            "conservation fails for {:?}",
            sys.net
        );
        ensure!(
            check_mass_action_form(&sys.rhs),
            "not mass-action form: {:?}",
            sys.net
        );
        if jac < 300 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.25..4.0)).collect();
            let j = jacobian(&sys, &x).map_err(|e| e.to_string())?;
            let scale = j.amax().max(1.0);
            for l in 0..n {
                let h = 1e-6 * x[l];
                let (mut up, mut down) = (x.clone(), x.clone());
                up[l] += h;
                down[l] -= h;
                let (fu, fd) = (sys.eval(&up), sys.eval(&down));
                for i in 0..n {
                    let diff = (fu[i] - fd[i]) / (2.0 * h);
                    ensure!(
                        (diff - j[(i, l)]).abs() <= 1e-6 * scale,
                        "Jacobian entry ({i},{l}) of {:?}",
                        sys.net
                    );
                }
            }
            jac += 1;
        }
        if bimolecular {
            let values: Vec<Q> = (0..n - 1)
                .map(|_| q_frac(rng.random_range(1..50), rng.random_range(1..50)))
                .collect();
            for i in 0..n {
                let r = restrict_univariate(&sys, i, &values).map_err(|e| e.to_string())?;
                ensure!(
                    r.is_zero || r.sign_changes <= 1,
                    "{} sign changes in f{i} of {:?}",
                    r.sign_changes,
                    sys.net
                );
            }
            descartes += 1;
        }
    }
    let mut canon = 0;
    for net in enumerate_networks(EnumSpec::bimolecular(2, 3)).map_err(|e| e.to_string())? {
        let c = canonical_form(&net);
        ensure!(
            canonical_form(&canonical_network(&net)) == c,
            "canonical form not idempotent"
        );
        let swapped: Vec<_> = net
            .pairs()
            .into_iter()
            .map(|(a, b)| (vec![a[1], a[0]], vec![b[1], b[0]]))
            .collect();
        let relabeled = crnscope::network::ReactionNetwork::from_pairs(2, &swapped).unwrap();
        ensure!(
            canonical_form(&relabeled) == c,
            "relabeling changes the canonical form"
        );
        canon += 1;
    }
    Ok(format!(
        "{built} systems conserve exactly and have mass-action form, {jac} Jacobians, {descartes} Descartes cases, {canon} canonical forms"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden examples", golden_examples),
        ("three reversible reactions", three_reversible),
        ("conserved family", conserved_family),
        ("full-dimensional family", fulldim_family),
        ("degeneracy certificates", degenerate_varieties),
        ("deficiency predicates", deficiency_predicates),
        ("structural ACR formula", structural_acr_formula),
        ("audits", audits),
        ("oracle equivalence", oracle_equivalence),
        ("invariant suites", invariant_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS ({name}, {secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({name}, {secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
