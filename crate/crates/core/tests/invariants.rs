use crnscope::atlas::{canonical_form, canonical_network, complexes_up_to};
use crnscope::massaction::{
    build_system, conservation_annihilates, jacobian, restrict_univariate, MassActionSystem,
    RateAssignment,
};
use crnscope::network::ReactionNetwork;
use crnscope::rational::{q_frac, q_from_f64_sig};
use crnscope::realize::{check_mass_action_form, realize_network};
use crnscope::steady::{same_point, solve_in_class, ClassContext, SolveOptions};
use proptest::prelude::*;

fn network(max_mol: u32) -> impl Strategy<Value = ReactionNetwork> {
    (1usize..=3)
        .prop_flat_map(move |n| {
            let c = complexes_up_to(n, max_mol).len();
            (Just(n), prop::collection::vec((0..c, 0..c), 1..=5))
        })
        .prop_filter_map("invalid network", move |(n, idx)| {
            let complexes = complexes_up_to(n, max_mol);
            let mut pairs: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
            for (a, b) in idx {
                let p = (complexes[a].clone(), complexes[b].clone());
                if p.0 != p.1 && !pairs.contains(&p) {
                    pairs.push(p);
                }
            }
            ReactionNetwork::from_pairs(n, &pairs).ok()
        })
}

fn system(max_mol: u32) -> impl Strategy<Value = MassActionSystem> {
    network(max_mol).prop_flat_map(|net| {
        let r = net.r();
        (Just(net), prop::collection::vec(-2.0f64..2.0, r)).prop_map(|(net, exps)| {
            let rates: Vec<_> = exps
                .iter()
                .map(|e| q_from_f64_sig(10f64.powf(*e), 4))
                .collect();
            build_system(&net, &RateAssignment::positional(&net, &rates).unwrap()).unwrap()
        })
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.25f64..4.0, n)
}

proptest! {
    #[test]
    fn conservation_laws_annihilate_the_field(sys in system(3)) {
        prop_assert!(conservation_annihilates(&sys));
    }

    #[test]
    fn built_systems_have_mass_action_form(sys in system(3)) {
        prop_assert!(check_mass_action_form(&sys.rhs));
    }

    #[test]
    fn realization_reproduces_the_field(sys in system(2)) {
        let net = realize_network(&sys.rhs).unwrap();
        let rebuilt = build_system(&net, &RateAssignment::new()).unwrap();
        prop_assert_eq!(&rebuilt.rhs, &sys.rhs);
    }

    #[test]
    fn jacobian_matches_central_differences(sys in system(3), seed in point(3)) {
        let n = sys.n();
        let x = &seed[..n];
        let j = jacobian(&sys, x).unwrap();
        let scale = j.amax().max(1.0);
        for l in 0..n {
            let h = 1e-6 * x[l];
            let (mut up, mut down) = (x.to_vec(), x.to_vec());
            up[l] += h;
            down[l] -= h;
            let (fu, fd) = (sys.eval(&up), sys.eval(&down));
            for i in 0..n {
                let fdiff = (fu[i] - fd[i]) / (2.0 * h);
                prop_assert!((fdiff - j[(i, l)]).abs() <= 1e-6 * scale, "d f{i}/d x{l}: {} vs {}", fdiff, j[(i, l)]);
            }
        }
    }

    #[test]
    fn bimolecular_restrictions_change_sign_at_most_once(
        sys in system(2),
        fix in prop::collection::vec((1i64..40, 1i64..40), 2),
    ) {
        let values: Vec<_> = fix.iter().map(|&(a, b)| q_frac(a, b)).collect();
        for i in 0..sys.n() {
            let r = restrict_univariate(&sys, i, &values[..sys.n() - 1]).unwrap();
            prop_assert!(r.is_zero || r.sign_changes <= 1, "f{i}: {:?}", r.coeffs);
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_relabeling_invariant(net in network(2), shift in 0usize..3) {
        let canon = canonical_form(&net);
        prop_assert_eq!(canonical_form(&canonical_network(&net)), canon.clone());
        let n = net.n();
        let rotated: Vec<_> = net
            .pairs()
            .into_iter()
            .map(|(a, b)| {
                let rot = |c: &Vec<u32>| (0..n).map(|i| c[(i + shift) % n]).collect::<Vec<u32>>();
                (rot(&a), rot(&b))
            })
            .collect();
        let relabeled = ReactionNetwork::from_pairs(n, &rotated).unwrap();
        prop_assert_eq!(canonical_form(&relabeled), canon);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reported_states_are_positive_distinct_and_in_class(sys in system(2), anchor in point(3)) {
        let a = &anchor[..sys.n()];
        let opts = SolveOptions { budget: 24, ..SolveOptions::default() };
        let report = solve_in_class(&sys, a, opts).unwrap();
        let ctx = ClassContext::new(&sys.net);
        let totals = ctx.totals(a);
        for (i, s) in report.states.iter().enumerate() {
            prop_assert!(s.point.iter().all(|v| *v > 0.0));
            prop_assert!(sys.is_steady_state(&s.point));
            for (t, want) in ctx.totals(&s.point).iter().zip(&totals) {
                prop_assert!((t - want).abs() <= 1e-9 * want.abs().max(1.0));
            }
            for other in &report.states[i + 1..] {
                prop_assert!(!same_point(&s.point, &other.point));
            }
        }
        prop_assert_eq!(report.count_pos, report.states.len());
    }
}
