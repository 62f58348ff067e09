mod common;

use crnscope::steady::{
    log_linear_solve, same_point_tol, solve_in_class, LogLinearOutcome, SolveOptions,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn newton_agrees_with_the_log_linear_solution(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let case = common::oracle_case(&mut rng, n);
        prop_assume!(case.is_some());
        let (sys, red) = case.unwrap();
        let report = solve_in_class(&sys, &vec![1.0; n], SolveOptions::default()).unwrap();
        match log_linear_solve(&red) {
            LogLinearOutcome::Unique(x) => {
                prop_assert_eq!(report.count_pos, 1, "{:?} vs {:?}", x, report.states);
                prop_assert!(same_point_tol(&x, &report.states[0].point, 1e-8));
            }
            LogLinearOutcome::Empty => prop_assert_eq!(report.count_pos, 0),
            LogLinearOutcome::PositiveDimensional => unreachable!("rank A = n"),
        }
    }

    #[test]
    fn nonpositive_beta_means_empty(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let case = common::oracle_case(&mut rng, n);
        prop_assume!(case.is_some());
        let (_, red) = case.unwrap();
        let signs_ok = red.betas.iter().all(|b| *b > num_traits::Zero::zero());
        let outcome = log_linear_solve(&red);
        prop_assert_eq!(signs_ok, outcome != LogLinearOutcome::Empty);
    }
}
