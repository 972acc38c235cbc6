mod common;

use coded_switch::reduction::{extend_n, lift_solution, lsp_to_nkmtp, LspInstance};
use coded_switch::solvers::{solve_exact, ExactLimits};
use common::{brute_force_lstar, brute_force_packing};
use proptest::prelude::*;

fn lsp_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    proptest::collection::vec(proptest::sample::subsequence((1u64..=7).collect::<Vec<_>>(), 3), 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn reduction_preserves_answers(sets in lsp_strategy()) {
        let best = brute_force_packing(&sets);
        for m in 1..=sets.len() {
            let reduced = lsp_to_nkmtp(&LspInstance::new(3, sets.clone(), m), m).unwrap();
            let solved = solve_exact(&reduced.nkmtp, &ExactLimits::unlimited()).unwrap();
            prop_assert_eq!(best >= m, solved.optimal_count >= 2 * m);
            if solved.optimal_count >= 2 * m {
                let lifted = lift_solution(&reduced, &solved.plan).unwrap().unwrap();
                prop_assert!(lifted.len() >= m);
                let chosen: Vec<Vec<u64>> = lifted.iter().map(|&i| sets[i].clone()).collect();
                prop_assert_eq!(brute_force_packing(&chosen), chosen.len());
            }
        }
    }

    #[test]
    fn extension_preserves_answers(sets in proptest::collection::vec(
        proptest::sample::subsequence((1usize..=6).collect::<Vec<_>>(), 3), 1..=3)
    ) {
        let inst = coded_switch::SwitchInstance::new(6, 3, 3, sets);
        let before = brute_force_lstar(&inst);
        for m in 1..=inst.num_packets() {
            let (ext, target) = extend_n(&inst, m).unwrap();
            let after = solve_exact(&ext, &ExactLimits::unlimited()).unwrap().optimal_count;
            prop_assert_eq!(before >= m, after >= target);
        }
    }
}
