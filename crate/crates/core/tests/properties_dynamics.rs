//! Property tests for kernels, processes, entropy production, E-bound
//! structure and reproducibility graphs.

use micromacro::build::inverse;
use micromacro::ebound::{double_cover_report, reaching_system, s_stability_check, structure_report};
use micromacro::entropy::{macro_measure, total_entropy};
use micromacro::markov::{
    classes_by_join, classes_by_reachability, entropy_monotonicity, kernel, kernel_checks, kernel_power,
    lifted_checks, reverse_kernel,
};
use micromacro::process::{cylinder_prob, marginal, periodicity_check};
use micromacro::produce::{fluctuation_check, production_identities, return_time_check, sigma};
use micromacro::repro::{epsilon_repro, repro_graph};
use micromacro::sample::{
    random_distribution, random_permutation, random_reversible, random_system, rng, LabelSymmetry,
};
use micromacro::{ratio, Budget, MacroDistribution, System};
use proptest::prelude::*;
use rand::Rng;

fn sorted(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kernel_is_stochastic_and_fixes_p(seed in any::<u64>()) {
        let s = random_system(&mut rng(seed), 12);
        let t = kernel(&s);
        prop_assert!(t.rows_sum_to_one());
        let p = macro_measure(&s).1;
        prop_assert_eq!(t.apply(&p), p);
        prop_assert!(kernel_checks(&s).all_hold());
        prop_assert!(lifted_checks(&s).all_hold());
    }

    #[test]
    fn total_entropy_never_decreases(seed in any::<u64>()) {
        let mut g = rng(seed);
        let s = random_system(&mut g, 12);
        let q = random_distribution(&mut g, s.k());
        let next = kernel(&s).apply(&q);
        prop_assert!(total_entropy(&s, &next) >= total_entropy(&s, &q));
        let trace = entropy_monotonicity(&s, &q, 4);
        prop_assert!(trace.checks.all_hold(), "{}", trace.checks);
    }

    #[test]
    fn communication_classes_agree(seed in any::<u64>()) {
        let s = random_system(&mut rng(seed), 12);
        prop_assert_eq!(sorted(classes_by_reachability(&kernel(&s))), sorted(classes_by_join(&s)));
    }

    #[test]
    fn reverse_kernel_is_inverse_kernel(seed in any::<u64>()) {
        let s = random_system(&mut rng(seed), 12);
        let rep = reverse_kernel(&s);
        prop_assert!(rep.checks.all_hold(), "{}", rep.checks);
        prop_assert_eq!(rep.kernel, kernel(&inverse(&s)));
    }

    #[test]
    fn cylinders_are_consistent(seed in any::<u64>()) {
        let mut g = rng(seed);
        let s = random_system(&mut g, 10);
        let q = random_distribution(&mut g, s.k());
        let len = g.gen_range(1..=4);
        let word: Vec<usize> = (0..len).map(|_| g.gen_range(0..s.k())).collect();
        let extended: micromacro::Rational = (0..s.k())
            .map(|b| {
                let mut w = word.clone();
                w.push(b);
                cylinder_prob(&s, &q, &w)
            })
            .sum();
        prop_assert_eq!(extended, cylinder_prob(&s, &q, &word));
        let n = g.gen_range(0..6u64);
        prop_assert_eq!(marginal(&s, &q, n), kernel_power(&s, n).apply(&q));
        prop_assert!(periodicity_check(&s, &q, 2).all_hold());
    }

    #[test]
    fn production_identities_hold(seed in any::<u64>()) {
        let mut g = rng(seed);
        let s = random_system(&mut g, 10);
        let q = random_distribution(&mut g, s.k());
        let n = g.gen_range(1..=4);
        prop_assert!(production_identities(&s, &q, n).all_hold());
        let rep = return_time_check(&s, &q, &Budget::default()).unwrap();
        prop_assert!(rep.checks.all_hold(), "{}", rep.checks);
    }

    #[test]
    fn fluctuation_identity_on_reversible_systems(seed in any::<u64>(), equivariant in any::<bool>(), n in 1usize..=3) {
        let mode = if equivariant { LabelSymmetry::Equivariant } else { LabelSymmetry::Invariant };
        let s = random_reversible(&mut rng(seed), 12, mode);
        let r = s.reversion().unwrap();
        let phi: Vec<usize> = s.alpha_power(n as u64).iter().map(|&x| r[x]).collect();
        for i in 0..s.n() {
            prop_assert_eq!(sigma(&s, phi[i], n).ratio, sigma(&s, i, n).ratio.recip());
        }
        let rep = fluctuation_check(&s, &MacroDistribution::uniform(s.k()), n).unwrap();
        prop_assert!(rep.checks.all_hold(), "{}", rep.checks);
    }

    #[test]
    fn ebound_structure(seed in any::<u64>()) {
        let mut g = rng(seed);
        let n = g.gen_range(1..=12);
        let alpha = random_permutation(&mut g, n);
        let s = System::new(alpha, vec![0; n]).unwrap();
        let mut e: Vec<usize> = Vec::new();
        for cycle in s.cycles() {
            let must = cycle[g.gen_range(0..cycle.len())];
            e.extend(cycle.iter().copied().filter(|&x| x == must || g.gen_bool(0.4)));
        }
        e.sort_unstable();
        let rs = reaching_system(&s, &e).unwrap();
        let levels = rs.level_sizes().to_vec();
        prop_assert!(levels.windows(2).all(|w| w[0] >= w[1]));
        let report = structure_report(&rs);
        prop_assert!(report.checks.all_hold(), "{}", report.checks);
        for duration in 0..=rs.top() + 1 {
            let st = s_stability_check(&rs, duration);
            prop_assert!(st.checks.all_hold(), "{}", st.checks);
        }
        let cover = double_cover_report(&rs).unwrap();
        prop_assert!(cover.checks.all_hold(), "{}", cover.checks);
    }

    #[test]
    fn reproducibility_graph(seed in any::<u64>()) {
        let s = random_system(&mut rng(seed), 12);
        let graph = repro_graph(&s);
        prop_assert!(graph.checks.all_hold(), "{}", graph.checks);
        for eps in [ratio(1, 10), ratio(1, 3), ratio(49, 100)] {
            let rep = epsilon_repro(&s, &eps).unwrap();
            prop_assert!(rep.checks.all_hold(), "{}", rep.checks);
        }
    }
}
