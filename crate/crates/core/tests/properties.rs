mod common;

use common::*;
use gbsm_core::cost::{cheapest_attachment, marginal_cost, residual_bin_cost};
use gbsm_core::exact::{brute_force_knapsack, brute_force_opt, exact_best_ratio, Guards};
use gbsm_core::generators::{bmc_instance, sfkc_instance};
use gbsm_core::instance::solution_cost;
use gbsm_core::io::{read_instance, write_instance};
use gbsm_core::list_expbudget::KnapsackProblem;
use gbsm_core::profit::{Modular, ProfitOracle};
use gbsm_core::solver::{approximation_bound, solve, ListBuilder, SolverConfig};
use gbsm_core::{CostValue, Instance, PartialSolution, SolveStatus};
use proptest::prelude::*;
use rand::Rng;

fn configs() -> Vec<SolverConfig> {
    vec![
        SolverConfig::new(1.0, ListBuilder::Enum { epsilon: 0.5 }).unwrap(),
        SolverConfig::new(
            1.0,
            ListBuilder::ExpBudget {
                epsilon: 0.2,
                depth: 3,
            },
        )
        .unwrap(),
        SolverConfig::new(
            1.5,
            ListBuilder::ExpBudget {
                epsilon: 0.3,
                depth: 1,
            },
        )
        .unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cost_monotone_in_elements(seed in 0u64..10_000, p in 0.1f64..0.9) {
        let (inst, _) = general_corpus(1, seed).pop().unwrap();
        let mut r = rng(seed);
        let bins = random_subset(inst.num_bins(), 0.6, &mut r);
        let small = random_subset(inst.num_elements(), p, &mut r);
        let extra = random_subset(inst.num_elements(), p, &mut r);
        let big = gbsm_core::profit::sorted_union(&small, &extra);
        prop_assert!(solution_cost(&inst, &bins, &small) <= solution_cost(&inst, &bins, &big));
    }

    #[test]
    fn more_bins_lower_element_minima(seed in 0u64..10_000) {
        let (inst, _) = general_corpus(1, seed).pop().unwrap();
        let mut r = rng(seed ^ 0xabc);
        let few = random_subset(inst.num_bins(), 0.5, &mut r);
        let more = gbsm_core::profit::sorted_union(&few, &random_subset(inst.num_bins(), 0.5, &mut r));
        let elements = random_subset(inst.num_elements(), 0.5, &mut r);
        let opening = |b: &[usize]| b.iter().map(|&s| inst.bin_cost(s)).sum::<f64>();
        let part = |b: &[usize]| solution_cost(&inst, b, &elements) + (-opening(b));
        prop_assert!(part(&more) <= part(&few) + 1e-9);
        let extra: Vec<usize> = more.iter().copied().filter(|s| !few.contains(s)).collect();
        prop_assert!((opening(&more) - opening(&few) - opening(&extra)).abs() < 1e-9);
    }

    #[test]
    fn marginal_cost_is_minimal_over_bins(seed in 0u64..10_000) {
        let (inst, f) = general_corpus(1, seed).pop().unwrap();
        let mut r = rng(seed + 17);
        let partial = random_partial(&inst, &f, &mut r);
        let remaining = partial.remaining(&inst);
        let t: Vec<usize> = remaining.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
        prop_assume!(!t.is_empty());
        match marginal_cost(&inst, &f, &partial, &t) {
            Ok(c) => {
                for s in 0..inst.num_bins() {
                    let direct = t.iter().fold(CostValue::Finite(residual_bin_cost(&inst, &partial, s)), |a, &x| a + inst.assign_cost(s, x));
                    prop_assert!(CostValue::Finite(c.c_min) <= direct);
                }
                prop_assert!((c.c_bar - (c.c_min - residual_bin_cost(&inst, &partial, c.s_min))).abs() < 1e-12);
                prop_assert!(c.c_bar >= 0.0);
                let gain = f.value(&gbsm_core::profit::sorted_union(partial.elements(), &t)) - f.value(partial.elements());
                prop_assert!((c.gain - gain).abs() < 1e-12);
            }
            Err(_) => {
                for s in 0..inst.num_bins() {
                    prop_assert!(t.iter().any(|&x| !inst.assign_cost(s, x).is_finite()));
                }
            }
        }
    }

    #[test]
    fn opening_bins_never_raises_c_min(seed in 0u64..10_000) {
        let (inst, f) = general_corpus(1, seed).pop().unwrap();
        let mut r = rng(seed + 5);
        let few = random_subset(inst.num_bins(), 0.4, &mut r);
        let more = gbsm_core::profit::sorted_union(&few, &random_subset(inst.num_bins(), 0.5, &mut r));
        let p1 = PartialSolution::new(&inst, &f, few, vec![]).unwrap();
        let p2 = PartialSolution::new(&inst, &f, more, vec![]).unwrap();
        let t = random_subset(inst.num_elements(), 0.4, &mut r);
        prop_assume!(!t.is_empty());
        let a = cheapest_attachment(&inst, &p1, &t).map(|x| x.1);
        let b = cheapest_attachment(&inst, &p2, &t).map(|x| x.1);
        if let Some(a) = a {
            prop_assert!(b.unwrap() <= a);
        }
    }

    #[test]
    fn json_round_trip_solves_identically(seed in 0u64..10_000) {
        let (inst, f) = general_corpus(1, seed).pop().unwrap();
        let (back, g) = read_instance(&write_instance(&inst, &f)).unwrap();
        prop_assert_eq!(&back, &inst);
        let cfg = SolverConfig::new(1.0, ListBuilder::ExpBudget { epsilon: 0.2, depth: 1 }).unwrap();
        prop_assert_eq!(solve(&inst, &f, &cfg).unwrap(), solve(&back, &g, &cfg).unwrap());
    }
}

/// Opens zero-cost bins and absorbs free elements exactly as the solver's
/// preprocessing does, without going through it.
fn absorb(inst: &Instance, f: &dyn ProfitOracle, p: PartialSolution) -> PartialSolution {
    let free: Vec<usize> = p
        .remaining(inst)
        .into_iter()
        .filter(|&x| {
            p.bins()
                .iter()
                .any(|&s| inst.assign_cost(s, x) == CostValue::ZERO)
        })
        .collect();
    p.with_added(inst, f, None, &free).unwrap()
}

#[test]
fn solver_runs_respect_structural_invariants() {
    let mut corpus = unit_corpus(60, 1000);
    corpus.extend(general_corpus(60, 2000));
    for (inst, f) in &corpus {
        for cfg in configs() {
            let (sol, report) = solve(inst, f, &cfg).unwrap();
            let cap = cfg.beta * inst.budget();
            assert!(sol.cost() <= cap + 1e-9);
            assert!(
                (solution_cost(inst, sol.partial.bins(), sol.partial.elements())
                    .finite()
                    .unwrap()
                    - sol.cost())
                .abs()
                    < 1e-9
            );
            assert!(report.iterations.len() <= inst.num_elements());
            let mut last = 0.0;
            let zero_bins: Vec<usize> = (0..inst.num_bins())
                .filter(|&s| inst.bin_cost(s) == 0.0)
                .collect();
            let mut partial = absorb(
                inst,
                f,
                PartialSolution::new(inst, f, zero_bins, vec![]).unwrap(),
            );
            for it in &report.iterations {
                assert!(it.cost >= last);
                assert!(it.cost <= cap + 1e-9);
                assert!(!it.chosen.is_empty());
                last = it.cost;
                // every nonempty T outside X' has positive marginal cost here
                let remaining = partial.remaining(inst);
                for mask in 1u32..1 << remaining.len() {
                    let t: Vec<usize> = (0..remaining.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| remaining[i])
                        .collect();
                    if let Some((_, c)) = cheapest_attachment(inst, &partial, &t) {
                        assert!(c > 0.0);
                    }
                }
                assert!(it.chosen.iter().all(|x| !partial.contains_element(*x)));
                partial = absorb(
                    inst,
                    f,
                    partial
                        .with_added(inst, f, Some(it.bin), &it.chosen)
                        .unwrap(),
                );
            }
            if let Some(d) = &report.discarded {
                assert!(d.fallback_cost <= inst.budget() + 1e-9);
                assert!(d.rejected_cost > cap);
            }
            let opt = brute_force_opt(inst, f, inst.budget(), Guards::default()).unwrap();
            if cfg.beta == 1.0 {
                assert!(opt.profit + 1e-9 >= sol.profit());
            }
        }
    }
}

#[test]
fn sfkc_optimum_matches_knapsack_oracle() {
    for seed in 0..100u64 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=8);
        let costs: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..3.0)).collect();
        let k = r.gen_range(0.0..8.0);
        let f = profit_for(seed, n);
        let inst = sfkc_instance(&costs, k).unwrap();
        let opt = brute_force_opt(&inst, &f, k, Guards::default()).unwrap();
        let gain = |s: &[usize]| f.value(s);
        let problem = KnapsackProblem::new(
            (0..n).collect(),
            costs.iter().map(|&c| CostValue::Finite(c)).collect(),
            k,
            &gain,
        )
        .unwrap();
        let (_, best) = brute_force_knapsack(&problem, Guards::default()).unwrap();
        assert!((opt.profit - best).abs() < 1e-9);
        if k >= costs.iter().sum::<f64>() {
            assert!((opt.profit - f.value(&(0..n).collect::<Vec<_>>())).abs() < 1e-9);
        }
    }
    let inst = sfkc_instance(&[1.0, 2.0], 0.0).unwrap();
    let f = Modular::new(vec![1.0, 1.0]).unwrap();
    assert!(brute_force_opt(&inst, &f, 0.0, Guards::default())
        .unwrap()
        .elements
        .is_empty());
}

#[test]
fn best_ratio_matches_knapsack_ratios_on_single_free_bin() {
    for seed in 0..100u64 {
        let mut r = rng(seed + 500);
        let n = r.gen_range(1..=7);
        let costs: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..3.0)).collect();
        let k = r.gen_range(0.5..8.0);
        let f = profit_for(seed, n);
        let inst = sfkc_instance(&costs, k).unwrap();
        let gain = |s: &[usize]| f.value(s);
        let problem_at = |b: f64| {
            KnapsackProblem::new(
                (0..n).collect(),
                costs.iter().map(|&c| CostValue::Finite(c)).collect(),
                b,
                &gain,
            )
            .unwrap()
        };
        // max over subset costs B ≤ k of knapsack(B)/B equals the best ratio
        let mut via_knapsack: f64 = 0.0;
        for mask in 1u32..1 << n {
            let b: f64 = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| costs[i])
                .sum();
            if b <= k + 1e-9 {
                let (_, g) = brute_force_knapsack(&problem_at(b), Guards::default()).unwrap();
                via_knapsack = via_knapsack.max(g / b);
            }
        }
        match exact_best_ratio(&inst, &f, &PartialSolution::empty(&f), Guards::default()) {
            Ok((_, ratio)) => assert!(
                (ratio - via_knapsack).abs() < 1e-9,
                "seed {seed}: {ratio} vs {via_knapsack}"
            ),
            Err(_) => assert_eq!(via_knapsack, 0.0),
        }
    }
}

#[test]
fn bmc_reduction_optimum_and_solver() {
    let (inst, f) =
        bmc_instance(&[(1.0, vec![0, 1, 2]), (1.0, vec![3, 4])], &[1.0; 5], 1.0).unwrap();
    assert_eq!(
        brute_force_opt(&inst, &f, 1.0, Guards::default())
            .unwrap()
            .profit,
        3.0
    );
    let rich = inst.with_budget(2.0).unwrap();
    assert_eq!(
        brute_force_opt(&rich, &f, 2.0, Guards::default())
            .unwrap()
            .profit,
        5.0
    );
    let poor = inst.with_budget(0.5).unwrap();
    let cfg = SolverConfig::new(
        1.0,
        ListBuilder::ExpBudget {
            epsilon: 0.2,
            depth: 3,
        },
    )
    .unwrap();
    assert_eq!(
        solve(&poor, &f, &cfg).unwrap().0.status,
        SolveStatus::EmptyInfeasible
    );

    // random BMC instances stay within the bound
    for seed in 0..60u64 {
        let mut r = rng(seed + 900);
        let items = r.gen_range(2..=8);
        let sets: Vec<(f64, Vec<usize>)> = (0..r.gen_range(1..=3))
            .map(|_| (r.gen_range(0.5..3.0), random_subset(items, 0.5, &mut r)))
            .collect();
        let weights: Vec<f64> = (0..items).map(|_| r.gen_range(0.0..5.0)).collect();
        let (inst, f) = bmc_instance(&sets, &weights, r.gen_range(0.5..5.0)).unwrap();
        let opt = brute_force_opt(&inst, &f, inst.budget(), Guards::default()).unwrap();
        for cfg in configs().into_iter().filter(|c| c.beta == 1.0) {
            let (sol, _) = solve(&inst, &f, &cfg).unwrap();
            assert!(sol.cost() <= inst.budget() + 1e-9);
            assert!(sol.profit() >= approximation_bound(cfg.list.alpha(), 1.0) * opt.profit - 1e-9);
        }
    }
}

#[test]
fn sfkc_solver_within_bound() {
    for seed in 0..100u64 {
        let mut r = rng(seed + 77);
        let n = r.gen_range(2..=8);
        let costs: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..3.0)).collect();
        let inst = sfkc_instance(&costs, r.gen_range(0.5..6.0)).unwrap();
        let f = profit_for(seed, n);
        let opt = brute_force_opt(&inst, &f, inst.budget(), Guards::default()).unwrap();
        let cfg = SolverConfig::new(
            1.0,
            ListBuilder::ExpBudget {
                epsilon: 0.2,
                depth: 3,
            },
        )
        .unwrap();
        let (sol, _) = solve(&inst, &f, &cfg).unwrap();
        assert!(sol.profit() >= approximation_bound(cfg.list.alpha(), 1.0) * opt.profit - 1e-9);
    }
}
