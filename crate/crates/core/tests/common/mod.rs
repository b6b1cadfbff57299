#![allow(dead_code)]

use gbsm_core::generators::{
    random_general, random_profit, unit_cost_instance, CostRanges, ProfitKind,
};
use gbsm_core::{BuiltinProfit, Instance, PartialSolution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const KINDS: [ProfitKind; 3] = [
    ProfitKind::Modular,
    ProfitKind::Coverage,
    ProfitKind::ConcaveModular,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn profit_for(seed: u64, n: usize) -> BuiltinProfit {
    random_profit(
        KINDS[(seed % 3) as usize],
        n,
        seed.wrapping_mul(31).wrapping_add(1),
    )
}

/// Unit-cost instances: n in 3..=8, m in 1..=3, k in [2, 10).
pub fn unit_corpus(count: u64, offset: u64) -> Vec<(Instance, BuiltinProfit)> {
    (offset..offset + count)
        .map(|seed| {
            let mut r = rng(seed);
            let n = r.gen_range(3..=8);
            let m = r.gen_range(1..=3);
            let k = r.gen_range(2.0..10.0);
            (
                unit_cost_instance(n, m, k, seed).unwrap(),
                profit_for(seed, n),
            )
        })
        .collect()
}

/// General instances: n in 3..=8, m in 1..=3, k in [1, 8), costs in [0, 3],
/// 10% forbidden pairs.
pub fn general_corpus(count: u64, offset: u64) -> Vec<(Instance, BuiltinProfit)> {
    (offset..offset + count)
        .map(|seed| {
            let mut r = rng(seed);
            let n = r.gen_range(3..=8);
            let m = r.gen_range(1..=3);
            let k = r.gen_range(1.0..8.0);
            let inst = random_general(n, m, k, CostRanges::default(), 0.1, seed).unwrap();
            (inst, profit_for(seed, n))
        })
        .collect()
}

/// Random consistent partial solution: each bin open with probability 0.4,
/// each element reachable through an open bin chosen with probability 0.3.
pub fn random_partial(
    instance: &Instance,
    profit: &BuiltinProfit,
    r: &mut impl Rng,
) -> PartialSolution {
    let bins: Vec<usize> = (0..instance.num_bins())
        .filter(|_| r.gen_bool(0.4))
        .collect();
    let elements: Vec<usize> = (0..instance.num_elements())
        .filter(|&x| r.gen_bool(0.3) && instance.cheapest_bin_for(&bins, x).is_some())
        .collect();
    PartialSolution::new(instance, profit, bins, elements).unwrap()
}

/// Uniform random subset of `0..n`.
pub fn random_subset(n: usize, p: f64, r: &mut impl Rng) -> Vec<usize> {
    (0..n).filter(|_| r.gen_bool(p)).collect()
}
