//! Exhaustive references used to certify the greedy guarantees on small
//! instances: global optimum, best gain/cost ratio over the candidate family,
//! the α-list check and the exact knapsack optimum.

use serde::{Deserialize, Serialize};

use crate::cost::{cheapest_attachment, family_cost, residual_bin_cost, CandidateSet};
use crate::error::{GbsmError, Result};
use crate::instance::{CostValue, Instance, COST_TOLERANCE};
use crate::list_expbudget::KnapsackProblem;
use crate::profit::ProfitOracle;
use crate::solution::PartialSolution;

/// Environment variable that lifts the enumeration guards.
pub const GUARD_OVERRIDE_ENV: &str = "GBSM_GUARD_OVERRIDE";

/// Size guards for the exponential enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    /// Bound on `n + m` for [`brute_force_opt`].
    pub max_opt: usize,
    /// Bound on the number of enumerated elements for the ratio and knapsack oracles.
    pub max_subset: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_opt: 22,
            max_subset: 16,
        }
    }
}

impl Guards {
    /// Hard limit of 63 keeps subset masks in a `u64`.
    pub const UNGUARDED: Guards = Guards {
        max_opt: 63,
        max_subset: 63,
    };

    /// Defaults, or no guards when [`GUARD_OVERRIDE_ENV`] is set to a
    /// non-empty value other than `0`.
    pub fn from_env() -> Self {
        match std::env::var(GUARD_OVERRIDE_ENV) {
            Ok(v) if !v.is_empty() && v != "0" => Guards::UNGUARDED,
            _ => Guards::default(),
        }
    }

    fn check(what: &'static str, size: usize, limit: usize) -> Result<()> {
        if size > limit.min(63) {
            Err(GbsmError::TooLarge { what, size, limit })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactOptimum {
    pub bins: Vec<usize>,
    pub elements: Vec<usize>,
    pub profit: f64,
    pub cost: f64,
}

fn mask_to_set(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|i| mask >> i & 1 == 1).collect()
}

/// Maximizer of `f(X')` over all `(S', X')` with `c(S', X') ≤ budget_cap`,
/// lexicographically smallest `(S', X')` among equal profits.
pub fn brute_force_opt<O: ProfitOracle + ?Sized>(
    instance: &Instance,
    oracle: &O,
    budget_cap: f64,
    guards: Guards,
) -> Result<ExactOptimum> {
    let m = instance.num_bins();
    let n = instance.num_elements();
    Guards::check("n + m", n + m, guards.max_opt)?;

    let element_sets: Vec<(Vec<usize>, f64)> = (0..1u64 << n)
        .map(|mask| {
            let set = mask_to_set(mask, n);
            let value = oracle.value(&set);
            (set, value)
        })
        .collect();

    let mut best: Option<ExactOptimum> = None;
    for bin_mask in 0..1u64 << m {
        let bins = mask_to_set(bin_mask, m);
        let opening: f64 = bins
            .iter()
            .map(|&s| instance.bin_cost(s))
            .fold(0.0, |a, c| a + c);
        if opening > budget_cap + COST_TOLERANCE {
            continue;
        }
        let per_element: Vec<Option<f64>> = (0..n)
            .map(|x| instance.cheapest_bin_for(&bins, x).map(|(_, c)| c))
            .collect();
        'sets: for (set, value) in &element_sets {
            let mut cost = opening;
            for &x in set {
                match per_element[x] {
                    Some(c) => cost += c,
                    None => continue 'sets,
                }
            }
            if cost > budget_cap + COST_TOLERANCE {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    *value > b.profit
                        || (*value == b.profit && (&bins, set) < (&b.bins, &b.elements))
                }
            };
            if better {
                best = Some(ExactOptimum {
                    bins: bins.clone(),
                    elements: set.clone(),
                    profit: *value,
                    cost,
                });
            }
        }
    }
    Ok(best.expect("(∅, ∅) is always feasible"))
}

/// `max { g(T)/c_min(T) : T ∈ F, c_min(T) > 0 }` with one maximizer
/// (the first in mask order among exact ties).
pub fn exact_best_ratio<O: ProfitOracle + ?Sized>(
    instance: &Instance,
    oracle: &O,
    partial: &PartialSolution,
    guards: Guards,
) -> Result<(CandidateSet, f64)> {
    let remaining = partial.remaining(instance);
    Guards::check("|X \\ X'|", remaining.len(), guards.max_subset)?;
    let k = instance.budget();
    let mut best: Option<(CandidateSet, f64)> = None;
    for mask in 1u64..1u64 << remaining.len() {
        let set: Vec<usize> = mask_to_set(mask, remaining.len())
            .into_iter()
            .map(|i| remaining[i])
            .collect();
        let Some((s_min, c_min)) = cheapest_attachment(instance, partial, &set) else {
            continue;
        };
        if c_min <= 0.0 {
            continue;
        }
        let candidate = CandidateSet {
            gain: oracle.marginal_gain(partial.elements(), &set),
            c_bar: c_min - residual_bin_cost(instance, partial, s_min),
            elements: set,
            c_min,
            s_min,
        };
        if !family_cost(instance, partial, &candidate).fits(k) {
            continue;
        }
        let ratio = candidate.ratio();
        if best.as_ref().is_none_or(|(_, r)| ratio > *r) {
            best = Some((candidate, ratio));
        }
    }
    best.ok_or(GbsmError::NoCandidate)
}

/// Best `g/c_min` over the list entries with positive marginal cost.
pub fn best_list_ratio(list: &[CandidateSet]) -> Option<f64> {
    list.iter()
        .filter(|c| c.c_min > 0.0)
        .map(CandidateSet::ratio)
        .max_by(f64::total_cmp)
}

/// `true` iff the list's best ratio is at least `alpha` times the exact best
/// ratio (minus `1e-9`). Vacuously true when the family is empty.
pub fn verify_alpha_list<O: ProfitOracle + ?Sized>(
    list: &[CandidateSet],
    instance: &Instance,
    oracle: &O,
    partial: &PartialSolution,
    alpha: f64,
    guards: Guards,
) -> Result<bool> {
    let exact = match exact_best_ratio(instance, oracle, partial, guards) {
        Ok((_, r)) => r,
        Err(GbsmError::NoCandidate) => return Ok(true),
        Err(e) => return Err(e),
    };
    let got = best_list_ratio(list).unwrap_or(0.0);
    Ok(got >= alpha * exact - 1e-9)
}

/// Exact optimum of the knapsack-constrained gain maximization.
pub fn brute_force_knapsack(
    problem: &KnapsackProblem<'_>,
    guards: Guards,
) -> Result<(Vec<usize>, f64)> {
    let n = problem.ground.len();
    Guards::check("|ground|", n, guards.max_subset)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    'sets: for mask in 0u64..1u64 << n {
        let positions = mask_to_set(mask, n);
        let mut cost = 0.0;
        for &i in &positions {
            match problem.costs[i] {
                CostValue::Finite(c) => cost += c,
                CostValue::Forbidden => continue 'sets,
            }
        }
        if cost > problem.budget + COST_TOLERANCE {
            continue;
        }
        let set: Vec<usize> = positions.iter().map(|&i| problem.ground[i]).collect();
        let gain = (problem.gain)(&set);
        let better = match &best {
            None => true,
            Some((bs, bg)) => gain > *bg || (gain == *bg && set < *bs),
        };
        if better {
            best = Some((set, gain));
        }
    }
    // a negative budget admits nothing, not even ∅ with zero cost
    Ok(best.unwrap_or_else(|| (Vec::new(), (problem.gain)(&[]))))
}
