//! Candidate list by exhaustive enumeration of small subsets.
//!
//! When every bin satisfies the cost condition checked by
//! [`check_condition`], the subsets of size at most `⌈1/ε⌉` contain a set whose
//! gain/cost ratio is within `1 − ε` of the best ratio over the whole
//! candidate family.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cost::{cheapest_attachment, feasible_extension, residual_bin_cost, CandidateSet};
use crate::error::{GbsmError, Result};
use crate::instance::{Instance, COST_TOLERANCE};
use crate::profit::ProfitOracle;
use crate::solution::PartialSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumListConfig {
    epsilon: f64,
    max_size: usize,
}

impl EnumListConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(EnumListConfig {
            epsilon,
            max_size: max_subset_size(epsilon),
        })
    }

    /// Enumerates subsets up to `max_size` directly (`ε = 1/max_size`).
    pub fn with_max_size(max_size: usize) -> Result<Self> {
        if max_size == 0 {
            return Err(GbsmError::InvalidParameter(
                "subset size must be at least 1".into(),
            ));
        }
        Ok(EnumListConfig {
            epsilon: 1.0 / max_size as f64,
            max_size,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Largest enumerated subset size, `⌈1/ε⌉`.
    pub fn max_size(&self) -> usize {
        self.max_size
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(GbsmError::InvalidParameter(format!(
            "epsilon {epsilon} not in (0, 1)"
        )))
    }
}

/// `⌈1/ε⌉`, computed so that e.g. `ε = 0.2` gives 5 rather than 6.
pub fn max_subset_size(epsilon: f64) -> usize {
    ((1.0 / epsilon) - 1e-9).ceil().max(1.0) as usize
}

/// `true` iff for every bin the `q = ⌈1/ε⌉` cheapest finite assignment costs
/// add up to at least `c(s)/ε`. Bins with fewer than `q` finite entries pass.
pub fn check_condition(instance: &Instance, epsilon: f64) -> Result<bool> {
    check_epsilon(epsilon)?;
    let q = max_subset_size(epsilon);
    Ok((0..instance.num_bins()).all(|s| {
        let mut costs: Vec<f64> = instance
            .assign_row(s)
            .iter()
            .filter_map(|c| c.finite())
            .collect();
        if costs.len() < q {
            return true;
        }
        costs.sort_by(f64::total_cmp);
        let smallest: f64 = costs[..q].iter().sum();
        smallest + COST_TOLERANCE >= instance.bin_cost(s) / epsilon
    }))
}

/// Every nonempty `T ⊆ X \ X'` with `|T| ≤ ⌈1/ε⌉`, positive marginal cost and
/// `c(S' ∪ {s_min(T)}, T) ≤ k`, ordered by size and then lexicographically.
pub fn build_enum_list<O: ProfitOracle + ?Sized>(
    instance: &Instance,
    oracle: &O,
    partial: &PartialSolution,
    config: &EnumListConfig,
) -> Vec<CandidateSet> {
    let remaining = partial.remaining(instance);
    let budget = instance.budget();
    let mut list = Vec::new();
    for size in 1..=config.max_size().min(remaining.len()) {
        for set in remaining.iter().copied().combinations(size) {
            let Some((s_min, c_min)) = cheapest_attachment(instance, partial, &set) else {
                continue;
            };
            if c_min <= 0.0 {
                continue;
            }
            let candidate = CandidateSet {
                c_bar: c_min - residual_bin_cost(instance, partial, s_min),
                gain: oracle.marginal_gain(partial.elements(), &set),
                elements: set,
                c_min,
                s_min,
            };
            if feasible_extension(instance, partial, &candidate, budget) {
                list.push(candidate);
            }
        }
    }
    list
}

/// `Σ_{j=1..q} C(n, j)`: the number of subsets the builder can return.
pub fn enum_list_size_bound(n: usize, q: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for j in 1..=q.min(n) {
        binom = binom * (n - j + 1) as u128 / j as u128;
        total += binom;
    }
    total
}
