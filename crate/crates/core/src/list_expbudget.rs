//! Candidate list from knapsack-constrained greedy runs over a geometric
//! budget ladder.
//!
//! For every bin `s` and every budget level `B_i` of the ladder
//! `ĉ, ĉ(1+ε), ĉ(1+ε)², … < k, k`, [`greedy_max_cover`] maximizes the marginal
//! gain over `X \ X'` with item costs `c(s, ·)` and budget `B_i − c_{S'}(s)`.
//! With enumeration depth 3 each run is a `(1 − 1/e)`-approximation, which
//! makes the list a `(1 − 1/e)(1 − ε)`-list.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cost::{cheapest_attachment, feasible_extension, residual_bin_cost, CandidateSet};
use crate::error::{GbsmError, Result};
use crate::instance::{CostValue, Instance, COST_TOLERANCE};
use crate::list_enum::check_epsilon;
use crate::profit::ProfitOracle;
use crate::solution::PartialSolution;

/// Default partial-enumeration depth of [`greedy_max_cover`].
pub const DEFAULT_DEPTH: usize = 3;

/// Budget levels `B_0 = ĉ`, `B_i = (1+ε)·B_{i−1}` while `B_i < k`, then `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetLadder {
    c_hat: f64,
    epsilon: f64,
    levels: Vec<f64>,
}

impl BudgetLadder {
    pub fn new(c_hat: f64, epsilon: f64, budget: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(c_hat > 0.0 && c_hat.is_finite()) {
            return Err(GbsmError::InvalidParameter(format!(
                "ĉ = {c_hat} must be positive"
            )));
        }
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(GbsmError::InvalidParameter(format!(
                "budget {budget} must be non-negative"
            )));
        }
        let mut levels = Vec::new();
        let mut level = c_hat;
        while level < budget {
            levels.push(level);
            level *= 1.0 + epsilon;
        }
        levels.push(budget);
        Ok(BudgetLadder {
            c_hat,
            epsilon,
            levels,
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn c_hat(&self) -> f64 {
        self.c_hat
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Number of geometric levels minus one, i.e. `len − 2`.
    pub fn q(&self) -> isize {
        self.levels.len() as isize - 2
    }

    /// Smallest level that is at least `target`.
    pub fn level_for(&self, target: f64) -> Option<f64> {
        self.levels.iter().copied().find(|&b| b >= target)
    }
}

/// `ĉ`: the smallest strictly positive bin or finite assignment cost.
pub fn min_positive_cost(instance: &Instance) -> Result<f64> {
    let bins = instance.bin_costs().iter().copied();
    let assigns = (0..instance.num_bins())
        .flat_map(|s| instance.assign_row(s).iter().filter_map(|c| c.finite()));
    bins.chain(assigns)
        .filter(|&c| c > 0.0)
        .min_by(f64::total_cmp)
        .ok_or(GbsmError::AllCostsZero)
}

/// Monotone submodular maximization under one knapsack constraint.
///
/// `ground` is sorted; `costs[i]` is the cost of `ground[i]`. `gain` is
/// evaluated on sorted subsets of `ground`.
pub struct KnapsackProblem<'a> {
    pub ground: Vec<usize>,
    pub costs: Vec<CostValue>,
    pub budget: f64,
    pub gain: &'a (dyn Fn(&[usize]) -> f64 + Sync),
}

impl<'a> KnapsackProblem<'a> {
    pub fn new(
        ground: Vec<usize>,
        costs: Vec<CostValue>,
        budget: f64,
        gain: &'a (dyn Fn(&[usize]) -> f64 + Sync),
    ) -> Result<Self> {
        if ground.len() != costs.len() {
            return Err(GbsmError::InvalidParameter(format!(
                "{} ground elements but {} costs",
                ground.len(),
                costs.len()
            )));
        }
        if ground.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GbsmError::InvalidParameter(
                "ground set must be sorted and duplicate-free".into(),
            ));
        }
        Ok(KnapsackProblem {
            ground,
            costs,
            budget,
            gain,
        })
    }

    /// Total cost of a set of positions into `ground`.
    fn positions_cost(&self, positions: &[usize]) -> f64 {
        positions
            .iter()
            .map(|&i| {
                self.costs[i]
                    .finite()
                    .expect("only finite items are selectable")
            })
            .fold(0.0, |a, c| a + c)
    }
}

/// Partial enumeration plus density greedy.
///
/// Every affordable seed of at most `depth` positive-cost items is completed
/// greedily by the affordable item with the best marginal gain per unit cost
/// (smallest index on ties) until no affordable item adds positive gain.
/// Zero-cost items are taken up front. The best completion by gain wins,
/// lexicographically smallest on ties. A negative budget yields `∅`.
pub fn greedy_max_cover(problem: &KnapsackProblem<'_>, depth: usize) -> Result<Vec<usize>> {
    if depth == 0 {
        return Err(GbsmError::InvalidParameter(
            "enumeration depth must be at least 1".into(),
        ));
    }
    let budget = problem.budget;
    if budget < -COST_TOLERANCE {
        return Ok(Vec::new());
    }
    let mut free = Vec::new();
    let mut paid = Vec::new();
    for (i, c) in problem.costs.iter().enumerate() {
        match c.finite() {
            Some(v) if v <= 0.0 => free.push(i),
            Some(v) if v <= budget + COST_TOLERANCE => paid.push(i),
            _ => {}
        }
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    for size in 0..=depth.min(paid.len()) {
        for seed in paid.iter().copied().combinations(size) {
            let spent = problem.positions_cost(&seed);
            if spent > budget + COST_TOLERANCE {
                continue;
            }
            let (gain, set) = complete_greedily(problem, &free, &paid, seed, budget - spent);
            let better = match &best {
                None => true,
                Some((bg, bs)) => gain > *bg || (gain == *bg && set < *bs),
            };
            if better {
                best = Some((gain, set));
            }
        }
    }
    Ok(best.map(|(_, set)| set).unwrap_or_default())
}

/// Extends `free ∪ seed` greedily; returns the gain and the element set.
fn complete_greedily(
    problem: &KnapsackProblem<'_>,
    free: &[usize],
    paid: &[usize],
    seed: Vec<usize>,
    mut left: f64,
) -> (f64, Vec<usize>) {
    let mut chosen = vec![false; problem.ground.len()];
    for &i in free.iter().chain(&seed) {
        chosen[i] = true;
    }
    let to_set = |chosen: &[bool]| -> Vec<usize> {
        chosen
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| problem.ground[i])
            .collect()
    };
    let mut current = to_set(&chosen);
    let mut value = (problem.gain)(&current);
    loop {
        let mut pick: Option<(usize, f64, f64)> = None;
        for &i in paid {
            if chosen[i] {
                continue;
            }
            let cost = problem.costs[i].finite().unwrap_or(f64::INFINITY);
            if cost > left + COST_TOLERANCE {
                continue;
            }
            chosen[i] = true;
            let v = (problem.gain)(&to_set(&chosen));
            chosen[i] = false;
            let delta = v - value;
            if delta <= 0.0 {
                continue;
            }
            let density = delta / cost;
            if pick.is_none_or(|(_, d, _)| density > d) {
                pick = Some((i, density, v));
            }
        }
        match pick {
            Some((i, _, v)) => {
                chosen[i] = true;
                left -= problem.costs[i].finite().unwrap_or(0.0);
                value = v;
            }
            None => break,
        }
    }
    current.clear();
    current.extend(to_set(&chosen));
    (value, current)
}

/// Builds the list for every bin (outer loop) and ladder level (inner loop).
///
/// A cell's greedy result that falls outside the candidate family (because
/// the cost of the bins already open is not part of `B_i`) is recomputed with
/// its budget capped at `k − Σ_{s'∈S'} c(s')`. Empty results, results with zero
/// marginal cost and duplicates are skipped; the first occurrence is kept.
pub fn build_expbudget_list<O: ProfitOracle + ?Sized>(
    instance: &Instance,
    oracle: &O,
    partial: &PartialSolution,
    epsilon: f64,
    depth: usize,
) -> Result<Vec<CandidateSet>> {
    check_epsilon(epsilon)?;
    let c_hat = min_positive_cost(instance)?;
    let k = instance.budget();
    let ladder = BudgetLadder::new(c_hat, epsilon, k)?;
    let ground = partial.remaining(instance);
    let base = partial.elements();
    let gain = |set: &[usize]| oracle.marginal_gain(base, set);
    let open_cost: f64 = partial
        .bins()
        .iter()
        .map(|&s| instance.bin_cost(s))
        .fold(0.0, |a, c| a + c);

    let mut list: Vec<CandidateSet> = Vec::new();
    for s in 0..instance.num_bins() {
        let row = instance.assign_row(s);
        let costs: Vec<CostValue> = ground.iter().map(|&x| row[x]).collect();
        let residual = residual_bin_cost(instance, partial, s);
        for &level in ladder.levels() {
            let run = |budget: f64| -> Result<Option<CandidateSet>> {
                let problem = KnapsackProblem::new(ground.clone(), costs.clone(), budget, &gain)?;
                let set = greedy_max_cover(&problem, depth)?;
                Ok(candidate_for(instance, partial, &set, gain(&set)))
            };
            let mut cell = run(level - residual)?;
            if matches!(&cell, Some(c) if !feasible_extension(instance, partial, c, k)) {
                cell = run(level.min(k - open_cost) - residual)?
                    .filter(|c| feasible_extension(instance, partial, c, k));
            }
            if let Some(c) = cell {
                if !list.iter().any(|o| o.elements == c.elements) {
                    list.push(c);
                }
            }
        }
    }
    Ok(list)
}

fn candidate_for(
    instance: &Instance,
    partial: &PartialSolution,
    set: &[usize],
    gain: f64,
) -> Option<CandidateSet> {
    if set.is_empty() {
        return None;
    }
    let (s_min, c_min) = cheapest_attachment(instance, partial, set)?;
    if c_min <= 0.0 {
        return None;
    }
    Some(CandidateSet {
        elements: set.to_vec(),
        c_min,
        s_min,
        c_bar: c_min - residual_bin_cost(instance, partial, s_min),
        gain,
    })
}
