//! The greedy framework.
//!
//! Zero-cost bins are opened first. Each round absorbs every element that an
//! open bin takes for free, builds a candidate list w.r.t. the current
//! partial solution and picks the candidate with the best gain per marginal
//! cost. The candidate is accepted while the total cost stays within `βk`;
//! the first rejected candidate becomes the fallback solution
//! `(S_G ∪ {s_min(T̂)}, T̂)`, returned instead of the greedy one when its
//! profit is at least as large. `β = 1` is the plain algorithm.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cost::{extension_cost, family_cost, CandidateSet};
use crate::error::{GbsmError, Result};
use crate::instance::{CostValue, Instance};
use crate::list_enum::{build_enum_list, EnumListConfig};
use crate::list_expbudget::build_expbudget_list;
use crate::profit::ProfitOracle;
use crate::solution::{PartialSolution, Solution, SolveStatus};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ListBuilder {
    /// All subsets of size at most `⌈1/ε⌉`.
    Enum { epsilon: f64 },
    /// Greedy knapsack runs over the geometric budget ladder.
    ExpBudget { epsilon: f64, depth: usize },
}

impl ListBuilder {
    pub fn epsilon(&self) -> f64 {
        match *self {
            ListBuilder::Enum { epsilon } | ListBuilder::ExpBudget { epsilon, .. } => epsilon,
        }
    }

    /// The list quality `α` this builder guarantees: `1 − ε` for enumeration
    /// (when the cost condition holds) and `(1 − 1/e)(1 − ε)` for the ladder.
    pub fn alpha(&self) -> f64 {
        match *self {
            ListBuilder::Enum { epsilon } => 1.0 - epsilon,
            ListBuilder::ExpBudget { epsilon, .. } => (1.0 - (-1.0f64).exp()) * (1.0 - epsilon),
        }
    }

    pub fn build<O: ProfitOracle + ?Sized>(
        &self,
        instance: &Instance,
        oracle: &O,
        partial: &PartialSolution,
    ) -> Result<Vec<CandidateSet>> {
        match *self {
            ListBuilder::Enum { epsilon } => {
                let config = EnumListConfig::new(epsilon)?;
                Ok(build_enum_list(instance, oracle, partial, &config))
            }
            ListBuilder::ExpBudget { epsilon, depth } => {
                build_expbudget_list(instance, oracle, partial, epsilon, depth)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub beta: f64,
    pub list: ListBuilder,
}

impl SolverConfig {
    pub fn new(beta: f64, list: ListBuilder) -> Result<Self> {
        if !(beta >= 1.0 && beta.is_finite()) {
            return Err(GbsmError::InvalidParameter(format!(
                "beta {beta} must be a real ≥ 1"
            )));
        }
        crate::list_enum::check_epsilon(list.epsilon())?;
        if let ListBuilder::ExpBudget { depth: 0, .. } = list {
            return Err(GbsmError::InvalidParameter(
                "depth must be at least 1".into(),
            ));
        }
        Ok(SolverConfig { beta, list })
    }
}

/// `½(1 − e^{−αβ})`.
pub fn approximation_bound(alpha: f64, beta: f64) -> f64 {
    0.5 * (1.0 - (-alpha * beta).exp())
}

/// One accepted greedy step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iteration {
    /// Elements absorbed at zero cost before the list was built.
    pub absorbed: Vec<usize>,
    pub list_size: usize,
    pub chosen: Vec<usize>,
    pub bin: usize,
    pub c_min: f64,
    pub gain: f64,
    /// Total cost after accepting `chosen`.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discarded {
    pub elements: Vec<usize>,
    pub bin: usize,
    pub c_min: f64,
    pub gain: f64,
    /// `c(S_G ∪ {s_min(T̂)}, X_G ∪ T̂)`, which exceeded `βk`.
    pub rejected_cost: f64,
    /// `c(S_G ∪ {s_min(T̂)}, T̂)`, the fallback's cost.
    pub fallback_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Returned {
    Greedy,
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Zero-cost bins opened before the first round.
    pub free_bins: Vec<usize>,
    pub iterations: Vec<Iteration>,
    /// Elements absorbed at zero cost after the last accepted step.
    pub trailing_absorbed: Vec<usize>,
    pub discarded: Option<Discarded>,
    pub greedy_profit: f64,
    pub fallback_profit: Option<f64>,
    pub returned: Returned,
}

/// Runs the greedy framework on `instance` with the list builder and `β` of
/// `config`.
pub fn solve<O: ProfitOracle + ?Sized>(
    instance: &Instance,
    oracle: &O,
    config: &SolverConfig,
) -> Result<(Solution, RunReport)> {
    let config = SolverConfig::new(config.beta, config.list)?;
    let cap = config.beta * instance.budget();

    let free_bins: Vec<usize> = (0..instance.num_bins())
        .filter(|&s| instance.bin_cost(s) == 0.0)
        .collect();
    let mut partial = PartialSolution::new(instance, oracle, free_bins.clone(), Vec::new())?;
    let mut iterations = Vec::new();
    let mut discarded: Option<(CandidateSet, f64, f64)> = None;
    let mut absorbed;

    loop {
        absorbed = free_elements(instance, &partial);
        if !absorbed.is_empty() {
            partial = partial.with_added(instance, oracle, None, &absorbed)?;
        }
        if partial.elements().len() == instance.num_elements() {
            break;
        }
        if !has_reachable(instance, &partial) {
            break;
        }
        let list = config.list.build(instance, oracle, &partial)?;
        let Some(best) = pick_best(&list) else {
            break;
        };
        let best = best.clone();
        let after = match extension_cost(instance, &partial, &best) {
            CostValue::Finite(c) => c,
            CostValue::Forbidden => unreachable!("s_min reaches every element of the candidate"),
        };
        if CostValue::Finite(after).fits(cap) {
            partial = partial.with_added(instance, oracle, Some(best.s_min), &best.elements)?;
            iterations.push(Iteration {
                absorbed: std::mem::take(&mut absorbed),
                list_size: list.len(),
                chosen: best.elements,
                bin: best.s_min,
                c_min: best.c_min,
                gain: best.gain,
                cost: partial.cost(),
            });
        } else {
            let fallback = family_cost(instance, &partial, &best)
                .finite()
                .expect("candidate reachable through s_min");
            discarded = Some((best, after, fallback));
            break;
        }
    }

    let greedy_profit = partial.profit();
    let mut fallback_profit = None;
    let mut returned = Returned::Greedy;
    if let Some((t_hat, _, _)) = &discarded {
        let profit = oracle.value(&t_hat.elements);
        fallback_profit = Some(profit);
        if profit >= greedy_profit {
            let mut bins = partial.bins().to_vec();
            bins.push(t_hat.s_min);
            partial = PartialSolution::new(instance, oracle, bins, t_hat.elements.clone())?;
            returned = Returned::Fallback;
        }
    }

    let status = if instance.has_nonempty_feasible(cap) {
        SolveStatus::Solved
    } else {
        SolveStatus::EmptyInfeasible
    };
    let report = RunReport {
        free_bins,
        iterations,
        trailing_absorbed: absorbed,
        discarded: discarded.map(|(c, rejected_cost, fallback_cost)| Discarded {
            elements: c.elements,
            bin: c.s_min,
            c_min: c.c_min,
            gain: c.gain,
            rejected_cost,
            fallback_cost,
        }),
        greedy_profit,
        fallback_profit,
        returned,
    };
    Ok((Solution { partial, status }, report))
}

/// Unchosen elements with `c(s', x) = 0` for some open bin `s'`.
fn free_elements(instance: &Instance, partial: &PartialSolution) -> Vec<usize> {
    partial
        .remaining(instance)
        .into_iter()
        .filter(|&x| {
            partial
                .bins()
                .iter()
                .any(|&s| instance.assign_cost(s, x).is_zero())
        })
        .collect()
}

fn has_reachable(instance: &Instance, partial: &PartialSolution) -> bool {
    partial
        .remaining(instance)
        .iter()
        .any(|&x| (0..instance.num_bins()).any(|s| instance.assign_cost(s, x).is_finite()))
}

/// Best `g/c_min`; ties by smaller `c_min`, then lexicographically smaller set.
pub fn pick_best(list: &[CandidateSet]) -> Option<&CandidateSet> {
    list.iter().max_by(|a, b| {
        a.ratio()
            .total_cmp(&b.ratio())
            .then_with(|| b.c_min.total_cmp(&a.c_min))
            .then_with(|| b.elements.cmp(&a.elements))
    })
}

/// `f(solution) / f(OPT_k)`, `OPT_k` from exhaustive search under the
/// original budget `k`. Returns 1 when the optimum is zero.
pub fn verify_ratio<O: ProfitOracle + ?Sized>(
    solution: &Solution,
    instance: &Instance,
    oracle: &O,
    guards: crate::exact::Guards,
) -> Result<f64> {
    let opt = crate::exact::brute_force_opt(instance, oracle, instance.budget(), guards)?;
    if opt.profit <= 0.0 {
        return Ok(1.0);
    }
    Ok(match solution.profit().partial_cmp(&opt.profit) {
        Some(Ordering::Equal) => 1.0,
        _ => solution.profit() / opt.profit,
    })
}
