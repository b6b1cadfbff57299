//! Marginal costs of candidate sets relative to a partial solution.

use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};
use crate::instance::{solution_cost, CostValue, Instance};
use crate::profit::{sorted_union, ProfitOracle};
use crate::solution::PartialSolution;

/// A set `T ⊆ X \ X'` together with its marginal cost `c_min(T)`, the bin
/// `s_min(T)` achieving it, the pure assignment part `c_bar(T)` and the
/// marginal gain `g(T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub elements: Vec<usize>,
    pub c_min: f64,
    pub s_min: usize,
    pub c_bar: f64,
    pub gain: f64,
}

impl CandidateSet {
    /// `g(T) / c_min(T)`; infinite for a zero marginal cost.
    pub fn ratio(&self) -> f64 {
        self.gain / self.c_min
    }
}

/// `c_{S'}(s)`: the opening cost of `s`, or 0 once `s` is open.
pub fn residual_bin_cost(instance: &Instance, partial: &PartialSolution, bin: usize) -> f64 {
    if partial.contains_bin(bin) {
        0.0
    } else {
        instance.bin_cost(bin)
    }
}

/// `c_{S'}(s) + Σ_{x∈T} c(s, x)` for one bin.
pub fn attach_cost(
    instance: &Instance,
    partial: &PartialSolution,
    bin: usize,
    set: &[usize],
) -> CostValue {
    let row = instance.assign_row(bin);
    set.iter().fold(
        CostValue::Finite(residual_bin_cost(instance, partial, bin)),
        |acc, &x| acc + row[x],
    )
}

/// Cheapest single bin to attach `set` to, as `(s_min, c_min)`; smallest bin
/// index on ties, `None` when every bin is forbidden for some element.
pub fn cheapest_attachment(
    instance: &Instance,
    partial: &PartialSolution,
    set: &[usize],
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for s in 0..instance.num_bins() {
        if let CostValue::Finite(c) = attach_cost(instance, partial, s, set) {
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((s, c));
            }
        }
    }
    best
}

/// Materializes `set` as a [`CandidateSet`] w.r.t. `partial`.
///
/// `set` must be nonempty, sorted, and disjoint from `X'`. Returns
/// [`GbsmError::InfeasibleSet`] when no single bin can take every element.
pub fn marginal_cost<O: ProfitOracle + ?Sized>(
    instance: &Instance,
    oracle: &O,
    partial: &PartialSolution,
    set: &[usize],
) -> Result<CandidateSet> {
    if set.is_empty() {
        return Err(GbsmError::InvalidParameter(
            "candidate set must be nonempty".into(),
        ));
    }
    instance.validate_elements(set)?;
    if let Some(&x) = set.iter().find(|&&x| partial.contains_element(x)) {
        return Err(GbsmError::InvalidParameter(format!(
            "element {x} of the candidate is already chosen"
        )));
    }
    let (s_min, c_min) = cheapest_attachment(instance, partial, set)
        .ok_or_else(|| GbsmError::InfeasibleSet(set.to_vec()))?;
    Ok(CandidateSet {
        elements: set.to_vec(),
        c_min,
        s_min,
        c_bar: c_min - residual_bin_cost(instance, partial, s_min),
        gain: oracle.marginal_gain(partial.elements(), set),
    })
}

fn with_bin(partial: &PartialSolution, bin: usize) -> Vec<usize> {
    sorted_union(partial.bins(), &[bin])
}

/// `c(S' ∪ {s_min(T)}, T)`: what the candidate costs on its own once every
/// bin of `S'` is kept open. This is the quantity bounded by `k` in the
/// candidate family, and the cost of the fallback solution built from `T`.
pub fn family_cost(
    instance: &Instance,
    partial: &PartialSolution,
    candidate: &CandidateSet,
) -> CostValue {
    solution_cost(
        instance,
        &with_bin(partial, candidate.s_min),
        &candidate.elements,
    )
}

/// `c(S' ∪ {s_min(T)}, X' ∪ T)`: the cost after accepting the candidate.
pub fn extension_cost(
    instance: &Instance,
    partial: &PartialSolution,
    candidate: &CandidateSet,
) -> CostValue {
    solution_cost(
        instance,
        &with_bin(partial, candidate.s_min),
        &sorted_union(partial.elements(), &candidate.elements),
    )
}

/// Membership of the candidate in the family bounded by `budget_cap`:
/// `c(S' ∪ {s_min(T)}, T) ≤ budget_cap` up to the cost tolerance.
pub fn feasible_extension(
    instance: &Instance,
    partial: &PartialSolution,
    candidate: &CandidateSet,
    budget_cap: f64,
) -> bool {
    family_cost(instance, partial, candidate).fits(budget_cap)
}
