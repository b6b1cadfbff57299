use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};
use crate::instance::{solution_cost, CostValue, Instance};
use crate::profit::{sorted_union, ProfitOracle};

/// A partial solution `(S', X')` with its element → bin assignment and cached
/// cost and profit. Every chosen element is assigned to its cheapest chosen
/// bin, so `cost` always equals [`solution_cost`] of the two sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialSolution {
    bins: Vec<usize>,
    elements: Vec<usize>,
    assignment: BTreeMap<usize, usize>,
    cost: f64,
    profit: f64,
}

impl PartialSolution {
    /// `(∅, ∅)`.
    pub fn empty<O: ProfitOracle + ?Sized>(oracle: &O) -> Self {
        PartialSolution {
            bins: Vec::new(),
            elements: Vec::new(),
            assignment: BTreeMap::new(),
            cost: 0.0,
            profit: oracle.value(&[]),
        }
    }

    /// Builds `(bins, elements)`; both are sorted and deduplicated first.
    /// Fails if an index is out of range or some element cannot reach any of
    /// the chosen bins.
    pub fn new<O: ProfitOracle + ?Sized>(
        instance: &Instance,
        oracle: &O,
        mut bins: Vec<usize>,
        mut elements: Vec<usize>,
    ) -> Result<Self> {
        bins.sort_unstable();
        bins.dedup();
        elements.sort_unstable();
        elements.dedup();
        instance.validate_bins(&bins)?;
        instance.validate_elements(&elements)?;
        let mut assignment = BTreeMap::new();
        for &x in &elements {
            match instance.cheapest_bin_for(&bins, x) {
                Some((s, _)) => {
                    assignment.insert(x, s);
                }
                None => {
                    return Err(GbsmError::InvalidPartial(format!(
                        "element {x} has no finite cost to bins {bins:?}"
                    )))
                }
            }
        }
        let cost = match solution_cost(instance, &bins, &elements) {
            CostValue::Finite(c) => c,
            CostValue::Forbidden => unreachable!("every element was assigned"),
        };
        let profit = oracle.value(&elements);
        Ok(PartialSolution {
            bins,
            elements,
            assignment,
            cost,
            profit,
        })
    }

    /// `(S' ∪ {bin}, X' ∪ extra)`.
    pub fn with_added<O: ProfitOracle + ?Sized>(
        &self,
        instance: &Instance,
        oracle: &O,
        bin: Option<usize>,
        extra: &[usize],
    ) -> Result<Self> {
        let bins = match bin {
            Some(s) => sorted_union(&self.bins, &[s]),
            None => self.bins.clone(),
        };
        Self::new(instance, oracle, bins, sorted_union(&self.elements, extra))
    }

    pub fn bins(&self) -> &[usize] {
        &self.bins
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn profit(&self) -> f64 {
        self.profit
    }

    pub fn contains_bin(&self, bin: usize) -> bool {
        self.bins.binary_search(&bin).is_ok()
    }

    pub fn contains_element(&self, element: usize) -> bool {
        self.elements.binary_search(&element).is_ok()
    }

    /// Elements not yet in `X'`, ascending.
    pub fn remaining(&self, instance: &Instance) -> Vec<usize> {
        (0..instance.num_elements())
            .filter(|&x| !self.contains_element(x))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    /// No feasible solution with a nonempty element set exists under the budget.
    EmptyInfeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub partial: PartialSolution,
    pub status: SolveStatus,
}

impl Solution {
    pub fn profit(&self) -> f64 {
        self.partial.profit()
    }

    pub fn cost(&self) -> f64 {
        self.partial.cost()
    }
}
