//! Problem representation: bins with opening costs, elements, the bin × element
//! assignment-cost matrix and the shared budget.
//!
//! Bins and elements are dense indices `0..m` and `0..n`. Element sets are
//! passed around as sorted, duplicate-free `Vec<usize>` / `&[usize]`, which
//! also gives the canonical lexicographic order used for tie-breaking.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};

/// Slack applied to every `cost <= budget` comparison.
pub const COST_TOLERANCE: f64 = 1e-9;

/// A non-negative cost, or the `Forbidden` sentinel for pairs that may never
/// be associated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "Option<f64>", into = "Option<f64>")]
pub enum CostValue {
    Finite(f64),
    Forbidden,
}

impl CostValue {
    pub const ZERO: CostValue = CostValue::Finite(0.0);

    pub fn is_finite(self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            CostValue::Finite(v) => Some(v),
            CostValue::Forbidden => None,
        }
    }

    /// `true` when this cost fits under `cap` up to [`COST_TOLERANCE`].
    pub fn fits(self, cap: f64) -> bool {
        match self {
            CostValue::Finite(v) => v <= cap + COST_TOLERANCE,
            CostValue::Forbidden => false,
        }
    }

    pub fn is_zero(self) -> bool {
        self == CostValue::ZERO
    }
}

impl From<Option<f64>> for CostValue {
    fn from(v: Option<f64>) -> Self {
        match v {
            Some(v) => CostValue::Finite(v),
            None => CostValue::Forbidden,
        }
    }
}

impl From<CostValue> for Option<f64> {
    fn from(v: CostValue) -> Self {
        v.finite()
    }
}

impl From<f64> for CostValue {
    fn from(v: f64) -> Self {
        CostValue::Finite(v)
    }
}

impl Add for CostValue {
    type Output = CostValue;

    fn add(self, rhs: CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::Forbidden,
        }
    }
}

impl Add<f64> for CostValue {
    type Output = CostValue;

    fn add(self, rhs: f64) -> CostValue {
        self + CostValue::Finite(rhs)
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => a.partial_cmp(b),
            (CostValue::Forbidden, CostValue::Forbidden) => Some(Ordering::Equal),
            (CostValue::Forbidden, _) => Some(Ordering::Greater),
            (_, CostValue::Forbidden) => Some(Ordering::Less),
        }
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(v) => write!(f, "{v}"),
            CostValue::Forbidden => f.write_str("forbidden"),
        }
    }
}

/// A GBSM instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    bin_costs: Vec<f64>,
    num_elements: usize,
    // row-major, bin × element
    assign: Vec<CostValue>,
    budget: f64,
}

impl Instance {
    /// Builds an instance from bin opening costs, the `m × n` assignment
    /// matrix (row = bin) and the budget.
    pub fn new(bin_costs: Vec<f64>, assign_cost: Vec<Vec<CostValue>>, budget: f64) -> Result<Self> {
        let m = bin_costs.len();
        if m == 0 {
            return Err(GbsmError::InvalidInstance(
                "at least one bin is required".into(),
            ));
        }
        if assign_cost.len() != m {
            return Err(GbsmError::InvalidInstance(format!(
                "assignment matrix has {} rows for {m} bins",
                assign_cost.len()
            )));
        }
        let n = assign_cost[0].len();
        for (s, c) in bin_costs.iter().enumerate() {
            if !(c.is_finite() && *c >= 0.0) {
                return Err(GbsmError::InvalidInstance(format!("bin {s} has cost {c}")));
            }
        }
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(GbsmError::InvalidInstance(format!(
                "budget {budget} is not a non-negative real"
            )));
        }
        let mut assign = Vec::with_capacity(m * n);
        for (s, row) in assign_cost.into_iter().enumerate() {
            if row.len() != n {
                return Err(GbsmError::InvalidInstance(format!(
                    "row {s} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (x, c) in row.iter().enumerate() {
                if let CostValue::Finite(v) = c {
                    if !(v.is_finite() && *v >= 0.0) {
                        return Err(GbsmError::InvalidInstance(format!("c({s},{x}) = {v}")));
                    }
                }
            }
            assign.extend(row);
        }
        Ok(Instance {
            bin_costs,
            num_elements: n,
            assign,
            budget,
        })
    }

    pub fn num_bins(&self) -> usize {
        self.bin_costs.len()
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn bin_cost(&self, bin: usize) -> f64 {
        self.bin_costs[bin]
    }

    pub fn bin_costs(&self) -> &[f64] {
        &self.bin_costs
    }

    /// `c(s, x)`.
    pub fn assign_cost(&self, bin: usize, element: usize) -> CostValue {
        self.assign[bin * self.num_elements + element]
    }

    pub fn assign_row(&self, bin: usize) -> &[CostValue] {
        let n = self.num_elements;
        &self.assign[bin * n..(bin + 1) * n]
    }

    /// The same instance with another budget.
    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(GbsmError::InvalidInstance(format!(
                "budget {budget} is not a non-negative real"
            )));
        }
        Ok(Instance {
            budget,
            ..self.clone()
        })
    }

    pub fn validate_bins(&self, bins: &[usize]) -> Result<()> {
        validate_index_set(bins, self.num_bins(), "bin")
    }

    pub fn validate_elements(&self, elements: &[usize]) -> Result<()> {
        validate_index_set(elements, self.num_elements(), "element")
    }

    /// Cheapest finite `c(s, x)` over `bins` (ascending), smallest bin index on ties.
    pub fn cheapest_bin_for(&self, bins: &[usize], element: usize) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for &s in bins {
            if let CostValue::Finite(v) = self.assign_cost(s, element) {
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((s, v));
                }
            }
        }
        best
    }

    /// `true` if some single bin with a finite assignment to some element fits
    /// under `cap`, i.e. a feasible solution with a nonempty element set exists.
    pub fn has_nonempty_feasible(&self, cap: f64) -> bool {
        (0..self.num_bins()).any(|s| {
            self.assign_row(s)
                .iter()
                .any(|&c| (c + self.bin_cost(s)).fits(cap))
        })
    }
}

fn validate_index_set(set: &[usize], bound: usize, what: &str) -> Result<()> {
    for w in set.windows(2) {
        if w[0] >= w[1] {
            return Err(GbsmError::InvalidPartial(format!(
                "{what} set {set:?} is not sorted and duplicate-free"
            )));
        }
    }
    if let Some(&last) = set.last() {
        if last >= bound {
            return Err(GbsmError::InvalidPartial(format!(
                "{what} {last} out of range 0..{bound}"
            )));
        }
    }
    Ok(())
}

/// `c(S', X') = Σ_{s∈S'} c(s) + Σ_{x∈X'} min_{s∈S'} c(s,x)`.
///
/// Forbidden when some element has no finite cost to any bin of `bins`
/// (in particular when `bins` is empty and `elements` is not).
pub fn solution_cost(instance: &Instance, bins: &[usize], elements: &[usize]) -> CostValue {
    // fold from +0.0: an empty f64 `sum` is -0.0
    let mut total: f64 = bins
        .iter()
        .map(|&s| instance.bin_cost(s))
        .fold(0.0, |a, c| a + c);
    for &x in elements {
        match instance.cheapest_bin_for(bins, x) {
            Some((_, v)) => total += v,
            None => return CostValue::Forbidden,
        }
    }
    CostValue::Finite(total)
}

/// Cheapest way to pay for `elements` alone: minimum of [`solution_cost`]
/// over every nonempty bin subset. Exponential in the number of bins.
pub fn cheapest_cover_cost(instance: &Instance, elements: &[usize]) -> CostValue {
    let m = instance.num_bins();
    let mut best = CostValue::Forbidden;
    let mut bins = Vec::with_capacity(m);
    for mask in 1u64..(1u64 << m) {
        bins.clear();
        bins.extend((0..m).filter(|s| mask >> s & 1 == 1));
        let c = solution_cost(instance, &bins, elements);
        if c < best {
            best = c;
        }
    }
    best
}
