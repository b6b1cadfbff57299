//! Value oracles for the monotone submodular profit `f`.
//!
//! The solver only ever asks for marginal gains, so an oracle with
//! `f(∅) > 0` behaves exactly like its zero-offset version. The three
//! built-ins all have `f(∅) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};

/// Value-oracle access to a monotone submodular set function over element
/// indices. Monotonicity and submodularity are contracts, not checked here.
pub trait ProfitOracle: Send + Sync {
    /// `f(set)`; `set` is sorted and duplicate-free.
    fn value(&self, set: &[usize]) -> f64;

    /// `f(base ∪ extra) − f(base)` for disjoint sorted sets.
    fn marginal_gain(&self, base: &[usize], extra: &[usize]) -> f64 {
        if extra.is_empty() {
            return 0.0;
        }
        let union = sorted_union(base, extra);
        self.value(&union) - self.value(base)
    }
}

impl<T: ProfitOracle + ?Sized> ProfitOracle for &T {
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }

    fn marginal_gain(&self, base: &[usize], extra: &[usize]) -> f64 {
        (**self).marginal_gain(base, extra)
    }
}

/// `f(set)`.
pub fn profit<O: ProfitOracle + ?Sized>(oracle: &O, set: &[usize]) -> f64 {
    oracle.value(set)
}

/// `g(T) = f(base ∪ T) − f(base)`.
pub fn marginal_gain<O: ProfitOracle + ?Sized>(oracle: &O, base: &[usize], extra: &[usize]) -> f64 {
    oracle.marginal_gain(base, extra)
}

/// Merge of two sorted, duplicate-free index slices.
pub fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `f(T) = Σ_{x∈T} w(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modular {
    pub weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, "modular weight")?;
        Ok(Modular { weights })
    }
}

impl ProfitOracle for Modular {
    fn value(&self, set: &[usize]) -> f64 {
        set.iter().map(|&x| self.weights[x]).fold(0.0, |a, w| a + w)
    }

    fn marginal_gain(&self, _base: &[usize], extra: &[usize]) -> f64 {
        self.value(extra)
    }
}

/// Each element covers a set of universe items; `f(T)` is the total weight of
/// the items covered by `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedCoverage {
    /// `covers[x]` lists the universe items covered by element `x`.
    pub covers: Vec<Vec<usize>>,
    pub item_weights: Vec<f64>,
}

impl WeightedCoverage {
    pub fn new(covers: Vec<Vec<usize>>, item_weights: Vec<f64>) -> Result<Self> {
        check_weights(&item_weights, "item weight")?;
        for (x, items) in covers.iter().enumerate() {
            if let Some(&bad) = items.iter().find(|&&i| i >= item_weights.len()) {
                return Err(GbsmError::InvalidParameter(format!(
                    "element {x} covers unknown item {bad}"
                )));
            }
        }
        Ok(WeightedCoverage {
            covers,
            item_weights,
        })
    }

    /// Every element covers only itself; `f` is then modular.
    pub fn identity(weights: Vec<f64>) -> Result<Self> {
        let covers = (0..weights.len()).map(|x| vec![x]).collect();
        Self::new(covers, weights)
    }
}

impl ProfitOracle for WeightedCoverage {
    fn value(&self, set: &[usize]) -> f64 {
        let mut seen = vec![false; self.item_weights.len()];
        let mut total = 0.0;
        for &x in set {
            for &item in &self.covers[x] {
                if !seen[item] {
                    seen[item] = true;
                    total += self.item_weights[item];
                }
            }
        }
        total
    }
}

/// `f(T) = sqrt(Σ_{x∈T} w(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcaveOfModular {
    pub weights: Vec<f64>,
}

impl ConcaveOfModular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, "weight")?;
        Ok(ConcaveOfModular { weights })
    }
}

impl ProfitOracle for ConcaveOfModular {
    fn value(&self, set: &[usize]) -> f64 {
        set.iter()
            .map(|&x| self.weights[x])
            .fold(0.0, |a: f64, w| a + w)
            .sqrt()
    }
}

fn check_weights(weights: &[f64], what: &str) -> Result<()> {
    match weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
        Some(i) => Err(GbsmError::InvalidParameter(format!(
            "{what} {i} is {}",
            weights[i]
        ))),
        None => Ok(()),
    }
}

/// Serializable choice among the built-in oracles, tagged by `"kind"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuiltinProfit {
    Modular(Modular),
    Coverage(WeightedCoverage),
    ConcaveModular(ConcaveOfModular),
}

impl BuiltinProfit {
    /// Number of elements the oracle is defined over.
    pub fn num_elements(&self) -> usize {
        match self {
            BuiltinProfit::Modular(m) => m.weights.len(),
            BuiltinProfit::Coverage(c) => c.covers.len(),
            BuiltinProfit::ConcaveModular(c) => c.weights.len(),
        }
    }

    /// Re-runs the constructor checks; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        match self {
            BuiltinProfit::Modular(m) => Modular::new(m.weights.clone()).map(|_| ()),
            BuiltinProfit::Coverage(c) => {
                WeightedCoverage::new(c.covers.clone(), c.item_weights.clone()).map(|_| ())
            }
            BuiltinProfit::ConcaveModular(c) => {
                ConcaveOfModular::new(c.weights.clone()).map(|_| ())
            }
        }
    }
}

impl ProfitOracle for BuiltinProfit {
    fn value(&self, set: &[usize]) -> f64 {
        match self {
            BuiltinProfit::Modular(o) => o.value(set),
            BuiltinProfit::Coverage(o) => o.value(set),
            BuiltinProfit::ConcaveModular(o) => o.value(set),
        }
    }

    fn marginal_gain(&self, base: &[usize], extra: &[usize]) -> f64 {
        match self {
            BuiltinProfit::Modular(o) => o.marginal_gain(base, extra),
            BuiltinProfit::Coverage(o) => o.marginal_gain(base, extra),
            BuiltinProfit::ConcaveModular(o) => o.marginal_gain(base, extra),
        }
    }
}
