//! Instance factories: seeded random instances, the special-case reductions
//! and the small non-submodular-cost fixture.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};
use crate::instance::{CostValue, Instance};
use crate::profit::{BuiltinProfit, ConcaveOfModular, Modular, WeightedCoverage};

const MAX_ATTEMPTS: usize = 100;

/// Closed ranges for the uniform bin and assignment costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostRanges {
    pub bin: (f64, f64),
    pub assign: (f64, f64),
}

impl Default for CostRanges {
    fn default() -> Self {
        CostRanges {
            bin: (0.0, 3.0),
            assign: (0.0, 3.0),
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if lo >= 0.0 && hi >= lo && hi.is_finite() {
        Ok(())
    } else {
        Err(GbsmError::InvalidParameter(format!(
            "{name} range [{lo}, {hi}]"
        )))
    }
}

/// Uniform random costs with each assignment forbidden independently with
/// probability `forbidden_prob`. Resamples until some single bin with some
/// element fits the budget.
pub fn random_general(
    n: usize,
    m: usize,
    budget: f64,
    ranges: CostRanges,
    forbidden_prob: f64,
    seed: u64,
) -> Result<Instance> {
    if n == 0 || m == 0 {
        return Err(GbsmError::InvalidParameter(
            "n and m must be at least 1".into(),
        ));
    }
    if !(0.0..1.0).contains(&forbidden_prob) {
        return Err(GbsmError::InvalidParameter(format!(
            "forbidden_prob {forbidden_prob} not in [0, 1)"
        )));
    }
    check_range("bin cost", ranges.bin)?;
    check_range("assignment cost", ranges.assign)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let bins: Vec<f64> = (0..m).map(|_| uniform(&mut rng, ranges.bin)).collect();
        let assign: Vec<Vec<CostValue>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if forbidden_prob > 0.0 && rng.gen_bool(forbidden_prob) {
                            CostValue::Forbidden
                        } else {
                            CostValue::Finite(uniform(&mut rng, ranges.assign))
                        }
                    })
                    .collect()
            })
            .collect();
        let instance = Instance::new(bins, assign, budget)?;
        if instance.has_nonempty_feasible(budget) {
            return Ok(instance);
        }
    }
    Err(GbsmError::Unsatisfiable(MAX_ATTEMPTS))
}

/// `c(s) = 1` for every bin and `c(s, x)` uniform in `[1, 3]`, so the
/// enumeration condition holds for every `ε ∈ (0, 1)`.
pub fn unit_cost_instance(n: usize, m: usize, budget: f64, seed: u64) -> Result<Instance> {
    if m == 0 {
        return Err(GbsmError::InvalidParameter("m must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assign = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| CostValue::Finite(rng.gen_range(1.0..=3.0)))
                .collect()
        })
        .collect();
    Instance::new(vec![1.0; m], assign, budget)
}

/// Submodular maximization under a knapsack constraint: one free bin whose
/// assignment costs are the item costs.
pub fn sfkc_instance(item_costs: &[f64], budget: f64) -> Result<Instance> {
    let row = item_costs.iter().map(|&c| CostValue::Finite(c)).collect();
    Instance::new(vec![0.0], vec![row], budget)
}

/// Budgeted maximum coverage: each set is a bin with its cost; items are
/// elements reachable at zero cost through any set covering them and nowhere
/// else. The profit is the total weight of the chosen items.
pub fn bmc_instance(
    sets: &[(f64, Vec<usize>)],
    item_weights: &[f64],
    budget: f64,
) -> Result<(Instance, WeightedCoverage)> {
    let n = item_weights.len();
    let mut assign = vec![vec![CostValue::Forbidden; n]; sets.len()];
    for (s, (_, items)) in sets.iter().enumerate() {
        for &x in items {
            if x >= n {
                return Err(GbsmError::InvalidParameter(format!(
                    "set {s} covers unknown item {x}"
                )));
            }
            assign[s][x] = CostValue::ZERO;
        }
    }
    let bins = sets.iter().map(|(c, _)| *c).collect();
    let instance = Instance::new(bins, assign, budget)?;
    Ok((instance, WeightedCoverage::identity(item_weights.to_vec())?))
}

/// Two unit-cost bins and three elements with
/// `c(s1,·) = (1, 1, M)` and `c(s2,·) = (1 − ε, M, ε)`.
pub fn table1_instance(eps: f64, big: f64, budget: f64) -> Result<Instance> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GbsmError::InvalidParameter(format!(
            "eps {eps} not in (0, 1)"
        )));
    }
    let f = CostValue::Finite;
    Instance::new(
        vec![1.0, 1.0],
        vec![
            vec![f(1.0), f(1.0), f(big)],
            vec![f(1.0 - eps), f(big), f(eps)],
        ],
        budget,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfitKind {
    Modular,
    Coverage,
    ConcaveModular,
}

/// Seeded built-in profit over `n` elements: weights uniform in `[0, 10]`;
/// coverage over a universe of `2n` unit-to-five-weight items with each
/// element covering one to four random items.
pub fn random_profit(kind: ProfitKind, n: usize, seed: u64) -> BuiltinProfit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ProfitKind::Modular => {
            let w = (0..n).map(|_| rng.gen_range(0.0..=10.0)).collect();
            BuiltinProfit::Modular(Modular::new(w).expect("non-negative weights"))
        }
        ProfitKind::ConcaveModular => {
            let w = (0..n).map(|_| rng.gen_range(0.0..=10.0)).collect();
            BuiltinProfit::ConcaveModular(ConcaveOfModular::new(w).expect("non-negative weights"))
        }
        ProfitKind::Coverage => {
            let universe = (2 * n).max(1);
            let weights = (0..universe).map(|_| rng.gen_range(1.0..=5.0)).collect();
            let covers = (0..n)
                .map(|_| {
                    let k = rng.gen_range(1..=4usize.min(universe));
                    let mut items: Vec<usize> =
                        (0..k).map(|_| rng.gen_range(0..universe)).collect();
                    items.sort_unstable();
                    items.dedup();
                    items
                })
                .collect();
            BuiltinProfit::Coverage(WeightedCoverage::new(covers, weights).expect("valid coverage"))
        }
    }
}
