//! JSON instance format.
//!
//! ```json
//! {"bins": [{"id": 0, "cost": 1.0}, {"id": 1, "cost": 1.0}],
//!  "elements": [0, 1, 2],
//!  "assign_cost": [[1.0, 1.0, null], [0.75, null, 0.25]],
//!  "budget": 2.0,
//!  "profit": {"kind": "modular", "weights": [1.0, 1.0, 1.0]}}
//! ```
//!
//! `null` is a forbidden pair; row = bin, column = element.

use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};
use crate::instance::{CostValue, Instance};
use crate::profit::BuiltinProfit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    pub id: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub bins: Vec<BinSpec>,
    pub elements: Vec<usize>,
    pub assign_cost: Vec<Vec<CostValue>>,
    pub budget: f64,
    pub profit: BuiltinProfit,
}

impl InstanceFile {
    pub fn new(instance: &Instance, profit: &BuiltinProfit) -> Self {
        InstanceFile {
            bins: instance
                .bin_costs()
                .iter()
                .enumerate()
                .map(|(id, &cost)| BinSpec { id, cost })
                .collect(),
            elements: (0..instance.num_elements()).collect(),
            assign_cost: (0..instance.num_bins())
                .map(|s| instance.assign_row(s).to_vec())
                .collect(),
            budget: instance.budget(),
            profit: profit.clone(),
        }
    }

    /// Validates ids, dimensions and the profit, and builds the instance.
    pub fn into_parts(self) -> Result<(Instance, BuiltinProfit)> {
        for (i, b) in self.bins.iter().enumerate() {
            if b.id != i {
                return Err(GbsmError::InvalidInstance(format!(
                    "bin at position {i} has id {}",
                    b.id
                )));
            }
        }
        for (i, &x) in self.elements.iter().enumerate() {
            if x != i {
                return Err(GbsmError::InvalidInstance(format!(
                    "element at position {i} has id {x}"
                )));
            }
        }
        let n = self.elements.len();
        if let Some((s, row)) = self
            .assign_cost
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != n)
        {
            return Err(GbsmError::InvalidInstance(format!(
                "assign_cost row {s} has {} entries for {n} elements",
                row.len()
            )));
        }
        self.profit.validate()?;
        if self.profit.num_elements() != n {
            return Err(GbsmError::InvalidInstance(format!(
                "profit defined over {} elements, instance has {n}",
                self.profit.num_elements()
            )));
        }
        let instance = Instance::new(
            self.bins.into_iter().map(|b| b.cost).collect(),
            self.assign_cost,
            self.budget,
        )?;
        Ok((instance, self.profit))
    }
}

pub fn read_instance(json: &str) -> Result<(Instance, BuiltinProfit)> {
    let file: InstanceFile =
        serde_json::from_str(json).map_err(|e| GbsmError::InvalidInstance(e.to_string()))?;
    file.into_parts()
}

pub fn write_instance(instance: &Instance, profit: &BuiltinProfit) -> String {
    serde_json::to_string_pretty(&InstanceFile::new(instance, profit)).expect("instance serializes")
}
