//! Greedy approximation for budgeted monotone submodular maximization where
//! elements are paid for through bins: opening a bin costs `c(s)`, attaching
//! element `x` to it costs `c(s, x)`, and the total must stay within a budget.
//!
//! - [`instance`], [`profit`], [`solution`]: problem data, value oracles and
//!   partial solutions.
//! - [`cost`]: marginal costs of candidate sets.
//! - [`list_enum`], [`list_expbudget`]: the two candidate-list builders.
//! - [`solver`]: the greedy framework, with an optional budget violation factor.
//! - [`exact`]: brute-force references for small instances.
//! - [`generators`], [`io`]: instance factories and the JSON format.

pub mod cost;
pub mod error;
pub mod exact;
pub mod generators;
pub mod instance;
pub mod io;
pub mod list_enum;
pub mod list_expbudget;
pub mod profit;
pub mod solution;
pub mod solver;

pub use error::{GbsmError, Result};
pub use instance::{solution_cost, CostValue, Instance};
pub use profit::{BuiltinProfit, ProfitOracle};
pub use solution::{PartialSolution, Solution, SolveStatus};
pub use solver::{solve, ListBuilder, RunReport, SolverConfig};
