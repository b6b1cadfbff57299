//! Benchmark sweeps: generate instances from a config, solve each with every
//! solver configuration, compare against the exact optimum, write CSV.

use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use gbsm_core::exact::{brute_force_opt, Guards};
use gbsm_core::generators::{
    random_general, random_profit, unit_cost_instance, CostRanges, ProfitKind,
};
use gbsm_core::solver::{approximation_bound, solve, ListBuilder, SolverConfig};
use gbsm_core::{BuiltinProfit, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::output::fmt_float;

pub const HEADER: [&str; 14] = [
    "instance_id",
    "n",
    "m",
    "k",
    "builder",
    "epsilon",
    "beta",
    "depth",
    "profit",
    "opt_profit",
    "ratio",
    "bound",
    "bound_satisfied",
    "wall_ms",
];

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Unit {
        n: usize,
        m: usize,
        budget: f64,
        count: usize,
        profit: ProfitKind,
    },
    General {
        n: usize,
        m: usize,
        budget: f64,
        count: usize,
        profit: ProfitKind,
        #[serde(default)]
        forbidden_prob: f64,
        #[serde(default)]
        ranges: Option<CostRanges>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub list: ListKind,
    pub epsilon: f64,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn one() -> f64 {
    1.0
}

fn default_depth() -> usize {
    gbsm_core::list_expbudget::DEFAULT_DEPTH
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ListKind {
    Enum,
    Expbudget,
}

impl SolverSpec {
    pub fn to_config(&self) -> gbsm_core::Result<SolverConfig> {
        let list = match self.list {
            ListKind::Enum => ListBuilder::Enum {
                epsilon: self.epsilon,
            },
            ListKind::Expbudget => ListBuilder::ExpBudget {
                epsilon: self.epsilon,
                depth: self.depth,
            },
        };
        SolverConfig::new(self.beta, list)
    }
}

/// `wall_ms` is left blank unless `timing` is set, so that the same config
/// yields byte-identical output.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub seed: u64,
    pub generators: Vec<GeneratorSpec>,
    pub solvers: Vec<SolverSpec>,
    #[serde(default)]
    pub timing: bool,
}

struct BenchInstance {
    id: String,
    instance: Instance,
    profit: BuiltinProfit,
}

/// Instances in config order; per-instance seeds are drawn from one stream.
fn generate(config: &BenchConfig) -> gbsm_core::Result<Vec<BenchInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::new();
    for (g, spec) in config.generators.iter().enumerate() {
        let (count, n, profit_kind) = match spec {
            GeneratorSpec::Unit {
                count, n, profit, ..
            }
            | GeneratorSpec::General {
                count, n, profit, ..
            } => (*count, *n, *profit),
        };
        for rep in 0..count {
            let seed: u64 = rng.gen();
            let instance = match spec {
                GeneratorSpec::Unit { n, m, budget, .. } => {
                    unit_cost_instance(*n, *m, *budget, seed)?
                }
                GeneratorSpec::General {
                    n,
                    m,
                    budget,
                    forbidden_prob,
                    ranges,
                    ..
                } => random_general(
                    *n,
                    *m,
                    *budget,
                    ranges.unwrap_or_default(),
                    *forbidden_prob,
                    seed,
                )?,
            };
            out.push(BenchInstance {
                id: format!("g{g}-{rep}"),
                instance,
                profit: random_profit(profit_kind, n, seed.wrapping_add(1)),
            });
        }
    }
    Ok(out)
}

/// Runs the sweep and writes the CSV. Rows are computed in parallel and
/// written in config order.
pub fn run<W: Write>(config: &BenchConfig, guards: Guards, out: W) -> Result<()> {
    let solvers = config
        .solvers
        .iter()
        .map(SolverSpec::to_config)
        .collect::<gbsm_core::Result<Vec<_>>>()
        .context("bad solver config")?;
    let instances = generate(config).context("bad generator config")?;
    let jobs: Vec<(&BenchInstance, &SolverSpec, &SolverConfig)> = instances
        .iter()
        .flat_map(|b| {
            config
                .solvers
                .iter()
                .zip(&solvers)
                .map(move |(s, c)| (b, s, c))
        })
        .collect();
    let rows = jobs
        .par_iter()
        .map(|(b, spec, cfg)| row(b, spec, cfg, guards, config.timing))
        .collect::<gbsm_core::Result<Vec<_>>>()?;

    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(HEADER)?;
    for r in rows {
        writer.write_record(r)?;
    }
    writer.flush()?;
    Ok(())
}

fn row(
    b: &BenchInstance,
    spec: &SolverSpec,
    cfg: &SolverConfig,
    guards: Guards,
    timing: bool,
) -> gbsm_core::Result<Vec<String>> {
    let inst = &b.instance;
    let start = Instant::now();
    let (sol, _) = solve(inst, &b.profit, cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let opt = brute_force_opt(inst, &b.profit, inst.budget(), guards)?;
    let ratio = if opt.profit > 0.0 {
        sol.profit() / opt.profit
    } else {
        1.0
    };
    let bound = approximation_bound(cfg.list.alpha(), cfg.beta);
    let satisfied = sol.profit() >= bound * opt.profit - 1e-9;
    let builder = match spec.list {
        ListKind::Enum => "enum",
        ListKind::Expbudget => "expbudget",
    };
    let depth = match spec.list {
        ListKind::Enum => String::new(),
        ListKind::Expbudget => spec.depth.to_string(),
    };
    Ok(vec![
        b.id.clone(),
        inst.num_elements().to_string(),
        inst.num_bins().to_string(),
        fmt_float(inst.budget()),
        builder.to_string(),
        fmt_float(spec.epsilon),
        fmt_float(spec.beta),
        depth,
        fmt_float(sol.profit()),
        fmt_float(opt.profit),
        fmt_float(ratio),
        fmt_float(bound),
        satisfied.to_string(),
        if timing {
            fmt_float(wall_ms)
        } else {
            String::new()
        },
    ])
}
