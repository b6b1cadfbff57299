//! `gbsm`: solve, verify and benchmark budgeted bin-selection instances.
//!
//! Exit codes: 0 success, 2 malformed input or config, 3 no nonempty feasible
//! solution, 4 instance too large for the exact oracle.

mod bench;
mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use gbsm_core::exact::{brute_force_opt, Guards};
use gbsm_core::generators::{
    random_general, random_profit, table1_instance, unit_cost_instance, CostRanges, ProfitKind,
};
use gbsm_core::io::{read_instance, write_instance};
use gbsm_core::list_enum::{check_condition, max_subset_size};
use gbsm_core::profit::Modular;
use gbsm_core::{BuiltinProfit, GbsmError, Instance, SolveStatus};
use serde::Serialize;

use bench::{BenchConfig, ListKind, SolverSpec};

#[derive(Parser)]
#[command(name = "gbsm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the greedy solver on an instance file.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "expbudget")]
        list: ListKind,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = gbsm_core::list_expbudget::DEFAULT_DEPTH)]
        depth: usize,
        /// Replace the instance budget.
        #[arg(long)]
        budget_override: Option<f64>,
    },
    /// Exact optimum by exhaustive search (guarded; set GBSM_GUARD_OVERRIDE=1 to lift).
    Exact {
        path: PathBuf,
        #[arg(long)]
        budget_override: Option<f64>,
    },
    /// Check the enumeration-list cost condition for a given epsilon.
    CheckCondition {
        path: PathBuf,
        #[arg(long)]
        epsilon: f64,
    },
    /// Write a generated instance as JSON.
    Generate {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 5.0)]
        budget: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "modular")]
        profit: ProfitArg,
        /// Probability of a forbidden pair (general only).
        #[arg(long, default_value_t = 0.1)]
        forbidden_prob: f64,
        /// Cost parameter of the table1 fixture.
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Large cost of the table1 fixture.
        #[arg(long, default_value_t = 100.0)]
        big: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Benchmark sweep from a JSON config; CSV on stdout or --out.
    Bench {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Table1,
    Unit,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfitArg {
    Modular,
    Coverage,
    ConcaveModular,
}

impl From<ProfitArg> for ProfitKind {
    fn from(p: ProfitArg) -> Self {
        match p {
            ProfitArg::Modular => ProfitKind::Modular,
            ProfitArg::Coverage => ProfitKind::Coverage,
            ProfitArg::ConcaveModular => ProfitKind::ConcaveModular,
        }
    }
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn malformed(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: error.into(),
    }
}

fn from_core(e: GbsmError) -> Failure {
    let code = if matches!(e, GbsmError::TooLarge { .. }) {
        4
    } else {
        2
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn load(path: &Path, budget_override: Option<f64>) -> Result<(Instance, BuiltinProfit), Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(malformed)?;
    let (inst, profit) = read_instance(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(malformed)?;
    match budget_override {
        Some(k) => Ok((inst.with_budget(k).map_err(from_core)?, profit)),
        None => Ok((inst, profit)),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n"))
            .with_context(|| format!("writing {}", p.display()))
            .map_err(malformed),
        None => write_stdout(format!("{text}\n").as_bytes()),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn write_stdout(bytes: &[u8]) -> Result<(), Failure> {
    match std::io::stdout().write_all(bytes) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(malformed(anyhow!(e))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    profit: f64,
    cost: f64,
    bins: &'a [usize],
    elements: &'a [usize],
    assignment: &'a std::collections::BTreeMap<usize, usize>,
    status: SolveStatus,
    report: &'a gbsm_core::RunReport,
}

#[derive(Serialize)]
struct ConditionOutput {
    epsilon: f64,
    max_subset_size: usize,
    holds: bool,
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            path,
            list,
            epsilon,
            beta,
            depth,
            budget_override,
        } => {
            let (inst, profit) = load(&path, budget_override)?;
            let cfg = SolverSpec {
                list,
                epsilon,
                beta,
                depth,
            }
            .to_config()
            .map_err(from_core)?;
            let (sol, report) = gbsm_core::solve(&inst, &profit, &cfg).map_err(from_core)?;
            let out = SolveOutput {
                profit: sol.profit(),
                cost: sol.cost(),
                bins: sol.partial.bins(),
                elements: sol.partial.elements(),
                assignment: sol.partial.assignment(),
                status: sol.status,
                report: &report,
            };
            emit(&output::to_json(&out), None)?;
            Ok(if sol.status == SolveStatus::EmptyInfeasible {
                3
            } else {
                0
            })
        }
        Command::Exact {
            path,
            budget_override,
        } => {
            let (inst, profit) = load(&path, budget_override)?;
            let opt = brute_force_opt(&inst, &profit, inst.budget(), Guards::from_env())
                .map_err(from_core)?;
            emit(&output::to_json(&opt), None)?;
            Ok(0)
        }
        Command::CheckCondition { path, epsilon } => {
            let (inst, _) = load(&path, None)?;
            let holds = check_condition(&inst, epsilon).map_err(from_core)?;
            let out = ConditionOutput {
                epsilon,
                max_subset_size: max_subset_size(epsilon),
                holds,
            };
            emit(&output::to_json(&out), None)?;
            Ok(0)
        }
        Command::Generate {
            kind,
            n,
            m,
            budget,
            seed,
            profit,
            forbidden_prob,
            eps,
            big,
            out,
        } => {
            let (inst, f) = match kind {
                GenKind::Table1 => {
                    let inst = table1_instance(eps, big, budget).map_err(from_core)?;
                    (
                        inst,
                        BuiltinProfit::Modular(Modular::new(vec![1.0; 3]).map_err(from_core)?),
                    )
                }
                GenKind::Unit => (
                    unit_cost_instance(n, m, budget, seed).map_err(from_core)?,
                    random_profit(profit.into(), n, seed.wrapping_add(1)),
                ),
                GenKind::General => (
                    random_general(n, m, budget, CostRanges::default(), forbidden_prob, seed)
                        .map_err(from_core)?,
                    random_profit(profit.into(), n, seed.wrapping_add(1)),
                ),
            };
            emit(&write_instance(&inst, &f), out.as_deref())?;
            Ok(0)
        }
        Command::Bench { config, out } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))
                .map_err(malformed)?;
            let cfg: BenchConfig = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", config.display()))
                .map_err(malformed)?;
            let mut buf = Vec::new();
            bench::run(&cfg, Guards::from_env(), &mut buf).map_err(|e| {
                let code = match e.downcast_ref::<GbsmError>() {
                    Some(GbsmError::TooLarge { .. }) => 4,
                    _ => 2,
                };
                Failure { code, error: e }
            })?;
            match out {
                Some(p) => fs::write(&p, &buf)
                    .with_context(|| format!("writing {}", p.display()))
                    .map_err(malformed)?,
                None => write_stdout(&buf)?,
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
