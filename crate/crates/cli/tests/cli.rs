use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gbsm_core::generators::{random_general, random_profit, ProfitKind};
use gbsm_core::io::{read_instance, write_instance};
use gbsm_core::solver::{solve, ListBuilder, SolverConfig};
use serde_json::Value;
use tempfile::TempDir;

fn gbsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbsm"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn table1(dir: &TempDir) -> PathBuf {
    let p = dir.path().join("table1.json");
    let out = gbsm(&["generate", "table1", "--budget", "2", "--out", path_str(&p)]);
    assert!(out.status.success());
    p
}

#[test]
fn solve_table1() {
    let dir = TempDir::new().unwrap();
    let p = table1(&dir);
    let out = gbsm(&["solve", path_str(&p)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["profit"].as_f64().unwrap() >= 1.0);
    assert!(v["cost"].as_f64().unwrap() <= 2.0 + 1e-9);
    assert_eq!(v["status"], "solved");
    for key in ["bins", "elements", "assignment", "report"] {
        assert!(!v[key].is_null(), "{key} missing");
    }

    let exact = json(&gbsm(&["exact", path_str(&p)]));
    assert_eq!(exact["profit"].as_f64(), Some(2.0));

    let wide = json(&gbsm(&["solve", path_str(&p), "--beta", "2"]));
    assert!(wide["cost"].as_f64().unwrap() <= 4.0 + 1e-9);

    let enumerated = gbsm(&["solve", path_str(&p), "--list", "enum", "--epsilon", "0.5"]);
    assert_eq!(enumerated.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        gbsm(&["solve", "/nonexistent/instance.json"]).status.code(),
        Some(2)
    );

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"bins\": []").unwrap();
    assert_eq!(gbsm(&["solve", path_str(&bad)]).status.code(), Some(2));

    let p = table1(&dir);
    let out = gbsm(&["solve", path_str(&p), "--budget-override", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "empty_infeasible");

    assert_eq!(
        gbsm(&["solve", path_str(&p), "--beta", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gbsm(&["solve", path_str(&p), "--epsilon", "1.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exact_guard_and_override() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("big.json");
    let gen = gbsm(&[
        "generate",
        "general",
        "--n",
        "21",
        "--m",
        "2",
        "--budget",
        "3",
        "--out",
        path_str(&p),
    ]);
    assert!(gen.status.success());
    assert_eq!(gbsm(&["exact", path_str(&p)]).status.code(), Some(4));
    let lifted = Command::new(env!("CARGO_BIN_EXE_gbsm"))
        .args(["exact", path_str(&p)])
        .env("GBSM_GUARD_OVERRIDE", "1")
        .output()
        .unwrap();
    assert_eq!(lifted.status.code(), Some(0));
    assert!(json(&lifted)["cost"].as_f64().unwrap() <= 3.0 + 1e-9);
}

#[test]
fn check_condition_reports() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("unit.json");
    assert!(
        gbsm(&["generate", "unit", "--seed", "4", "--out", path_str(&p)])
            .status
            .success()
    );
    let v = json(&gbsm(&[
        "check-condition",
        path_str(&p),
        "--epsilon",
        "0.5",
    ]));
    assert_eq!(v["holds"], true);
    assert_eq!(v["max_subset_size"], 2);

    // table1 with eps = 0.25: bin 1 has costs 0.25 and 0.75, sum 1 < 1/0.5
    let t = table1(&dir);
    let v = json(&gbsm(&[
        "check-condition",
        path_str(&t),
        "--epsilon",
        "0.5",
    ]));
    assert_eq!(v["holds"], false);
}

#[test]
fn json_round_trip_matches_in_memory() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5u64 {
        let inst = random_general(7, 3, 4.0, Default::default(), 0.1, seed).unwrap();
        let profit = random_profit(ProfitKind::Coverage, 7, seed);
        let p = dir.path().join(format!("g{seed}.json"));
        std::fs::write(&p, write_instance(&inst, &profit)).unwrap();
        let (back, back_profit) = read_instance(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(back, inst);

        let cfg = SolverConfig::new(
            1.0,
            ListBuilder::ExpBudget {
                epsilon: 0.2,
                depth: 3,
            },
        )
        .unwrap();
        let (sol, _) = solve(&inst, &profit, &cfg).unwrap();
        assert_eq!(solve(&back, &back_profit, &cfg).unwrap().0, sol);

        let v = json(&gbsm(&["solve", path_str(&p)]));
        let ids = |k: &str| -> Vec<usize> {
            v[k].as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap() as usize)
                .collect()
        };
        assert_eq!(ids("bins"), sol.partial.bins());
        assert_eq!(ids("elements"), sol.partial.elements());
        assert!(
            (v["profit"].as_f64().unwrap() - sol.profit()).abs() <= 1e-11 * sol.profit().max(1.0)
        );
    }
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn bench_unit_sweep_meets_bound() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "bench.json",
        r#"{"seed": 11,
            "generators": [{"kind": "unit", "n": 7, "m": 3, "budget": 6.0, "count": 200, "profit": "coverage"}],
            "solvers": [{"list": "enum", "epsilon": 0.5, "beta": 1.0}]}"#,
    );
    let out_path = dir.path().join("out.csv");
    let out = gbsm(&["bench", path_str(&cfg), "--out", path_str(&out_path)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,n,m,k,builder,epsilon,beta,depth,profit,opt_profit,ratio,bound,bound_satisfied,wall_ms"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200);
    let mut min_ratio = f64::INFINITY;
    for r in &rows {
        assert_eq!(r[12], "true");
        min_ratio = min_ratio.min(r[10].parse().unwrap());
        assert!((r[11].parse::<f64>().unwrap() - 0.196734670144).abs() < 1e-12);
    }
    assert!(min_ratio >= 0.19673);

    // same config, same bytes
    let again = gbsm(&["bench", path_str(&cfg)]);
    assert_eq!(again.stdout, csv.as_bytes());
}

#[test]
fn bench_edge_cases() {
    let dir = TempDir::new().unwrap();
    let empty = write_config(
        &dir,
        "empty.json",
        r#"{"seed": 1, "generators": [], "solvers": [{"list": "expbudget", "epsilon": 0.2}]}"#,
    );
    let out = gbsm(&["bench", path_str(&empty)]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "instance_id,n,m,k,builder,epsilon,beta,depth,profit,opt_profit,ratio,bound,bound_satisfied,wall_ms\n"
    );

    let bad = write_config(
        &dir,
        "bad.json",
        r#"{"seed": 1, "generators": [{"kind": "nope"}], "solvers": []}"#,
    );
    assert_eq!(gbsm(&["bench", path_str(&bad)]).status.code(), Some(2));
    let bad_solver = write_config(
        &dir,
        "bad_solver.json",
        r#"{"seed": 1, "generators": [], "solvers": [{"list": "enum", "epsilon": 0.0}]}"#,
    );
    assert_eq!(
        gbsm(&["bench", path_str(&bad_solver)]).status.code(),
        Some(2)
    );

    let timed = write_config(
        &dir,
        "timed.json",
        r#"{"seed": 2, "timing": true,
            "generators": [{"kind": "general", "n": 5, "m": 2, "budget": 4.0, "count": 3, "profit": "modular", "forbidden_prob": 0.1}],
            "solvers": [{"list": "expbudget", "epsilon": 0.2, "beta": 2.0, "depth": 2}]}"#,
    );
    let out = gbsm(&["bench", path_str(&timed)]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[4], "expbudget");
        assert_eq!(cells[7], "2");
        assert!(cells[13].parse::<f64>().unwrap() >= 0.0);
    }
    assert_eq!(text.lines().count(), 4);
}
