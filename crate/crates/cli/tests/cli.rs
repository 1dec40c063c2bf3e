//! End-to-end tests of the CLI commands through the library API, plus exit
//! code checks through the actual binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use gstsp_cli::commands::{
    cmd_distribution, cmd_generate, cmd_shift_curve, cmd_solve, cmd_sweep, GapsMode, ShiftCurveOpts,
    SolveOpts, SweepOpts,
};
use gstsp_cli::method::Method;
use gstsp_cli::report::{GapKind, RunReport};

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gstsp-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn fast_config(dir: &Path) -> PathBuf {
    let path = dir.join("fast.cfg");
    fs::write(&path, "steps=30\npatience=20\nrestarts=1\niters=25\nseed=5\n").unwrap();
    path
}

fn solve_opts(dir: &Path, instances: &Path, method: Method, out: &str) -> SolveOpts {
    SolveOpts {
        instances: instances.to_path_buf(),
        method,
        config: Some(fast_config(dir)),
        seed: None,
        out: dir.join(out),
        gaps: GapsMode::Auto,
        timing: false,
    }
}

#[test]
fn generate_solve_distribution_roundtrip() {
    let dir = tmpdir("e2e");
    let instances = dir.join("inst.tsp");
    cmd_generate(10, 20, 42, &instances).unwrap();

    // Re-reading the generated file yields 20 instances of n=10.
    let parsed = gstsp::instances::read_instances::<f64>(&instances).unwrap();
    assert_eq!(parsed.len(), 20);
    assert!(parsed.iter().all(|i| i.n() == 10));

    let nn = cmd_solve(&solve_opts(&dir, &instances, Method::Nn, "nn")).unwrap();
    assert_eq!(nn.count, 20);
    assert_eq!(nn.gap_kind, GapKind::Exact);
    // Oracle dominance: every gap is nonnegative.
    for r in &nn.records {
        assert!(r.gap.unwrap() >= 0.0);
    }
    assert!(dir.join("nn.json").exists());
    let csv = fs::read_to_string(dir.join("nn.csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);

    let exact = cmd_solve(&solve_opts(&dir, &instances, Method::Exact, "exact")).unwrap();
    for r in &exact.records {
        assert_eq!(r.gap.unwrap(), 0.0);
    }
    // Exact lengths never exceed any heuristic's.
    for (e, h) in exact.records.iter().zip(&nn.records) {
        assert!(e.length <= h.length + 1e-9);
    }

    cmd_distribution(&[dir.join("nn.json"), dir.join("exact.json")], &dir.join("plot"), 12).unwrap();
    let hist = fs::read_to_string(dir.join("plot_hist.csv")).unwrap();
    // Mass per method equals the instance count.
    let nn_mass: usize = hist
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("nn,"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(nn_mass, 20);
    let cdf = fs::read_to_string(dir.join("plot_cdf.csv")).unwrap();
    let last_nn = cdf.lines().filter(|l| l.starts_with("nn,")).last().unwrap();
    assert_eq!(last_nn.rsplit(',').next().unwrap(), "1");
    assert!(dir.join("plot_summary.csv").exists());

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn reports_bitwise_reproducible_without_timing() {
    let dir = tmpdir("repro");
    let instances = dir.join("inst.tsp");
    cmd_generate(8, 6, 7, &instances).unwrap();

    let run = |out: &str| {
        cmd_solve(&solve_opts(&dir, &instances, Method::Solver { k: 1 }, out)).unwrap();
        fs::read_to_string(dir.join(format!("{out}.json"))).unwrap()
    };
    assert_eq!(run("a"), run("b"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn solver_and_ensemble_reports() {
    let dir = tmpdir("solver");
    let instances = dir.join("inst.tsp");
    cmd_generate(8, 4, 3, &instances).unwrap();

    let single = cmd_solve(&solve_opts(&dir, &instances, Method::Solver { k: 1 }, "k1")).unwrap();
    for r in &single.records {
        assert_eq!(r.k_star, Some(1));
        assert!(r.restart_index.is_some());
    }
    assert!(single.config.is_some());

    let ens = cmd_solve(&solve_opts(&dir, &instances, Method::Ensemble { m: None }, "ens")).unwrap();
    // Min selection: the ensemble never loses to the k=1 member.
    assert!(ens.aggregate.mean <= single.aggregate.mean + 1e-12);

    // Budget m=1 is identical to solver:k1.
    let m1 = cmd_solve(&solve_opts(&dir, &instances, Method::Ensemble { m: Some(1) }, "m1")).unwrap();
    assert_eq!(m1.aggregate.mean, single.aggregate.mean);

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn relative_gaps_against_reference() {
    let dir = tmpdir("refgap");
    let instances = dir.join("inst.tsp");
    cmd_generate(9, 5, 11, &instances).unwrap();

    cmd_solve(&solve_opts(&dir, &instances, Method::Exact, "oracle")).unwrap();
    let mut opts = solve_opts(&dir, &instances, Method::Nn, "nn_rel");
    opts.gaps = GapsMode::Ref(dir.join("oracle.json"));
    let report = cmd_solve(&opts).unwrap();
    assert_eq!(report.gap_kind, GapKind::Relative);
    for r in &report.records {
        assert!(r.gap.unwrap() >= -1e-9);
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn distribution_rejects_unpaired_reports() {
    let dir = tmpdir("unpaired");
    let a = dir.join("a.tsp");
    let b = dir.join("b.tsp");
    cmd_generate(7, 5, 1, &a).unwrap();
    cmd_generate(7, 5, 2, &b).unwrap();
    cmd_solve(&solve_opts(&dir, &a, Method::Nn, "ra")).unwrap();
    cmd_solve(&solve_opts(&dir, &b, Method::Nn, "rb")).unwrap();
    let err = cmd_distribution(&[dir.join("ra.json"), dir.join("rb.json")], &dir.join("p"), 10)
        .unwrap_err();
    assert!(err.message.contains("not paired"), "{}", err.message);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_degenerate_grid_matches_solve() {
    let dir = tmpdir("sweep");
    let instances = dir.join("inst.tsp");
    cmd_generate(7, 4, 9, &instances).unwrap();
    let grid = dir.join("grid.txt");
    fs::write(&grid, "tau = 3.0\ngamma = 0.05\n").unwrap();

    let sweep = cmd_sweep(&SweepOpts {
        instances: instances.clone(),
        grid,
        config: Some(fast_config(&dir)),
        method: Method::Solver { k: 1 },
        seed: None,
        out: dir.join("sweep"),
    })
    .unwrap();
    assert_eq!(sweep.cells.len(), 1);
    assert_eq!(sweep.best.mean, sweep.cells[0].mean);

    let solve = cmd_solve(&solve_opts(&dir, &instances, Method::Solver { k: 1 }, "s")).unwrap();
    assert_eq!(sweep.best.mean, solve.aggregate.mean);
    // Best cell never beats any cell.
    for c in &sweep.cells {
        assert!(sweep.best.mean <= c.mean);
    }
    assert!(dir.join("sweep.json").exists() && dir.join("sweep.csv").exists());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_rejects_empty_grid() {
    let dir = tmpdir("sweep-empty");
    let instances = dir.join("inst.tsp");
    cmd_generate(7, 2, 9, &instances).unwrap();
    let grid = dir.join("grid.txt");
    fs::write(&grid, "# nothing\n").unwrap();
    let err = cmd_sweep(&SweepOpts {
        instances,
        grid,
        config: Some(fast_config(&dir)),
        method: Method::Solver { k: 1 },
        seed: None,
        out: dir.join("sweep"),
    })
    .unwrap_err();
    assert!(err.message.contains("empty grid"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn shift_curve_monotone_and_consistent() {
    let dir = tmpdir("curve");
    let instances = dir.join("inst.tsp");
    cmd_generate(8, 5, 13, &instances).unwrap();

    let curve = cmd_shift_curve(&ShiftCurveOpts {
        instances: instances.clone(),
        config: Some(fast_config(&dir)),
        seed: None,
        out: dir.join("curve.csv"),
    })
    .unwrap();
    // phi(8) = 4 budgets, non-increasing means.
    assert_eq!(curve.len(), 4);
    for w in curve.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-12);
    }
    // The m=1 row equals a solver:k1 batch run.
    let solve = cmd_solve(&solve_opts(&dir, &instances, Method::Solver { k: 1 }, "k1")).unwrap();
    assert_eq!(curve[0].1, solve.aggregate.mean);
    let csv = fs::read_to_string(dir.join("curve.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    // Mixed-n files are rejected.
    let mixed = dir.join("mixed.tsp");
    fs::write(&mixed, "tsp 3\n0 0\n1 0\n0 1\n\ntsp 4\n0 0\n1 0\n1 1\n0 1\n").unwrap();
    let err = cmd_shift_curve(&ShiftCurveOpts {
        instances: mixed,
        config: Some(fast_config(&dir)),
        seed: None,
        out: dir.join("c2.csv"),
    })
    .unwrap_err();
    assert!(err.message.contains("one n"), "{}", err.message);
    fs::remove_dir_all(&dir).ok();
}

// Exit-code contract through the real binary: 0 success, 2 usage, 1 runtime.
#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gstsp");
    let dir = tmpdir("exit");

    let ok = Command::new(bin)
        .args(["generate", "--n", "5", "--count", "2", "--seed", "1", "--out"])
        .arg(dir.join("ok.tsp"))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    // n = 2 violates the minimum instance size: usage error.
    let too_small = Command::new(bin)
        .args(["generate", "--n", "2", "--count", "1", "--seed", "0", "--out"])
        .arg(dir.join("bad.tsp"))
        .output()
        .unwrap();
    assert_eq!(too_small.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&too_small.stderr).contains("too small"));

    let unknown_method = Command::new(bin)
        .args(["solve", "--method", "lkh", "--instances"])
        .arg(dir.join("ok.tsp"))
        .args(["--out"])
        .arg(dir.join("r"))
        .output()
        .unwrap();
    assert_eq!(unknown_method.status.code(), Some(2));

    let unreadable = Command::new(bin)
        .args(["solve", "--method", "nn", "--instances", "/nonexistent/x.tsp", "--out"])
        .arg(dir.join("r"))
        .output()
        .unwrap();
    assert_eq!(unreadable.status.code(), Some(1));

    let missing_args = Command::new(bin).args(["solve"]).output().unwrap();
    assert_eq!(missing_args.status.code(), Some(2));

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_schema_versioned() {
    let dir = tmpdir("schema");
    let instances = dir.join("i.tsp");
    cmd_generate(6, 3, 1, &instances).unwrap();
    cmd_solve(&solve_opts(&dir, &instances, Method::Farthest, "f")).unwrap();
    let text = fs::read_to_string(dir.join("f.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["version"].as_str().unwrap().starts_with("gstsp "));
    let report = RunReport::read_json(dir.join("f.json")).unwrap();
    assert_eq!(report.method, "farthest");
    fs::remove_dir_all(&dir).ok();
}
