use nodal_atlas::cli::{parse_config, run, CliError, RunConfig, RunOptions, TaskName, TaskSpec};
use nodal_atlas::model::{ArcKind, BoundaryArc, HomeoSpec, NonlinSpec, ProblemSpec, Quadrant, StepWeight};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

const PROBLEM: &str = r#"
[problem]
lambda = 1.0
h = { kind = "identity" }
g = { kind = "power-p", p = 3.0 }
weight = { breakpoints = [0.0, 1.9, 3.45, 5.35], heights = [130.0, 130.0] }
r0 = { kind = "positive-y-axis" }
rl = { kind = "positive-y-axis" }
"#;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nodal-atlas")
}

fn config(dir: &Path, task: &str) -> PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, format!("{PROBLEM}\n{task}")).unwrap();
    p
}

fn exit_code(cfg: &Path, out: &Path, extra: &[&str]) -> i32 {
    Command::new(bin()).arg("--config").arg(cfg).arg("--out").arg(out).args(extra).output().unwrap().status.code().unwrap()
}

fn opts() -> RunOptions {
    RunOptions { tol_quad: None, tol_ode: None, seed: 0 }
}

#[test]
fn problem_spec_round_trips() {
    let specs = [
        ProblemSpec::semilinear(3.0, -1.0, StepWeight::uniform(2, 1.0, 6.0, 2.0).unwrap()).unwrap(),
        ProblemSpec::new(
            HomeoSpec::Identity,
            NonlinSpec::PowerP { p: 0.5 },
            0.25,
            StepWeight::new(vec![0.0, 1.0, 3.0, 4.5], vec![1.0, 7.0]).unwrap(),
            BoundaryArc { kind: ArcKind::Ray { angle: 0.3 }, quadrant_hint: Some(Quadrant::I) },
            BoundaryArc::negative_y(),
        )
        .unwrap(),
    ];
    for spec in specs {
        let cfg = RunConfig { problem: Some(spec.clone()), task: TaskSpec { name: TaskName::Itineraries, params: Default::default() }, output: None, tolerances: None };
        let text = toml::to_string(&cfg).unwrap();
        let back = parse_config(&text).unwrap();
        assert_eq!(back.problem.unwrap(), spec);
        assert_eq!(back.task.name, TaskName::Itineraries);
    }
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let text = PROBLEM.replace("[0.0, 1.9, 3.45, 5.35], heights = [130.0, 130.0]", "[0.0, 3.141592653589793], heights = [1.0]");
    let cfg = parse_config(&format!("{text}\n[task]\nname = \"sweep\"\nparams = {{ lambdas = [] }}\n")).unwrap();
    run(&cfg, dir.path(), &opts()).unwrap();
    assert_eq!(fs::read_to_string(dir.path().join("sweep.csv")).unwrap(), "n,lambda,M_plus,x_plus,error_est\n");
    assert_eq!(fs::read_to_string(dir.path().join("sweep.json")).unwrap(), "[]\n");
}

#[test]
fn reruns_are_byte_identical() {
    let tasks = [
        "[task]\nname = \"periods\"\nparams = { levels = [0.8, 5.0, 20.0] }",
        "[task]\nname = \"solve\"\n[task.params]\nc1 = [0.8, 0.8]\nc2 = [20.0, 20.0]\nprune = true\nsamples = 256",
        "[task]\nname = \"itineraries\"",
    ];
    for task in tasks {
        let cfg = parse_config(&format!("{PROBLEM}\n{task}")).unwrap();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let fa = run(&cfg, a.path(), &opts()).unwrap();
        let fb = run(&cfg, b.path(), &opts()).unwrap();
        assert_eq!(fa.len(), fb.len());
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
        }
    }
}

#[test]
fn csv_schemas_and_digits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(&format!("{PROBLEM}\n[task]\nname = \"periods\"\nparams = {{ levels = [0.8] }}")).unwrap();
    run(&cfg, dir.path(), &opts()).unwrap();
    let csv = fs::read_to_string(dir.path().join("periods.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "c,T,T_I,T_II,T_III,T_IV,error_est");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 7);
    for v in &row {
        let mantissa = v.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{v}");
    }
    // T equals four quarters to the printed precision
    let t: f64 = row[1].parse().unwrap();
    let q: f64 = row[2..6].iter().map(|v| v.parse::<f64>().unwrap()).sum();
    assert!((t - q).abs() < 1e-12);

    let cfg = parse_config(&format!("{PROBLEM}\n[task]\nname = \"solve\"\n[task.params]\nc1 = [0.8, 0.8]\nc2 = [20.0, 20.0]\nprune = true\nsamples = 256"))
        .unwrap();
    run(&cfg, dir.path(), &opts()).unwrap();
    let csv = fs::read_to_string(dir.path().join("solve.csv")).unwrap();
    assert!(csv.starts_with("solution_id,arc_param,x0,y0,itinerary,zeros_x_per_interval,zeros_y_per_interval,residual\n"));
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows.len() >= 2);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f.len(), 8);
        assert_eq!(f[5].split(';').count(), 3);
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("solve.json")).unwrap()).unwrap();
    assert!(json[0].get("zeros_x_per_interval").is_some());
    assert!(fs::read_to_string(dir.path().join("phase.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    // success
    let cfg = config(dir.path(), "[task]\nname = \"twist\"\nparams = { c1 = 0.8, c2 = 20.0, alpha = 1, beta = 2, variant = \"positive-quarter-lap\" }");
    assert_eq!(exit_code(&cfg, &out, &[]), 0);
    // certification violated
    let cfg = config(dir.path(), "[task]\nname = \"twist\"\nparams = { c1 = 0.8, c2 = 20.0, alpha = 1, beta = 2, variant = \"positive-quarter-lap\", tau = 2.2 }");
    assert_eq!(exit_code(&cfg, &out, &[]), 4);
    let cfg = config(dir.path(), "[task]\nname = \"windows\"\nparams = { variant = \"positive-compat\", c1 = [0.8, 0.8], c2 = [20.0, 20.0], varsigma = 1.5 }");
    assert_eq!(exit_code(&cfg, &out, &[]), 4);
    // numerical failure
    let cfg = config(dir.path(), "[task]\nname = \"periods\"\nparams = { levels = [-1.0] }");
    assert_eq!(exit_code(&cfg, &out, &[]), 3);
    // config errors
    let cfg = config(dir.path(), "[task]\nname = \"nonsense\"");
    assert_eq!(exit_code(&cfg, &out, &[]), 2);
    let cfg = config(dir.path(), "[task]\nname = \"periods\"\nparams = { levels = [1.0], unknown = 3 }");
    assert_eq!(exit_code(&cfg, &out, &[]), 2);
    let cfg = config(dir.path(), "[task]\nname = \"periods\"\nparams = { levels = [1.0] }");
    assert_eq!(exit_code(&cfg, &out, &["--tol-quad", "-1"]), 2);
    assert_eq!(exit_code(&dir.path().join("missing.toml"), &out, &[]), 2);
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, PROBLEM.replace("heights = [130.0, 130.0]", "heights = [130.0, -1.0]") + "[task]\nname = \"itineraries\"\n").unwrap();
    assert_eq!(exit_code(&bad, &out, &[]), 2);
}

#[test]
fn flags_and_logging_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = config(dir.path(), "[task]\nname = \"periods\"\nparams = { levels = [1.0] }");
    let o = Command::new(bin())
        .env("NODAL_ATLAS_LOG", "debug")
        .args(["--threads", "2", "--seed", "7", "--tol-quad", "1e-11", "--tol-ode", "1e-9"])
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("periods.csv").exists());
}

#[test]
fn reproduce_examples_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    for (name, file, rows) in [("4.1", "example_4_1.csv", 12), ("4.2", "example_4_2.csv", 5)] {
        let p = dir.path().join(format!("{name}.toml"));
        fs::write(&p, format!("[task]\nname = \"reproduce-example\"\nparams = {{ name = \"{name}\" }}\n")).unwrap();
        assert_eq!(exit_code(&p, dir.path(), &[]), 0);
        let csv = fs::read_to_string(dir.path().join(file)).unwrap();
        assert_eq!(csv.lines().count(), rows + 1);
    }
    let p = dir.path().join("x.toml");
    fs::write(&p, "[task]\nname = \"reproduce-example\"\nparams = { name = \"9.9\" }\n").unwrap();
    assert_eq!(exit_code(&p, dir.path(), &[]), 2);
}

#[test]
fn bound_task_counts_and_violations() {
    let dir = tempfile::tempdir().unwrap();
    let task = "[task]\nname = \"bound\"\nparams = { alpha = [1, 1], beta = [2, 2], c1 = [0.8, 0.8], c2 = [20.0, 20.0], variant = \"positive-quarter-lap\" }";
    let cfg = parse_config(&format!("{PROBLEM}\n{task}")).unwrap();
    run(&cfg, dir.path(), &opts()).unwrap();
    let csv = fs::read_to_string(dir.path().join("bound.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "total,2"));
    let cfg = parse_config(&format!("{PROBLEM}\n{}", task.replace("beta = [2, 2]", "beta = [2, 5]"))).unwrap();
    assert!(matches!(run(&cfg, dir.path(), &opts()), Err(CliError::Violated(_))));
}
