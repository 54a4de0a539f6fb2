//! Drive the CLI layer from a TOML string: reproduce the worked examples and write a sweep table.
use nodal_atlas::cli::{parse_config, run, RunOptions};

const EXAMPLE: &str = r#"
[task]
name = "reproduce-example"
params = { name = "4.2" }
"#;

const SWEEP: &str = r#"
[problem]
lambda = 0.0
h = { kind = "identity" }
g = { kind = "power-p", p = 3.0 }
weight = { breakpoints = [0.0, 3.141592653589793], heights = [1.0] }
r0 = { kind = "positive-y-axis" }
rl = { kind = "positive-y-axis" }

[task]
name = "sweep"
params = { n = 1, lambdas = [-2.0, -1.0, 0.0, 0.5, 0.9] }
"#;

fn main() {
    let out = std::env::temp_dir().join("nodal-atlas-config-runs");
    let opts = RunOptions { tol_quad: None, tol_ode: None, seed: 0 };
    for text in [EXAMPLE, SWEEP] {
        let cfg = parse_config(text).expect("valid config");
        match run(&cfg, &out, &opts) {
            Ok(files) => {
                for f in files.iter().filter(|f| f.extension().is_some_and(|e| e == "csv")) {
                    println!("{}:\n{}", f.display(), std::fs::read_to_string(f).unwrap());
                }
            }
            Err(e) => eprintln!("{e} (exit {})", e.exit_code()),
        }
    }
}
