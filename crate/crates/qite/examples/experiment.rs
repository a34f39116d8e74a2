//! The experiment runner as a library call: parse a config, run every
//! method, and write `trajectory.csv` / `summary.json` — the same path the
//! `qite` binary takes.

use qite::cli::{parse_config, run};

const CONFIG: &str = "\
method = all

[model]
n = 4

[ite]
dtau = 0.25
steps = 40

[qite]
dtau = 0.25
steps = 40
domains = 2, 4

[varqite]
eta = 0.05
steps = 200
theta0 = pi/3
";

fn main() {
    let cfg = parse_config(CONFIG).expect("valid config");
    let out = std::env::temp_dir().join("qite-experiment");
    let outcome = run(&cfg, &out).expect("run succeeds");
    println!("e_gs = {:+.10}", outcome.e_gs.unwrap());
    println!("wrote {}", outcome.trajectory_path.display());
    println!("wrote {}", outcome.summary_path.display());
}
