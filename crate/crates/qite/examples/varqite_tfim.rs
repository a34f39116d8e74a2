//! varQITE on the N = 4 TFIM with a two-repetition hardware-efficient
//! ansatz, all parameters initialized at π/3.

use qite::model::{build_tfim, exact_ground, TfimParams};
use qite::varqite::{run_varqite, Ansatz, VarQiteConfig};

fn main() {
    let p = TfimParams::new(4, 1.0, 1.0);
    let h = build_tfim(&p);
    let gt = exact_ground(&h, 1e-8);

    let ansatz = Ansatz::hardware_efficient(p.n, 2);
    println!("{}", ansatz.describe());

    let cfg = VarQiteConfig {
        eta: 0.05,
        steps: 400,
        stop_v_norm: 1e-4,
        ..VarQiteConfig::default()
    };
    let traj = run_varqite(&h, &ansatz, &cfg, Some(&gt));
    for rec in traj.records.iter().step_by(25) {
        println!(
            "step {:4}  E = {:+.8}  F = {:.6}  |V| = {:.3e}",
            rec.step,
            rec.energy,
            rec.fidelity.unwrap(),
            rec.v_norm
        );
    }
    let last = traj.records.last().unwrap();
    println!(
        "final E = {:+.8} after {} steps (e_gs {:+.8}, converged: {})",
        last.energy, last.step, gt.e_gs, traj.converged
    );
}
