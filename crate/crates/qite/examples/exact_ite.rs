//! Exact normalized imaginary-time evolution of the N = 4 TFIM from
//! |0000⟩, printing the energy relaxation toward the ground state.

use qite::model::{build_tfim, exact_ground, exact_ite_evolve, TfimParams};
use qite::statevec::StateVector;

fn main() {
    let p = TfimParams::new(4, 1.0, 1.0);
    let h = build_tfim(&p);
    let gt = exact_ground(&h, 1e-8);
    let psi0 = StateVector::zero_state(p.n);

    let traj = exact_ite_evolve(&h, &psi0, 0.25, 40);
    println!("beta      energy          gap");
    for rec in traj.iter().step_by(4) {
        println!(
            "{:5.2}  {:+.10}  {:.3e}",
            rec.beta,
            rec.energy,
            rec.energy - gt.e_gs
        );
    }
    println!("e_gs = {:+.10}", gt.e_gs);
}
