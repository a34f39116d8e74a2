//! Ground state of the transverse-field Ising chain by exact
//! diagonalization, for a few chain lengths.

use qite::model::{build_tfim, exact_ground, TfimParams};

fn main() {
    for n in [2, 4, 6, 8] {
        let h = build_tfim(&TfimParams::new(n, 1.0, 1.0));
        let gt = exact_ground(&h, 1e-8);
        println!(
            "N = {n}: e_gs = {:+.10}, degeneracy {}",
            gt.e_gs,
            gt.gs_basis.len()
        );
    }

    // g = 0 is the classical chain: two degenerate product ground states
    let h = build_tfim(&TfimParams::new(5, 1.0, 0.0));
    let gt = exact_ground(&h, 1e-8);
    println!(
        "N = 5, g = 0: e_gs = {:+.10}, degeneracy {}",
        gt.e_gs,
        gt.gs_basis.len()
    );
}
