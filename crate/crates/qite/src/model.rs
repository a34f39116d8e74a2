//! Hamiltonian construction and the two classical oracles.
//!
//! The transverse-field Ising chain is
//!
//! ```text
//!     H = -J Σ_{i} Z_i Z_{i+1} + g Σ_i X_i        (open chain)
//! ```
//!
//! `trotterize_tfim` splits it into two-local pieces whose sum reproduces `H`
//! exactly: each coupling term goes to one piece, interior qubits contribute
//! `g/2` of their field to each of their two adjacent pieces, and the two
//! edge qubits contribute their full `g` to their single adjacent piece.
//! Exact diagonalization and exact imaginary-time evolution serve as ground
//! truth for everything downstream.

use crate::numerics::{eigh_ascending, hermitian_expm};
use crate::pauli::{PauliString, PauliSum};
use crate::statevec::StateVector;
use ndarray::Array1;
use num_complex::Complex64;

/// Parameters of the open-chain transverse-field Ising model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfimParams {
    /// Qubit count, at least 2.
    pub n: usize,
    /// Coupling constant.
    pub j: f64,
    /// Transverse field strength.
    pub g: f64,
}

impl TfimParams {
    pub fn new(n: usize, j: f64, g: f64) -> Self {
        assert!(n >= 2, "TFIM needs at least 2 qubits");
        assert!(j.is_finite() && g.is_finite(), "parameters must be finite");
        TfimParams { n, j, g }
    }
}

/// A local Hamiltonian fragment together with the window its unitary fit
/// acts on.
#[derive(Clone, Debug)]
pub struct TrotterPiece {
    /// The fragment `h[k]`, Hermitian.
    pub h: PauliSum,
    /// Qubits the fragment acts on.
    pub support: Vec<usize>,
    /// Contiguous window of `min(D, N)` qubits containing the support.
    pub domain: Vec<usize>,
}

/// Ground energy and an orthonormal basis of the (possibly degenerate)
/// ground eigenspace.
#[derive(Clone, Debug)]
pub struct GroundTruth {
    pub e_gs: f64,
    pub gs_basis: Vec<StateVector>,
    pub degeneracy_tol: f64,
}

/// The TFIM Hamiltonian as a canonical Pauli sum: `N−1` coupling terms with
/// coefficient `−J` and `N` field terms with coefficient `g`.
pub fn build_tfim(p: &TfimParams) -> PauliSum {
    let mut terms = Vec::with_capacity(2 * p.n - 1);
    for i in 0..p.n - 1 {
        let zz = PauliString::z(p.n, i).mul(&PauliString::z(p.n, i + 1));
        terms.push((Complex64::new(-p.j, 0.0), zz));
    }
    for i in 0..p.n {
        terms.push((Complex64::new(p.g, 0.0), PauliString::x(p.n, i)));
    }
    PauliSum::from_terms(p.n, terms)
}

/// Split the TFIM into `N−1` two-local pieces with field shares chosen so
/// that `Σ_k h[k]` equals [`build_tfim`] exactly. Each piece's domain is a
/// contiguous window of size `min(d, n)` around its support, shifted inward
/// at the chain ends.
pub fn trotterize_tfim(p: &TfimParams, d: usize) -> Vec<TrotterPiece> {
    assert!(d >= 2, "domain size must be at least 2");
    let n = p.n;
    let w = d.min(n);
    let mut pieces = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let mut terms = Vec::new();
        let zz = PauliString::z(n, k).mul(&PauliString::z(n, k + 1));
        terms.push((Complex64::new(-p.j, 0.0), zz));
        // edge qubits carry their full field, interior qubits split it
        for q in [k, k + 1] {
            let share = if q == 0 || q == n - 1 { p.g } else { p.g / 2.0 };
            terms.push((Complex64::new(share, 0.0), PauliString::x(n, q)));
        }
        let h = PauliSum::from_terms(n, terms);
        let lo = (k as isize - ((w as isize - 2) / 2)).clamp(0, (n - w) as isize) as usize;
        pieces.push(TrotterPiece {
            h,
            support: vec![k, k + 1],
            domain: (lo..lo + w).collect(),
        });
    }
    pieces
}

/// A single piece covering the whole register: full-domain QITE collapses to
/// the untrotterized algorithm with this.
pub fn full_piece(h: &PauliSum) -> TrotterPiece {
    let n = h.n_qubits();
    TrotterPiece {
        h: h.clone(),
        support: h.support(),
        domain: (0..n).collect(),
    }
}

/// Ground energy and eigenspace by dense diagonalization. Eigenvectors with
/// eigenvalue within `degeneracy_tol` of the smallest are all included.
pub fn exact_ground(h: &PauliSum, degeneracy_tol: f64) -> GroundTruth {
    let n = h.n_qubits();
    let (vals, vecs) = eigh_ascending(&h.to_matrix());
    let e_gs = vals[0];
    let mut basis = Vec::new();
    for (k, &v) in vals.iter().enumerate() {
        if v <= e_gs + degeneracy_tol {
            basis.push(StateVector::from_amplitudes(
                n,
                vecs.column(k).to_vec(),
            ));
        } else {
            break;
        }
    }
    GroundTruth {
        e_gs,
        gs_basis: basis,
        degeneracy_tol,
    }
}

/// One record of an exact-ITE trajectory.
#[derive(Clone, Debug)]
pub struct IteStep {
    pub beta: f64,
    pub state: StateVector,
    pub energy: f64,
}

/// Exact imaginary-time evolution: repeatedly apply `e^{−Δτ·H}` and
/// renormalize, recording `β = m·Δτ` and the energy. The initial state is
/// included as the `β = 0` record, so the result has `steps + 1` entries.
///
/// Logs a warning when the initial overlap with the ground space is below
/// 1e-8 (the evolution then converges somewhere else or not at all).
pub fn exact_ite_evolve(
    h: &PauliSum,
    psi0: &StateVector,
    dtau: f64,
    steps: usize,
) -> Vec<IteStep> {
    assert!(dtau > 0.0, "time step must be positive");
    assert_eq!(h.n_qubits(), psi0.n_qubits(), "state/operator size mismatch");
    let hm = h.to_matrix();
    let (vals, vecs) = eigh_ascending(&hm);
    let e_gs = vals[0];
    let mut overlap_sq = 0.0;
    for (k, &v) in vals.iter().enumerate() {
        if v <= e_gs + 1e-10 {
            let gk = StateVector::from_amplitudes(psi0.n_qubits(), vecs.column(k).to_vec());
            overlap_sq += gk.inner(psi0).norm_sqr();
        }
    }
    if overlap_sq.sqrt() < 1e-8 {
        log::warn!(
            "initial state has ground-space overlap {:.2e}; ITE will not reach the ground state",
            overlap_sq.sqrt()
        );
    }

    let u = hermitian_expm(&hm, Complex64::new(-dtau, 0.0));
    let mut records = Vec::with_capacity(steps + 1);
    let mut state = psi0.clone();
    records.push(IteStep {
        beta: 0.0,
        state: state.clone(),
        energy: state.expectation(h).re,
    });
    for m in 1..=steps {
        let v = Array1::from_vec(state.amplitudes().to_vec());
        let evolved = u.dot(&v);
        let raw = StateVector::from_amplitudes(state.n_qubits(), evolved.to_vec());
        state = raw.normalized().0;
        records.push(IteStep {
            beta: m as f64 * dtau,
            state: state.clone(),
            energy: state.expectation(h).re,
        });
    }
    records
}

/// Load a generic Hamiltonian from the one-term-per-line text format.
pub fn load_hamiltonian(path: &std::path::Path) -> Result<PauliSum, crate::Error> {
    let text = std::fs::read_to_string(path)?;
    PauliSum::from_text(&text).map_err(|(line, msg)| crate::Error::HamiltonianParse {
        path: path.display().to_string(),
        line,
        msg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tfim_term_structure() {
        let h = build_tfim(&TfimParams::new(2, 1.0, 1.0));
        let rendered: Vec<(f64, String)> = h
            .terms()
            .iter()
            .map(|(c, p)| (c.re, p.to_string()))
            .collect();
        assert!(rendered.contains(&(-1.0, "ZZ".to_string())));
        assert!(rendered.contains(&(1.0, "XI".to_string())));
        assert!(rendered.contains(&(1.0, "IX".to_string())));
        assert_eq!(rendered.len(), 3);

        let h = build_tfim(&TfimParams::new(3, 0.0, 1.0));
        assert_eq!(h.terms().len(), 3);
        assert!(h.terms().iter().all(|(_, p)| p.to_string().matches('X').count() == 1));

        let h = build_tfim(&TfimParams::new(8, 1.0, 1.0));
        assert_eq!(h.terms().len(), 15);
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn trotter_field_shares() {
        // N=3, J=1, g=1, d=2
        let pieces = trotterize_tfim(&TfimParams::new(3, 1.0, 1.0), 2);
        assert_eq!(pieces.len(), 2);
        let terms0: Vec<(f64, String)> = pieces[0]
            .h
            .terms()
            .iter()
            .map(|(c, p)| (c.re, p.to_string()))
            .collect();
        assert!(terms0.contains(&(-1.0, "ZZI".to_string())));
        assert!(terms0.contains(&(1.0, "XII".to_string())));
        assert!(terms0.contains(&(0.5, "IXI".to_string())));
        let terms1: Vec<(f64, String)> = pieces[1]
            .h
            .terms()
            .iter()
            .map(|(c, p)| (c.re, p.to_string()))
            .collect();
        assert!(terms1.contains(&(-1.0, "IZZ".to_string())));
        assert!(terms1.contains(&(0.5, "IXI".to_string())));
        assert!(terms1.contains(&(1.0, "IIX".to_string())));
    }

    #[test]
    fn trotter_pieces_sum_to_hamiltonian() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 2..=8 {
            let p = TfimParams::new(n, rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
            for d in [2, 4, 6] {
                let pieces = trotterize_tfim(&p, d);
                assert_eq!(pieces.len(), n - 1);
                let mut terms = Vec::new();
                for piece in &pieces {
                    terms.extend(piece.h.terms().iter().cloned());
                    // support within domain, domain contiguous of size min(d,n)
                    assert_eq!(piece.domain.len(), d.min(n));
                    for win in piece.domain.windows(2) {
                        assert_eq!(win[1], win[0] + 1);
                    }
                    for q in &piece.support {
                        assert!(piece.domain.contains(q));
                    }
                }
                let total = PauliSum::from_terms(n, terms);
                assert_eq!(total, build_tfim(&p));
            }
        }
    }

    #[test]
    fn trotter_domain_clipping() {
        let pieces = trotterize_tfim(&TfimParams::new(8, 1.0, 1.0), 4);
        assert_eq!(pieces[0].domain, vec![0, 1, 2, 3]);
        assert_eq!(pieces[3].domain, vec![2, 3, 4, 5]);
        assert_eq!(pieces[6].domain, vec![4, 5, 6, 7]);
    }

    #[test]
    #[should_panic(expected = "at least 2")]
    fn trotter_rejects_tiny_domain() {
        trotterize_tfim(&TfimParams::new(4, 1.0, 1.0), 1);
    }

    #[test]
    fn ground_truth_examples() {
        // N=2, J=1, g=1 → e_gs = −√5
        let h = build_tfim(&TfimParams::new(2, 1.0, 1.0));
        let gt = exact_ground(&h, 1e-8);
        assert_abs_diff_eq!(gt.e_gs, -5f64.sqrt(), epsilon = 1e-9);
        assert_eq!(gt.gs_basis.len(), 1);

        // classical limit: e_gs = −J(N−1), doubly degenerate
        let h = build_tfim(&TfimParams::new(8, 1.0, 0.0));
        let gt = exact_ground(&h, 1e-8);
        assert_abs_diff_eq!(gt.e_gs, -7.0, epsilon = 1e-10);
        assert_eq!(gt.gs_basis.len(), 2);

        // single-qubit H = X → ground (|0⟩−|1⟩)/√2
        let h = PauliSum::from_terms(
            1,
            vec![(Complex64::new(1.0, 0.0), PauliString::from_symbols("X"))],
        );
        let gt = exact_ground(&h, 1e-8);
        assert_abs_diff_eq!(gt.e_gs, -1.0, epsilon = 1e-12);
        let minus = StateVector::from_amplitudes(
            1,
            vec![
                Complex64::new(1.0 / 2f64.sqrt(), 0.0),
                Complex64::new(-1.0 / 2f64.sqrt(), 0.0),
            ],
        );
        assert_abs_diff_eq!(minus.fidelity(&gt.gs_basis), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn ground_truth_residuals() {
        let h = build_tfim(&TfimParams::new(5, 1.3, 0.7));
        let gt = exact_ground(&h, 1e-8);
        for v in &gt.gs_basis {
            let hv = v.apply_pauli_sum(&h);
            let resid: f64 = hv
                .amplitudes()
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| (a - b * gt.e_gs).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 1e-9, "residual {resid:e}");
        }
    }

    #[test]
    fn ite_eigenstate_is_fixed() {
        let h = build_tfim(&TfimParams::new(3, 1.0, 0.0));
        let psi0 = StateVector::zero_state(3);
        let traj = exact_ite_evolve(&h, &psi0, 0.25, 5);
        for rec in &traj {
            assert_abs_diff_eq!(rec.energy, -2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(rec.state.fidelity(&[psi0.clone()]), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ite_single_qubit_closed_form() {
        // H = X, ψ₀ = |0⟩: energy after β is −tanh(2β); one Δτ=0.25 step → −tanh(0.5)
        let h = PauliSum::from_terms(
            1,
            vec![(Complex64::new(1.0, 0.0), PauliString::from_symbols("X"))],
        );
        let traj = exact_ite_evolve(&h, &StateVector::basis_state(1, "0"), 0.25, 1);
        assert_abs_diff_eq!(traj[1].energy, -(0.5f64).tanh(), epsilon = 1e-12);
    }

    #[test]
    fn ite_monotone_and_convergent() {
        let p = TfimParams::new(4, 1.0, 1.0);
        let h = build_tfim(&p);
        let gt = exact_ground(&h, 1e-8);
        let traj = exact_ite_evolve(&h, &StateVector::zero_state(4), 0.25, 80);
        for pair in traj.windows(2) {
            assert!(pair[1].energy <= pair[0].energy + 1e-10);
            // real-amplitude start: fidelity non-decreasing
            let f0 = pair[0].state.fidelity(&gt.gs_basis);
            let f1 = pair[1].state.fidelity(&gt.gs_basis);
            assert!(f1 >= f0 - 1e-10);
        }
        assert!(traj.last().unwrap().energy >= gt.e_gs - 1e-9);
        assert_abs_diff_eq!(traj.last().unwrap().energy, gt.e_gs, epsilon = 1e-6);
    }

    #[test]
    fn hamiltonian_file_roundtrip() {
        let h = build_tfim(&TfimParams::new(4, 1.0, 0.5));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        std::fs::write(&path, h.to_text()).unwrap();
        let back = load_hamiltonian(&path).unwrap();
        assert_eq!(back, h);
    }
}
