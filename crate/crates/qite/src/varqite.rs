//! The variational solver: hardware-efficient ansatz, analytic tangent
//! states, McLachlan `M θ̇ = −V` assembly, and the Euler parameter update
//! `θ ← θ − η M⁻¹V`.
//!
//! Rotation convention: `Ry(θ) = exp(−iθY/2)`, `Rz(θ) = exp(−iθZ/2)`. The
//! half-angle convention matters — derivative magnitudes carry the factor
//! of 1/2 throughout `M` and `V`.

use crate::model::GroundTruth;
use crate::numerics::lstsq_psd;
use crate::pauli::{PauliString, PauliSum};
use crate::statevec::StateVector;
use ndarray::{array, Array2};
use num_complex::Complex64;

/// A parameterized gate in the ansatz circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Ry { qubit: usize, param: usize },
    Rz { qubit: usize, param: usize },
    Cnot { control: usize, target: usize },
}

/// The layered circuit structure: per repetition an `Ry` layer, an `Rz`
/// layer, and a CNOT ladder `(0→1, 1→2, …)`.
#[derive(Clone, Debug)]
pub struct Ansatz {
    n: usize,
    reps: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Ansatz {
    /// The hardware-efficient ansatz with `2·n·reps` parameters.
    pub fn hardware_efficient(n: usize, reps: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        assert!(reps >= 1, "need at least one repetition");
        let mut gates = Vec::new();
        let mut param = 0;
        for _ in 0..reps {
            for q in 0..n {
                gates.push(Gate::Ry { qubit: q, param });
                param += 1;
            }
            for q in 0..n {
                gates.push(Gate::Rz { qubit: q, param });
                param += 1;
            }
            for q in 0..n.saturating_sub(1) {
                gates.push(Gate::Cnot {
                    control: q,
                    target: q + 1,
                });
            }
        }
        Ansatz {
            n,
            reps,
            gates,
            n_params: param,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Structured-text description: qubit count, repetitions, then one gate
    /// per line. Enough to reproduce a run from config alone.
    pub fn describe(&self) -> String {
        let mut out = format!("n = {}\nreps = {}\n", self.n, self.reps);
        for g in &self.gates {
            match g {
                Gate::Ry { qubit, param } => out.push_str(&format!("ry q{qubit} p{param}\n")),
                Gate::Rz { qubit, param } => out.push_str(&format!("rz q{qubit} p{param}\n")),
                Gate::Cnot { control, target } => {
                    out.push_str(&format!("cnot q{control} q{target}\n"))
                }
            }
        }
        out
    }
}

fn ry_matrix(theta: f64) -> Array2<Complex64> {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    array![
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

fn rz_matrix(theta: f64) -> Array2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    array![
        [Complex64::from_polar(1.0, -theta / 2.0), o],
        [o, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

fn cnot_matrix() -> Array2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    array![
        [l, o, o, o],
        [o, l, o, o],
        [o, o, o, l],
        [o, o, l, o],
    ]
}

fn apply_gate(state: &StateVector, gate: &Gate, theta: &[f64]) -> StateVector {
    match gate {
        Gate::Ry { qubit, param } => {
            state.apply_dense_on_domain(&ry_matrix(theta[*param]), &[*qubit])
        }
        Gate::Rz { qubit, param } => {
            state.apply_dense_on_domain(&rz_matrix(theta[*param]), &[*qubit])
        }
        Gate::Cnot { control, target } => {
            state.apply_dense_on_domain(&cnot_matrix(), &[*control, *target])
        }
    }
}

/// `|ψ(θ)⟩ = U(θ)|0…0⟩`, unit norm.
pub fn prepare_state(ansatz: &Ansatz, theta: &[f64]) -> StateVector {
    assert_eq!(theta.len(), ansatz.n_params, "parameter count mismatch");
    let mut state = StateVector::zero_state(ansatz.n);
    for gate in &ansatz.gates {
        state = apply_gate(&state, gate, theta);
    }
    state
}

/// `|∂ψ/∂θ_i⟩` for every parameter, computed by inserting the generator
/// `−(i/2)·P` right after gate `i` and replaying the rest of the circuit.
/// The returned vectors are not normalized.
pub fn tangent_states(ansatz: &Ansatz, theta: &[f64]) -> Vec<StateVector> {
    assert_eq!(theta.len(), ansatz.n_params, "parameter count mismatch");
    let n = ansatz.n;
    let minus_half_i = Complex64::new(0.0, -0.5);
    // prefix[k] = state after the first k gates
    let mut prefix = Vec::with_capacity(ansatz.gates.len() + 1);
    prefix.push(StateVector::zero_state(n));
    for gate in &ansatz.gates {
        prefix.push(apply_gate(prefix.last().unwrap(), gate, theta));
    }
    let mut tangents: Vec<Option<StateVector>> = vec![None; ansatz.n_params];
    for (k, gate) in ansatz.gates.iter().enumerate() {
        let (param, generator) = match gate {
            Gate::Ry { qubit, param } => (*param, PauliString::y(n, *qubit)),
            Gate::Rz { qubit, param } => (*param, PauliString::z(n, *qubit)),
            Gate::Cnot { .. } => continue,
        };
        let mut t = prefix[k + 1].apply_pauli(&generator).scaled(minus_half_i);
        for later in &ansatz.gates[k + 1..] {
            t = apply_gate(&t, later, theta);
        }
        tangents[param] = Some(t);
    }
    tangents
        .into_iter()
        .map(|t| t.expect("every parameter index used exactly once"))
        .collect()
}

/// `M_ij = Re[⟨∂_iψ|∂_jψ⟩ + ⟨∂_iψ|ψ⟩⟨ψ|∂_jψ⟩]`; with `second_term` off only
/// the first bracket is kept.
pub fn compute_m(
    tangents: &[StateVector],
    psi: &StateVector,
    second_term: bool,
) -> Array2<f64> {
    let len = tangents.len();
    let overlaps: Vec<Complex64> = tangents.iter().map(|t| t.inner(psi)).collect();
    let mut m = Array2::zeros((len, len));
    for i in 0..len {
        for j in i..len {
            let mut v = tangents[i].inner(&tangents[j]);
            if second_term {
                v += overlaps[i] * overlaps[j].conj();
            }
            m[[i, j]] = v.re;
            m[[j, i]] = v.re;
        }
    }
    m
}

/// `V_i = Re⟨∂_iψ|H|ψ⟩`, equal to half the energy gradient.
pub fn compute_v(tangents: &[StateVector], psi: &StateVector, h: &PauliSum) -> Vec<f64> {
    assert!(h.is_hermitian(1e-12), "Hamiltonian must be Hermitian");
    let hpsi = psi.apply_pauli_sum(h);
    tangents.iter().map(|t| t.inner(&hpsi).re).collect()
}

/// `V` via the parameter-shift rule: `∂E/∂θ_i = [E(θ+π/2·e_i) −
/// E(θ−π/2·e_i)]/2`, then `V_i = ∂E/∂θ_i / 2`. Exact for Pauli rotations.
pub fn parameter_shift_v(ansatz: &Ansatz, theta: &[f64], h: &PauliSum) -> Vec<f64> {
    assert!(h.is_hermitian(1e-12), "Hamiltonian must be Hermitian");
    let energy = |th: &[f64]| prepare_state(ansatz, th).expectation(h).re;
    let mut shifted = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            shifted[i] = theta[i] + std::f64::consts::FRAC_PI_2;
            let up = energy(&shifted);
            shifted[i] = theta[i] - std::f64::consts::FRAC_PI_2;
            let down = energy(&shifted);
            shifted[i] = theta[i];
            (up - down) / 4.0
        })
        .collect()
}

/// Gradient evaluation strategy for `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VMethod {
    /// Tangent-state inner products (exact in a state-vector simulator).
    Analytic,
    /// Parameter-shift energy evaluations.
    ParameterShift,
}

/// Knobs of a varQITE run.
#[derive(Clone, Debug)]
pub struct VarQiteConfig {
    /// Step size η of the Euler update (plays the role of Δτ).
    pub eta: f64,
    /// Step budget.
    pub steps: usize,
    /// Keep the `⟨∂_iψ|ψ⟩⟨ψ|∂_jψ⟩` term of `M` (the published form).
    pub m_second_term: bool,
    /// Ridge λ added to `M`'s diagonal before solving.
    pub m_regularization: f64,
    /// How `V` is evaluated.
    pub v_method: VMethod,
    /// Constant initial value for every parameter.
    pub theta0: f64,
    /// Relative eigenvalue cutoff for the pseudo-inverse solve.
    pub rcond: f64,
    /// Early-stop threshold on `‖V‖` (0 disables early stopping).
    pub stop_v_norm: f64,
    /// Record fidelity against the supplied ground truth.
    pub record_fidelity: bool,
}

impl Default for VarQiteConfig {
    fn default() -> Self {
        VarQiteConfig {
            eta: 0.05,
            steps: 200,
            m_second_term: true,
            m_regularization: 1e-6,
            v_method: VMethod::Analytic,
            theta0: std::f64::consts::FRAC_PI_3,
            rcond: 1e-8,
            stop_v_norm: 0.0,
            record_fidelity: true,
        }
    }
}

impl VarQiteConfig {
    fn validate(&self) {
        assert!(self.eta > 0.0, "eta must be positive");
        assert!(self.m_regularization >= 0.0, "ridge must be non-negative");
        assert!(self.rcond > 0.0 && self.rcond < 1.0, "rcond must lie in (0, 1)");
    }
}

/// Diagnostics of a single update.
#[derive(Clone, Debug)]
pub struct StepDiagnostics {
    pub energy: f64,
    pub v_norm: f64,
    /// Ratio of extreme `|eigenvalue|`s of the regularized `M`.
    pub m_condition: f64,
}

/// One Euler update: solve `(M + λI)x = V`, return `θ − η·x`.
pub fn varqite_step(
    theta: &[f64],
    ansatz: &Ansatz,
    h: &PauliSum,
    cfg: &VarQiteConfig,
) -> (Vec<f64>, StepDiagnostics) {
    cfg.validate();
    let psi = prepare_state(ansatz, theta);
    let tangents = tangent_states(ansatz, theta);
    let mut m = compute_m(&tangents, &psi, cfg.m_second_term);
    for i in 0..m.dim().0 {
        m[[i, i]] += cfg.m_regularization;
    }
    let v = match cfg.v_method {
        VMethod::Analytic => compute_v(&tangents, &psi, h),
        VMethod::ParameterShift => parameter_shift_v(ansatz, theta, h),
    };
    let x = lstsq_psd(&m, &v, cfg.rcond);
    let next: Vec<f64> = theta
        .iter()
        .zip(x.iter())
        .map(|(t, dx)| t - cfg.eta * dx)
        .collect();
    let v_norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let m_condition = {
        let mc = m.mapv(Complex64::from);
        let (vals, _) = crate::numerics::eigh_ascending(&mc);
        let hi = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let lo = vals.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
        if lo > 0.0 { hi / lo } else { f64::INFINITY }
    };
    (
        next,
        StepDiagnostics {
            energy: psi.expectation(h).re,
            v_norm,
            m_condition,
        },
    )
}

/// Per-step record of a varQITE trajectory.
#[derive(Clone, Debug)]
pub struct VarQiteStepRecord {
    pub step: usize,
    pub beta: f64,
    pub energy: f64,
    pub fidelity: Option<f64>,
    pub v_norm: f64,
}

/// A full varQITE run.
#[derive(Clone, Debug)]
pub struct VarQiteTrajectory {
    pub records: Vec<VarQiteStepRecord>,
    /// `‖V‖` dropped below `stop_v_norm` before the step budget ran out.
    pub converged: bool,
    /// Final parameters.
    pub theta: Vec<f64>,
}

/// Run varQITE from the constant initialization `θ_i = theta0`.
pub fn run_varqite(
    h: &PauliSum,
    ansatz: &Ansatz,
    cfg: &VarQiteConfig,
    ground: Option<&GroundTruth>,
) -> VarQiteTrajectory {
    cfg.validate();
    assert_eq!(h.n_qubits(), ansatz.n_qubits(), "size mismatch");
    let fid = |state: &StateVector| -> Option<f64> {
        if cfg.record_fidelity {
            ground.map(|g| state.fidelity(&g.gs_basis))
        } else {
            None
        }
    };
    let mut theta = vec![cfg.theta0; ansatz.n_params()];
    let psi0 = prepare_state(ansatz, &theta);
    let mut records = Vec::with_capacity(cfg.steps + 1);
    records.push(VarQiteStepRecord {
        step: 0,
        beta: 0.0,
        energy: psi0.expectation(h).re,
        fidelity: fid(&psi0),
        v_norm: f64::NAN,
    });
    let mut converged = false;
    for t in 1..=cfg.steps {
        let (next, diag) = varqite_step(&theta, ansatz, h, cfg);
        theta = next;
        let psi = prepare_state(ansatz, &theta);
        records.push(VarQiteStepRecord {
            step: t,
            beta: t as f64 * cfg.eta,
            energy: psi.expectation(h).re,
            fidelity: fid(&psi),
            v_norm: diag.v_norm,
        });
        log::debug!(
            "varqite step {t}: E = {:.8}, ‖V‖ = {:.3e}, cond(M) ≈ {:.2e}",
            diag.energy,
            diag.v_norm,
            diag.m_condition
        );
        if cfg.stop_v_norm > 0.0 && diag.v_norm < cfg.stop_v_norm {
            converged = true;
            break;
        }
    }
    VarQiteTrajectory {
        records,
        converged,
        theta,
    }
}
