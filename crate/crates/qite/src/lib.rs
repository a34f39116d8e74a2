//! Classical simulation of imaginary-time ground-state methods for spin
//! Hamiltonians.
//!
//! Three routes to the ground state of a Pauli-sum Hamiltonian:
//!
//! * exact diagonalization and exact normalized imaginary-time evolution
//!   ([`model`]) — the reference oracle;
//! * QITE ([`qite`]) — each Trotter piece's non-unitary step is fitted by a
//!   unitary generated on a small qubit domain, via a least-squares solve
//!   over the domain's Pauli strings;
//! * varQITE ([`varqite`]) — McLachlan-projected imaginary-time flow of the
//!   parameters of a hardware-efficient ansatz.
//!
//! [`pauli`], [`statevec`], and [`numerics`] provide the symplectic Pauli
//! algebra, the dense statevector backend, and the Hermitian eigensolver
//! utilities underneath. [`cli`] turns a text config into trajectory files;
//! the `qite` binary is a thin wrapper around it. See `examples/` for
//! entry points to each capability.

pub mod cli;
pub mod model;
pub mod numerics;
pub mod pauli;
pub mod qite;
pub mod statevec;
pub mod varqite;

mod error;
pub use error::Error;
