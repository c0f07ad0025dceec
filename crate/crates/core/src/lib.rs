//! Deterministic antisymmetrization of two fermionic subsystems on a
//! first-quantized qubit register.
//!
//! Given an antisymmetric target of `N_T` particles and an antisymmetric
//! projectile of `N_p <= N_T` particles, the generated circuit produces
//! the fully antisymmetric state of all `N_T + N_p` particles using a
//! Dicke-state ancilla register, controlled single-particle swaps, `Z`
//! phases and CNOT uncomputation.
//!
//! Modules:
//! - [`qstate`]: dense statevector and gate kernels
//! - [`circuit`]: gate-list IR, metrics, QASM emission and rewrite passes
//! - [`layout`]: qubit assignment for slots and ancillae
//! - [`dicke`]: Dicke states
//! - [`antisym`]: swap schedules and the full circuit
//! - [`oracle`]: brute-force reference states

pub mod antisym;
pub mod circuit;
pub mod dicke;
pub mod error;
pub mod layout;
pub mod oracle;
pub mod qstate;

pub use error::{Error, Result};
