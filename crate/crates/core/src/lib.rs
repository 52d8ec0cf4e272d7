//! Exact simulation of two-level which-path experiments and numerical
//! verification of generalized uncertainty relations for one, two and three
//! qubits.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, Jacobi
//!   eigensolver, trace distance.
//! * [`operators`]: Pauli matrices, `σ_j ⊗ σ_k`, the marking gates and the
//!   named states.
//! * [`states`]: validated density operators, moments, reduced states,
//!   post-selection and the uncertainty-relation reports.
//! * [`experiment`]: fringe scans, visibility, distinguishability, erasure.
//! * [`sampling`]: seeded random states and observables.
//! * [`sweep`]: partitioned property sweeps over the relation families.
//! * [`cli`]: the `whichpath` command-line front end.
//!
//! The continuous position/momentum relation has no finite-dimensional
//! counterpart (a commutator proportional to the identity cannot be
//! traceless) and is not modeled.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod operators;
pub mod sampling;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, StateVector, Tolerance, C64};
pub use states::{DensityOperator, MomentTable, UncertaintyReport};
