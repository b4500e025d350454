//! Compile an N-spin unitary into a pulse sequence of single-spin x/y
//! rotations and Ising (zz) couplings.
//!
//! The pipeline is:
//!
//! 1. [`generator::extract_generator`]: diagonalize `U` and take the
//!    eigenphases to get a Hermitian `G` with `U = exp(-iG)`.
//! 2. [`generator::expand`]: expand `G` over the product-operator basis
//!    `B_s = 2^(q-1) I_a1 (x) ... (x) I_aN`.
//! 3. [`decompose::plan`]: factor `exp(-iG)` into single operators
//!    `exp(-i b B_s)` (commuting product, Euler sandwich, factorized form, or
//!    first-order Trotter as a fallback).
//! 4. [`reduce::reduce_plan`]: rewrite every single operator with composite
//!    pulses, axis transformation and coupling-order reduction until only
//!    `R_x`, `R_y` and `J_ij` remain.
//! 5. [`sim`]: simulate the sequence and check it against `U` up to a global
//!    phase.
//!
//! [`pipeline::compile_unitary`] runs the whole thing.

pub mod decompose;
pub mod error;
pub mod format;
pub mod gates;
pub mod generator;
pub mod linalg;
pub mod pauli;
pub mod pipeline;
pub mod reduce;
pub mod sim;

pub use decompose::{DecompositionPlan, FactorizedGenerator, SingleOp, Strategy};
pub use error::{Error, Result};
pub use gates::GateSpec;
pub use generator::{BranchConvention, GeneratorExpansion};
pub use linalg::{ComplexMatrix, EigenDecomposition};
pub use num_complex::Complex64;
pub use pauli::{Axis, Commutator, PauliString};
pub use pipeline::{CompileOptions, CompileReport};
pub use reduce::{PulseOp, PulseSequence, RotationAxis};
pub use sim::PhaseCheck;

/// Largest spin count accepted by the compiler.
pub const MAX_SPINS: usize = 10;

/// Largest spin count for which sequences are simulated and verified.
pub const MAX_SIM_SPINS: usize = 6;
