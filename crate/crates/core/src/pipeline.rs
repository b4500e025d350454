//! End-to-end compilation: generator, decomposition, reduction, verification.

use serde::{Deserialize, Serialize};

use crate::decompose::{self, FactorizedGenerator, PlanOptions, Strategy, DEFAULT_TROTTER_STEPS};
use crate::error::{Error, Result};
use crate::generator::{self, BranchConvention, GeneratorExpansion, COEFF_TOL};
use crate::linalg::{matrix_exp_hermitian, ComplexMatrix};
use crate::reduce::{reduce_plan, PulseSequence, ReduceOptions};
use crate::sim::{equal_up_to_phase, simulate};
use crate::{MAX_SIM_SPINS, MAX_SPINS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompileOptions {
    pub branch: BranchConvention,
    pub allow_z: bool,
    pub use_pseudo_cnot: bool,
    pub trotter_steps: usize,
    pub tol: f64,
    /// Simulate and compare; skipped above [`MAX_SIM_SPINS`].
    pub verify: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            branch: BranchConvention::PrincipalLower,
            allow_z: false,
            use_pseudo_cnot: true,
            trotter_steps: DEFAULT_TROTTER_STEPS,
            tol: 1e-9,
            verify: true,
        }
    }
}

impl CompileOptions {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidOption(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.trotter_steps == 0 {
            return Err(Error::InvalidOption(
                "trotter steps must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn reduce_options(&self) -> ReduceOptions {
        ReduceOptions {
            allow_z: self.allow_z,
            use_pseudo_cnot: self.use_pseudo_cnot,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileReport {
    pub sequence: PulseSequence,
    pub exact: bool,
    pub strategy: Strategy,
    /// Best-effort `theta` with `U = e^{i theta} simulate(sequence)`.
    pub global_phase: f64,
    /// `max |U - lambda simulate(sequence)|`, when verification ran.
    pub verification_residual: Option<f64>,
    /// Phase found by verification, when it ran.
    pub verified_phase: Option<f64>,
    pub op_count: usize,
    pub tol: f64,
}

impl CompileReport {
    /// Verification ran and the residual is within `10 tol`.
    pub fn verified(&self) -> Option<bool> {
        self.verification_residual.map(|r| r < 10.0 * self.tol)
    }
}

fn finish(
    target: &ComplexMatrix,
    sequence: PulseSequence,
    exact: bool,
    strategy: Strategy,
    opts: &CompileOptions,
) -> Result<CompileReport> {
    let (residual, phase) = if opts.verify && sequence.spins <= MAX_SIM_SPINS {
        let check = equal_up_to_phase(target, &simulate(&sequence)?, 10.0 * opts.tol)?;
        (Some(check.residual), Some(check.phase))
    } else {
        (None, None)
    };
    Ok(CompileReport {
        exact,
        strategy,
        global_phase: sequence.global_phase,
        verification_residual: residual,
        verified_phase: phase,
        op_count: sequence.len(),
        tol: opts.tol,
        sequence,
    })
}

/// Generator expansion of `u`, the first half of [`compile_unitary`].
pub fn expand_unitary(
    u: &ComplexMatrix,
    branch: BranchConvention,
    tol: f64,
) -> Result<GeneratorExpansion> {
    let spins = check_dim(u)?;
    let g = generator::extract_generator(u, branch, tol)?;
    generator::expand(&g, spins, COEFF_TOL)
}

fn check_dim(u: &ComplexMatrix) -> Result<usize> {
    let spins = u.spins().ok_or_else(|| {
        Error::InvalidOption(format!("dimension {} is not a power of two", u.dim()))
    })?;
    if spins == 0 || spins > MAX_SPINS {
        return Err(Error::SpinCount(spins, MAX_SPINS));
    }
    Ok(spins)
}

/// Compiles `u` into allowed pulses.
///
/// A failed verification is not an error: the report carries the residual
/// and [`CompileReport::verified`] returns `Some(false)`.
pub fn compile_unitary(u: &ComplexMatrix, opts: &CompileOptions) -> Result<CompileReport> {
    opts.validate()?;
    let exp = expand_unitary(u, opts.branch, opts.tol)?;
    let plan = decompose::plan(
        &exp,
        PlanOptions {
            trotter_steps: opts.trotter_steps,
        },
    )?;
    let sequence = reduce_plan(&plan, opts.reduce_options())?;
    finish(u, sequence, plan.exact, plan.strategy, opts)
}

/// Compiles `exp(-i G)` for a generator given in factorized form.
pub fn compile_factorized(
    fg: &FactorizedGenerator,
    opts: &CompileOptions,
) -> Result<CompileReport> {
    opts.validate()?;
    let plan = decompose::decompose_factorized(fg);
    let sequence = reduce_plan(&plan, opts.reduce_options())?;
    let target = if opts.verify && fg.spins() <= MAX_SIM_SPINS {
        matrix_exp_hermitian(&fg.matrix())?
    } else {
        ComplexMatrix::identity(1 << fg.spins())
    };
    finish(&target, sequence, plan.exact, plan.strategy, opts)
}
