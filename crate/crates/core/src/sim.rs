//! Pulse sequences back to matrices, and equivalence up to global phase.

use num_complex::Complex64;

use crate::decompose::{DecompositionPlan, SingleOp};
use crate::error::{Error, Result};
use crate::linalg::{matrix_exp_hermitian, ComplexMatrix};
use crate::reduce::{PulseOp, PulseSequence, RotationAxis};

/// 2x2 matrix of `exp(-i angle I_axis)`.
fn rotation_block(axis: RotationAxis, angle: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (angle / 2.0).sin_cos();
    let z = Complex64::new(0.0, 0.0);
    match axis {
        RotationAxis::X => [
            [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ],
        RotationAxis::Y => [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ],
        RotationAxis::Z => [[Complex64::new(c, -s), z], [z, Complex64::new(c, s)]],
    }
}

/// `m <- op * m`.
fn apply_left(op: &PulseOp, spins: usize, m: &mut ComplexMatrix) {
    let dim = m.dim();
    match *op {
        PulseOp::Rotation { spin, axis, angle } => {
            let bit = 1usize << (spins - spin);
            let b = rotation_block(axis, angle);
            for r0 in (0..dim).filter(|r| r & bit == 0) {
                let r1 = r0 | bit;
                for c in 0..dim {
                    let (x0, x1) = (m[(r0, c)], m[(r1, c)]);
                    m[(r0, c)] = b[0][0] * x0 + b[0][1] * x1;
                    m[(r1, c)] = b[1][0] * x0 + b[1][1] * x1;
                }
            }
        }
        PulseOp::Coupling { i, j, angle } => {
            let (bi, bj) = (1usize << (spins - i), 1usize << (spins - j));
            let same = Complex64::from_polar(1.0, -angle / 2.0);
            let diff = same.conj();
            for r in 0..dim {
                let f = if (r & bi == 0) == (r & bj == 0) {
                    same
                } else {
                    diff
                };
                for c in 0..dim {
                    m[(r, c)] *= f;
                }
            }
        }
    }
}

/// Closed-form matrix of one pulse on `spins` spins.
pub fn op_matrix(op: &PulseOp, spins: usize) -> Result<ComplexMatrix> {
    op.validate(spins)?;
    let mut m = ComplexMatrix::identity(1 << spins);
    apply_left(op, spins, &mut m);
    Ok(m)
}

/// Product of the pulses with the last one leftmost.
pub fn simulate(seq: &PulseSequence) -> Result<ComplexMatrix> {
    seq.validate()?;
    let mut m = ComplexMatrix::identity(1 << seq.spins);
    for op in &seq.ops {
        apply_left(op, seq.spins, &mut m);
    }
    Ok(m)
}

/// `exp(-i angle B_s)` by matrix exponential.
pub fn single_op_matrix(op: &SingleOp) -> Result<ComplexMatrix> {
    matrix_exp_hermitian(&op.string.materialize().scale_real(op.angle))
}

/// Product of a plan's single operators (last leftmost), without the
/// plan's recorded global phase.
pub fn simulate_plan(plan: &DecompositionPlan) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::identity(1 << plan.spins);
    for op in &plan.ops {
        m = single_op_matrix(op)?.multiply(&m)?;
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCheck {
    pub equal: bool,
    /// `arg(lambda)` with `A ~ lambda B`.
    pub phase: f64,
    /// `max |A - lambda B|`.
    pub residual: f64,
}

/// Tests `A = lambda B` with `|lambda| = 1`, taking `lambda` from the
/// largest-magnitude entry of `B`.
pub fn equal_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<PhaseCheck> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let (idx, pivot) = b
        .as_slice()
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (k, z)| {
            if z.norm() > best.1 {
                (k, z.norm())
            } else {
                best
            }
        });
    if pivot == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let lambda = a.as_slice()[idx] / b.as_slice()[idx];
    let residual = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - lambda * y).norm())
        .fold(0.0, f64::max);
    Ok(PhaseCheck {
        equal: residual < tol && (lambda.norm() - 1.0).abs() < tol,
        phase: lambda.arg(),
        residual,
    })
}
