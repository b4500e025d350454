//! Rewriting single operators into allowed pulses.
//!
//! The allowed set is `R_ix(phi)`, `R_iy(phi)` (`exp(-i phi I_ia)`) and the
//! Ising coupling `J_ij(phi) = exp(-i phi 2 I_iz I_jz)`. `R_iz` appears only
//! in intermediate sequences or when [`ReduceOptions::allow_z`] is set.
//!
//! All pulse lists are in time order (first element applied first).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decompose::{DecompositionPlan, SingleOp};
use crate::error::{Error, Result};
use crate::pauli::{check_spin, Axis, PauliString};

/// Angles below this magnitude are dropped by [`peephole`].
pub const ZERO_ANGLE: f64 = 1e-12;

/// `simulate(cnot_sequence(i, j)) = e^{i CNOT_SEQUENCE_PHASE} * CNOT_ij`.
pub const CNOT_SEQUENCE_PHASE: f64 = -FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationAxis {
    X,
    Y,
    Z,
}

impl RotationAxis {
    pub fn symbol(self) -> char {
        match self {
            RotationAxis::X => 'x',
            RotationAxis::Y => 'y',
            RotationAxis::Z => 'z',
        }
    }

    pub fn from_axis(a: Axis) -> Option<Self> {
        match a {
            Axis::I => None,
            Axis::X => Some(RotationAxis::X),
            Axis::Y => Some(RotationAxis::Y),
            Axis::Z => Some(RotationAxis::Z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum PulseOp {
    /// `exp(-i angle I_{spin,axis})`
    #[serde(rename = "R")]
    Rotation {
        spin: usize,
        axis: RotationAxis,
        angle: f64,
    },
    /// `exp(-i angle 2 I_iz I_jz)`, `i < j`
    #[serde(rename = "J")]
    Coupling { i: usize, j: usize, angle: f64 },
}

impl PulseOp {
    pub fn rx(spin: usize, angle: f64) -> Self {
        PulseOp::Rotation {
            spin,
            axis: RotationAxis::X,
            angle,
        }
    }

    pub fn ry(spin: usize, angle: f64) -> Self {
        PulseOp::Rotation {
            spin,
            axis: RotationAxis::Y,
            angle,
        }
    }

    pub fn rz(spin: usize, angle: f64) -> Self {
        PulseOp::Rotation {
            spin,
            axis: RotationAxis::Z,
            angle,
        }
    }

    /// Coupling between two spins; the pair is stored in ascending order.
    pub fn j(a: usize, b: usize, angle: f64) -> Self {
        PulseOp::Coupling {
            i: a.min(b),
            j: a.max(b),
            angle,
        }
    }

    pub fn angle(&self) -> f64 {
        match *self {
            PulseOp::Rotation { angle, .. } | PulseOp::Coupling { angle, .. } => angle,
        }
    }

    fn with_angle(self, angle: f64) -> Self {
        match self {
            PulseOp::Rotation { spin, axis, .. } => PulseOp::Rotation { spin, axis, angle },
            PulseOp::Coupling { i, j, .. } => PulseOp::Coupling { i, j, angle },
        }
    }

    /// The adjoint pulse.
    pub fn inverse(self) -> Self {
        self.with_angle(-self.angle())
    }

    /// Same generator, so the two can be merged by adding angles.
    fn same_generator(&self, other: &PulseOp) -> bool {
        match (self, other) {
            (
                PulseOp::Rotation {
                    spin: a, axis: x, ..
                },
                PulseOp::Rotation {
                    spin: b, axis: y, ..
                },
            ) => a == b && x == y,
            (PulseOp::Coupling { i: a, j: b, .. }, PulseOp::Coupling { i: c, j: d, .. }) => {
                a == c && b == d
            }
            _ => false,
        }
    }

    pub fn is_allowed(&self, allow_z: bool) -> bool {
        match self {
            PulseOp::Rotation { axis, .. } => allow_z || *axis != RotationAxis::Z,
            PulseOp::Coupling { .. } => true,
        }
    }

    pub fn validate(&self, spins: usize) -> Result<()> {
        match *self {
            PulseOp::Rotation { spin, .. } => check_spin(spin, spins),
            PulseOp::Coupling { i, j, .. } => {
                check_spin(i, spins)?;
                check_spin(j, spins)?;
                if i == j {
                    Err(Error::SameSpin(i))
                } else if i > j {
                    Err(Error::InvalidOption(format!(
                        "coupling spins must be ascending, got {i} {j}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for PulseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PulseOp::Rotation { spin, axis, angle } => {
                write!(f, "R{}{}({angle})", spin, axis.symbol())
            }
            PulseOp::Coupling { i, j, angle } => write!(f, "J{i}{j}({angle})"),
        }
    }
}

/// A time-ordered pulse list. The target unitary is
/// `e^{i global_phase} * simulate(self)`; the phase is bookkeeping only and
/// verification never relies on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub spins: usize,
    pub ops: Vec<PulseOp>,
    #[serde(rename = "phase", default)]
    pub global_phase: f64,
}

impl PulseSequence {
    pub fn new(spins: usize, ops: Vec<PulseOp>) -> Self {
        PulseSequence {
            spins,
            ops,
            global_phase: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.spins == 0 || self.spins > crate::MAX_SPINS {
            return Err(Error::SpinCount(self.spins, crate::MAX_SPINS));
        }
        self.ops.iter().try_for_each(|op| op.validate(self.spins))
    }

    pub fn only_allowed(&self, allow_z: bool) -> bool {
        self.ops.iter().all(|op| op.is_allowed(allow_z))
    }

    pub fn coupling_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, PulseOp::Coupling { .. }))
            .count()
    }

    fn extend(&mut self, other: PulseSequence) {
        self.ops.extend(other.ops);
        self.global_phase += other.global_phase;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceOptions {
    /// Keep `R_z` pulses instead of expanding them into x/y composites.
    pub allow_z: bool,
    /// Sandwich with pseudo c-NOTs (3 pulses) instead of full c-NOTs.
    pub use_pseudo_cnot: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            allow_z: false,
            use_pseudo_cnot: true,
        }
    }
}

/// `R_iz(phi) = R_iy(-pi/2) R_ix(phi) R_iy(pi/2)`, in time order.
pub fn composite_z(spin: usize, phi: f64) -> Vec<PulseOp> {
    vec![
        PulseOp::ry(spin, FRAC_PI_2),
        PulseOp::rx(spin, phi),
        PulseOp::ry(spin, -FRAC_PI_2),
    ]
}

/// Replaces every `R_z` with its composite unless `allow_z`.
fn lower_z(ops: Vec<PulseOp>, allow_z: bool) -> Vec<PulseOp> {
    if allow_z {
        return ops;
    }
    ops.into_iter()
        .flat_map(|op| match op {
            PulseOp::Rotation {
                spin,
                axis: RotationAxis::Z,
                angle,
            } => composite_z(spin, angle),
            other => vec![other],
        })
        .collect()
}

/// Conjugates every x/y slot onto z.
///
/// `R_iy(pi/2) I_iz R_iy(-pi/2) = I_ix` and `R_ix(-pi/2) I_iz R_ix(pi/2) = I_iy`,
/// so in time order `pre`, `core`, `post` equals `op` exactly.
pub fn axis_transform(op: &SingleOp) -> Result<(Vec<PulseOp>, SingleOp, Vec<PulseOp>)> {
    if op.string.is_identity() {
        return Err(Error::ZeroWeight);
    }
    let mut pre = Vec::new();
    let mut post = Vec::new();
    let mut axes = op.string.axes().to_vec();
    for (k, a) in axes.iter_mut().enumerate() {
        let spin = k + 1;
        match *a {
            Axis::X => {
                pre.push(PulseOp::ry(spin, -FRAC_PI_2));
                post.push(PulseOp::ry(spin, FRAC_PI_2));
            }
            Axis::Y => {
                pre.push(PulseOp::rx(spin, FRAC_PI_2));
                post.push(PulseOp::rx(spin, -FRAC_PI_2));
            }
            Axis::I | Axis::Z => continue,
        }
        *a = Axis::Z;
    }
    Ok((pre, SingleOp::new(PauliString::new(axes), op.angle), post))
}

/// c-NOT (control `i` on `|1>`, target `j`) up to the phase
/// [`CNOT_SEQUENCE_PHASE`]:
/// `R_iz(pi/2) R_jx(pi/2) R_jy(pi/2) J_ij(-pi/2) R_jy(-pi/2)` in matrix order.
pub fn cnot_sequence(i: usize, j: usize) -> Result<Vec<PulseOp>> {
    if i == j {
        return Err(Error::SameSpin(i));
    }
    Ok(vec![
        PulseOp::ry(j, -FRAC_PI_2),
        PulseOp::j(i, j, -FRAC_PI_2),
        PulseOp::ry(j, FRAC_PI_2),
        PulseOp::rx(j, FRAC_PI_2),
        PulseOp::rz(i, FRAC_PI_2),
    ])
}

/// `U_ij = R_jx(pi/2) J_ij(pi/2) R_jy(pi/2)` (matrix order), or its exact
/// adjoint. Conjugation by `U_ij` maps `I_jz` to `2 I_iz I_jz`.
pub fn pseudo_cnot(i: usize, j: usize, inverse: bool) -> Result<Vec<PulseOp>> {
    if i == j {
        return Err(Error::SameSpin(i));
    }
    let forward = vec![
        PulseOp::ry(j, FRAC_PI_2),
        PulseOp::j(i, j, FRAC_PI_2),
        PulseOp::rx(j, FRAC_PI_2),
    ];
    Ok(if inverse {
        forward.into_iter().rev().map(PulseOp::inverse).collect()
    } else {
        forward
    })
}

/// Realizes `exp(-i angle B_s)` for an all-z string `s`.
///
/// Weight 1 is a z rotation, weight 2 a single coupling. Higher weights
/// conjugate the reduced string (first spin removed) by a flip on the first
/// two spins of the support, recursively.
pub fn reduce_coupling_order(core: &SingleOp, options: ReduceOptions) -> Result<PulseSequence> {
    let s = &core.string;
    if !s.is_z_string() {
        return Err(Error::NotZString(s.to_string()));
    }
    let spins = s.spins();
    let support = s.support();
    let mut seq = PulseSequence::new(spins, Vec::new());
    match support.as_slice() {
        [] => return Err(Error::ZeroWeight),
        [i] => seq.ops.push(PulseOp::rz(*i, core.angle)),
        [i, j] => seq.ops.push(PulseOp::j(*i, *j, core.angle)),
        [first, second, rest @ ..] => {
            let mut on = vec![*second];
            on.extend_from_slice(rest);
            let reduced = SingleOp::new(PauliString::z_on(spins, &on)?, core.angle);
            let inner = reduce_coupling_order(&reduced, options)?;
            if options.use_pseudo_cnot {
                seq.ops.extend(pseudo_cnot(*first, *second, true)?);
                seq.extend(inner);
                seq.ops.extend(pseudo_cnot(*first, *second, false)?);
            } else {
                seq.ops.extend(cnot_sequence(*first, *second)?);
                seq.extend(inner);
                seq.ops.extend(cnot_sequence(*first, *second)?);
                seq.global_phase -= 2.0 * CNOT_SEQUENCE_PHASE;
            }
        }
    }
    seq.ops = lower_z(seq.ops, options.allow_z);
    Ok(seq)
}

/// Lowers one single operator to allowed pulses.
fn reduce_single(op: &SingleOp, options: ReduceOptions) -> Result<PulseSequence> {
    let spins = op.string.spins();
    let support = op.string.support();
    if support.is_empty() {
        // exp(-i a E/2) is a pure phase
        let mut seq = PulseSequence::new(spins, Vec::new());
        seq.global_phase = -op.angle / 2.0;
        return Ok(seq);
    }
    if let [spin] = support.as_slice() {
        let axis = RotationAxis::from_axis(op.string.axis(*spin)).expect("nonzero axis");
        let rot = PulseOp::Rotation {
            spin: *spin,
            axis,
            angle: op.angle,
        };
        return Ok(PulseSequence::new(
            spins,
            lower_z(vec![rot], options.allow_z),
        ));
    }
    let (pre, core, post) = axis_transform(op)?;
    let mut seq = PulseSequence::new(spins, pre);
    seq.extend(reduce_coupling_order(&core, options)?);
    seq.ops.extend(post);
    Ok(seq)
}

/// Lowers every single operator of `plan` and runs [`peephole`].
pub fn reduce_plan(plan: &DecompositionPlan, options: ReduceOptions) -> Result<PulseSequence> {
    let mut seq = PulseSequence::new(plan.spins, Vec::new());
    seq.global_phase = plan.global_phase;
    for op in &plan.ops {
        if op.string.spins() != plan.spins {
            return Err(Error::LengthMismatch(op.string.spins(), plan.spins));
        }
        seq.extend(reduce_single(op, options)?);
    }
    Ok(peephole(&seq))
}

/// Reduces an angle modulo `4 pi` into `[-2 pi, 2 pi)`. Angles already in
/// range are returned unchanged.
pub fn normalize_angle(angle: f64) -> f64 {
    if (-2.0 * PI..2.0 * PI).contains(&angle) {
        angle
    } else {
        (angle + 2.0 * PI).rem_euclid(4.0 * PI) - 2.0 * PI
    }
}

/// Merges directly adjacent pulses with the same generator and drops
/// near-zero pulses. Never reorders.
pub fn peephole(seq: &PulseSequence) -> PulseSequence {
    let mut out: Vec<PulseOp> = Vec::with_capacity(seq.ops.len());
    for op in &seq.ops {
        let op = op.with_angle(normalize_angle(op.angle()));
        match out.last() {
            Some(top) if top.same_generator(&op) => {
                let merged = normalize_angle(top.angle() + op.angle());
                out.pop();
                if merged.abs() >= ZERO_ANGLE {
                    out.push(op.with_angle(merged));
                }
            }
            _ if op.angle().abs() < ZERO_ANGLE => {}
            _ => out.push(op),
        }
    }
    PulseSequence {
        spins: seq.spins,
        ops: out,
        global_phase: seq.global_phase,
    }
}
