//! Factor `exp(-iG)` into an ordered product of single operators
//! `exp(-i b B_s)`.
//!
//! Plans are stored in time order: `ops[0]` is applied first, so the matrix
//! product is `ops[n-1] ... ops[1] ops[0]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::GeneratorExpansion;
use crate::linalg::ComplexMatrix;
use crate::pauli::{Axis, PauliString};

/// Default number of first-order Trotter steps.
pub const DEFAULT_TROTTER_STEPS: usize = 64;

/// `exp(-i angle B_s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleOp {
    pub string: PauliString,
    pub angle: f64,
}

impl SingleOp {
    pub fn new(string: PauliString, angle: f64) -> Self {
        SingleOp { string, angle }
    }

    pub fn parse(s: &str, angle: f64) -> Result<Self> {
        Ok(SingleOp::new(s.parse()?, angle))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Commuting,
    Euler,
    Factorized,
    Trotter,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Commuting => "commuting",
            Strategy::Euler => "euler",
            Strategy::Factorized => "factorized",
            Strategy::Trotter => "trotter",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionPlan {
    pub spins: usize,
    /// Time order.
    pub ops: Vec<SingleOp>,
    pub exact: bool,
    /// Zero for exact plans.
    pub trotter_steps: usize,
    pub strategy: Strategy,
    /// `theta` with `U = e^{i theta} * product(ops)`; collects dropped
    /// identity terms.
    pub global_phase: f64,
}

impl DecompositionPlan {
    fn exact(spins: usize, ops: Vec<SingleOp>, strategy: Strategy, global_phase: f64) -> Self {
        DecompositionPlan {
            spins,
            ops,
            exact: true,
            trotter_steps: 0,
            strategy,
            global_phase,
        }
    }

    pub fn empty(spins: usize) -> Self {
        DecompositionPlan::exact(spins, Vec::new(), Strategy::Commuting, 0.0)
    }
}

/// One factor per term when every pair of terms commutes.
pub fn decompose_commuting(exp: &GeneratorExpansion) -> Result<DecompositionPlan> {
    if !exp.all_commute() {
        return Err(Error::NotAllCommuting);
    }
    let ops = exp
        .terms()
        .map(|(s, b)| SingleOp::new(s.clone(), b))
        .collect();
    Ok(DecompositionPlan::exact(
        exp.spins,
        ops,
        Strategy::Commuting,
        exp.global_phase(),
    ))
}

/// Euler sandwich for two anticommuting terms `b1 B1 + b2 B2`.
///
/// With `[B1, B2] = c i B3` (`c = +-1`), `r = hypot(b1, b2)` and
/// `theta = atan2(c b2, b1)`:
///
/// `exp(-i(b1 B1 + b2 B2)) = exp(-i theta B3) exp(-i r B1) exp(i theta B3)`.
///
/// Returned in time order, so the first and last angles are `-theta` and
/// `theta`.
pub fn euler_decompose(a: &SingleOp, b: &SingleOp) -> Result<Vec<SingleOp>> {
    let comm = a.string.commutator(&b.string)?;
    if comm.vanishes {
        return Err(Error::Commuting);
    }
    let c = comm.orientation();
    let (theta, r) = if b.angle == 0.0 {
        (0.0, a.angle)
    } else {
        ((c * b.angle).atan2(a.angle), a.angle.hypot(b.angle))
    };
    Ok(vec![
        SingleOp::new(comm.result.clone(), -theta),
        SingleOp::new(a.string.clone(), r),
        SingleOp::new(comm.result, theta),
    ])
}

/// `G = prod_i (phi_i0 E + phi_ix I_ix + phi_iy I_iy + phi_iz I_iz)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizedGenerator {
    /// `(phi_0, phi_x, phi_y, phi_z)` for spins `1..=N`.
    pub per_spin: Vec<[f64; 4]>,
}

impl FactorizedGenerator {
    pub fn new(per_spin: Vec<[f64; 4]>) -> Result<Self> {
        if per_spin.is_empty() || per_spin.len() > crate::MAX_SPINS {
            return Err(Error::SpinCount(per_spin.len(), crate::MAX_SPINS));
        }
        Ok(FactorizedGenerator { per_spin })
    }

    pub fn spins(&self) -> usize {
        self.per_spin.len()
    }

    /// The generator as a dense matrix (tensor product of the per-spin
    /// factors).
    pub fn matrix(&self) -> ComplexMatrix {
        self.per_spin
            .iter()
            .map(|&[e, x, y, z]| {
                let mut m = ComplexMatrix::identity(2).scale_real(e);
                for (axis, coeff) in [(Axis::X, x), (Axis::Y, y), (Axis::Z, z)] {
                    let s = PauliString::new(vec![axis]).materialize();
                    m = &m + &s.scale_real(coeff);
                }
                m
            })
            .reduce(|acc, m| acc.tensor(&m))
            .expect("at least one spin")
    }
}

/// Rotations taking `I_z` to the unit vector along `(x, y, z)`:
/// `R_z(alpha) R_y(beta) I_z R_y(-beta) R_z(-alpha) = n . I`.
fn orient(x: f64, y: f64, z: f64) -> (f64, f64) {
    let beta = x.hypot(y).atan2(z);
    let alpha = y.atan2(x);
    (alpha, beta)
}

/// Conjugates each spin's linear form onto its z axis, expands the product
/// of `(phi_i0 E + phi_i I_iz)` into commuting z strings, and undoes the
/// conjugation.
pub fn decompose_factorized(fg: &FactorizedGenerator) -> DecompositionPlan {
    let n = fg.spins();
    let mut zs = Vec::with_capacity(n);
    let mut frames = Vec::new();
    for (k, &[e, x, y, z]) in fg.per_spin.iter().enumerate() {
        let spin = k + 1;
        if x == 0.0 && y == 0.0 {
            zs.push((e, z));
        } else {
            let (alpha, beta) = orient(x, y, z);
            frames.push((spin, alpha, beta));
            zs.push((e, (x * x + y * y + z * z).sqrt()));
        }
    }

    // distribute prod_i (a_i E + c_i I_iz) over subsets of spins
    let mut core = GeneratorExpansion::new(n);
    for subset in 0usize..(1 << n) {
        let mut coeff = 1.0;
        let mut on = Vec::new();
        for (k, &(a, c)) in zs.iter().enumerate() {
            if subset & (1 << k) != 0 {
                coeff *= c;
                on.push(k + 1);
            } else {
                coeff *= a;
            }
        }
        if coeff == 0.0 {
            continue;
        }
        if on.is_empty() {
            core.identity_coeff += coeff;
        } else {
            // prod I_iz = B_S / 2^(|S|-1)
            let s = PauliString::z_on(n, &on).expect("spins in range");
            core.add(s, coeff / f64::powi(2.0, on.len() as i32 - 1));
        }
    }

    let single = |spin, axis, angle| {
        SingleOp::new(
            PauliString::single(n, spin, axis).expect("spin in range"),
            angle,
        )
    };
    let mut ops = Vec::new();
    for &(spin, alpha, beta) in &frames {
        ops.push(single(spin, Axis::Z, -alpha));
        ops.push(single(spin, Axis::Y, -beta));
    }
    let core_plan = decompose_commuting(&core).expect("z strings commute");
    ops.extend(core_plan.ops);
    for &(spin, alpha, beta) in frames.iter().rev() {
        ops.push(single(spin, Axis::Y, beta));
        ops.push(single(spin, Axis::Z, alpha));
    }
    ops.retain(|op| op.angle != 0.0);

    DecompositionPlan::exact(n, ops, Strategy::Factorized, core.global_phase())
}

/// First-order product formula: `(prod_s exp(-i b_s B_s / steps))^steps`.
pub fn trotterize(exp: &GeneratorExpansion, steps: usize) -> Result<DecompositionPlan> {
    if steps == 0 {
        return Err(Error::InvalidOption(
            "trotter steps must be at least 1".into(),
        ));
    }
    let slice: Vec<SingleOp> = exp
        .terms()
        .map(|(s, b)| SingleOp::new(s.clone(), b / steps as f64))
        .collect();
    let ops = slice
        .iter()
        .cloned()
        .cycle()
        .take(slice.len() * steps)
        .collect();
    Ok(DecompositionPlan {
        spins: exp.spins,
        ops,
        exact: false,
        trotter_steps: steps,
        strategy: Strategy::Trotter,
        global_phase: exp.global_phase(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    pub trotter_steps: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            trotter_steps: DEFAULT_TROTTER_STEPS,
        }
    }
}

/// Commuting product if possible, else an Euler sandwich for exactly two
/// anticommuting terms, else Trotter.
pub fn plan(exp: &GeneratorExpansion, options: PlanOptions) -> Result<DecompositionPlan> {
    match decompose_commuting(exp) {
        Ok(p) => return Ok(p),
        Err(Error::NotAllCommuting) => {}
        Err(e) => return Err(e),
    }
    let terms: Vec<SingleOp> = exp
        .terms()
        .map(|(s, b)| SingleOp::new(s.clone(), b))
        .collect();
    if let [a, b] = terms.as_slice() {
        let ops = euler_decompose(a, b)?;
        return Ok(DecompositionPlan::exact(
            exp.spins,
            ops,
            Strategy::Euler,
            exp.global_phase(),
        ));
    }
    trotterize(exp, options.trotter_steps)
}
