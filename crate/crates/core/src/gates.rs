//! Named target gates. Spin 1 is the most significant bit of the basis
//! index, and control spins are active on `|1>`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pauli::check_spin;
use crate::MAX_SPINS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum GateSpec {
    Cnot {
        spins: usize,
        control: usize,
        target: usize,
    },
    Toffoli {
        spins: usize,
        controls: [usize; 2],
        target: usize,
    },
    Swap {
        spins: usize,
        a: usize,
        b: usize,
    },
    /// Multiplies `|11>` on `(control, target)` by `e^{i phi}`.
    Cphase {
        spins: usize,
        control: usize,
        target: usize,
        phi: f64,
    },
    /// `-1` on each marked basis state, `+1` elsewhere.
    Fphase {
        spins: usize,
        marked: Vec<usize>,
    },
}

impl GateSpec {
    pub const NAMES: [&'static str; 5] = ["cnot", "toffoli", "swap", "cphase", "fphase"];

    pub fn cnot(control: usize, target: usize) -> Self {
        GateSpec::Cnot {
            spins: 2,
            control,
            target,
        }
    }

    pub fn toffoli() -> Self {
        GateSpec::Toffoli {
            spins: 3,
            controls: [1, 2],
            target: 3,
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        GateSpec::Swap { spins: 2, a, b }
    }

    pub fn cphase(phi: f64) -> Self {
        GateSpec::Cphase {
            spins: 2,
            control: 1,
            target: 2,
            phi,
        }
    }

    pub fn fphase(spins: usize, marked: Vec<usize>) -> Self {
        GateSpec::Fphase { spins, marked }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateSpec::Cnot { .. } => "cnot",
            GateSpec::Toffoli { .. } => "toffoli",
            GateSpec::Swap { .. } => "swap",
            GateSpec::Cphase { .. } => "cphase",
            GateSpec::Fphase { .. } => "fphase",
        }
    }

    pub fn spins(&self) -> usize {
        match *self {
            GateSpec::Cnot { spins, .. }
            | GateSpec::Toffoli { spins, .. }
            | GateSpec::Swap { spins, .. }
            | GateSpec::Cphase { spins, .. }
            | GateSpec::Fphase { spins, .. } => spins,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.spins();
        if n == 0 || n > MAX_SPINS {
            return Err(Error::SpinCount(n, MAX_SPINS));
        }
        let distinct = |idx: &[usize]| -> Result<()> {
            for (k, &i) in idx.iter().enumerate() {
                check_spin(i, n)?;
                if idx[..k].contains(&i) {
                    return Err(Error::SameSpin(i));
                }
            }
            Ok(())
        };
        match self {
            GateSpec::Cnot {
                control, target, ..
            }
            | GateSpec::Cphase {
                control, target, ..
            } => distinct(&[*control, *target]),
            GateSpec::Toffoli {
                controls, target, ..
            } => distinct(&[controls[0], controls[1], *target]),
            GateSpec::Swap { a, b, .. } => distinct(&[*a, *b]),
            GateSpec::Fphase { marked, .. } => match marked.iter().find(|&&m| m >= 1 << n) {
                Some(&m) => Err(Error::InvalidGate(format!(
                    "marked state {m} out of range for {n} spins"
                ))),
                None => Ok(()),
            },
        }
    }

    pub fn build(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        let n = self.spins();
        let dim = 1usize << n;
        let bit = |spin: usize| 1usize << (n - spin);
        let one = Complex64::new(1.0, 0.0);

        let permutation = |map: &dyn Fn(usize) -> usize| {
            let mut m = ComplexMatrix::zeros(dim);
            for col in 0..dim {
                m[(map(col), col)] = one;
            }
            m
        };

        Ok(match self {
            GateSpec::Cnot {
                control, target, ..
            } => {
                let (c, t) = (bit(*control), bit(*target));
                permutation(&|k| if k & c != 0 { k ^ t } else { k })
            }
            GateSpec::Toffoli {
                controls, target, ..
            } => {
                let c = bit(controls[0]) | bit(controls[1]);
                let t = bit(*target);
                permutation(&|k| if k & c == c { k ^ t } else { k })
            }
            GateSpec::Swap { a, b, .. } => {
                let (ba, bb) = (bit(*a), bit(*b));
                permutation(&|k| {
                    let (x, y) = (k & ba != 0, k & bb != 0);
                    if x == y {
                        k
                    } else {
                        k ^ ba ^ bb
                    }
                })
            }
            GateSpec::Cphase {
                control,
                target,
                phi,
                ..
            } => {
                let c = bit(*control) | bit(*target);
                let d: Vec<Complex64> = (0..dim)
                    .map(|k| {
                        if k & c == c {
                            Complex64::from_polar(1.0, *phi)
                        } else {
                            one
                        }
                    })
                    .collect();
                ComplexMatrix::from_diag(&d)
            }
            GateSpec::Fphase { marked, .. } => {
                let d: Vec<Complex64> = (0..dim)
                    .map(|k| {
                        if marked.contains(&k) {
                            Complex64::from_polar(1.0, PI)
                        } else {
                            one
                        }
                    })
                    .collect();
                ComplexMatrix::from_diag(&d)
            }
        })
    }
}

pub fn build(spec: &GateSpec) -> Result<ComplexMatrix> {
    spec.build()
}
