//! Product-operator basis.
//!
//! A [`PauliString`] names one basis operator
//! `B_s = 2^(q-1) I_a1 (x) I_a2 (x) ... (x) I_aN` where `I_0 = E` and
//! `I_x, I_y, I_z` are spin-1/2 angular momentum operators. Since
//! `I_a = sigma_a / 2`, every `B_s` (including the all-zero one, `E/2`) is
//! exactly one half of a sigma string, which keeps the trace inner product
//! uniform: `tr(B_s B_t) = 2^(N-2) delta_st`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::MAX_SPINS;

/// One slot of a Pauli string. The declaration order is the basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "0")]
    I,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "z")]
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::I, Axis::X, Axis::Y, Axis::Z];

    pub fn symbol(self) -> char {
        match self {
            Axis::I => '0',
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Axis> {
        match c {
            '0' | 'e' | 'E' | 'i' | 'I' => Some(Axis::I),
            'x' | 'X' => Some(Axis::X),
            'y' | 'Y' => Some(Axis::Y),
            'z' | 'Z' => Some(Axis::Z),
            _ => None,
        }
    }

    fn flips(self) -> bool {
        matches!(self, Axis::X | Axis::Y)
    }

    /// `sigma_self * sigma_other = i^k sigma_result`; returns `(result, k)`.
    fn product(self, other: Axis) -> (Axis, u8) {
        use Axis::*;
        match (self, other) {
            (I, a) | (a, I) => (a, 0),
            (a, b) if a == b => (I, 0),
            (X, Y) => (Z, 1),
            (Y, X) => (Z, 3),
            (Y, Z) => (X, 1),
            (Z, Y) => (X, 3),
            (Z, X) => (Y, 1),
            (X, Z) => (Y, 3),
            _ => unreachable!(),
        }
    }
}

/// Powers of `i`.
fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A word of axes, one per spin; slot 0 is spin 1 (most significant bit).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    axes: Vec<Axis>,
}

impl PauliString {
    pub fn new(axes: Vec<Axis>) -> Self {
        PauliString { axes }
    }

    pub fn identity(spins: usize) -> Self {
        PauliString::new(vec![Axis::I; spins])
    }

    /// A single nonzero axis on `spin` (1-indexed).
    pub fn single(spins: usize, spin: usize, axis: Axis) -> Result<Self> {
        check_spin(spin, spins)?;
        let mut axes = vec![Axis::I; spins];
        axes[spin - 1] = axis;
        Ok(PauliString::new(axes))
    }

    /// All-z string on the given 1-indexed spins.
    pub fn z_on(spins: usize, on: &[usize]) -> Result<Self> {
        let mut axes = vec![Axis::I; spins];
        for &s in on {
            check_spin(s, spins)?;
            axes[s - 1] = Axis::Z;
        }
        Ok(PauliString::new(axes))
    }

    pub fn spins(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, spin: usize) -> Axis {
        self.axes[spin - 1]
    }

    /// Number of nonzero slots (`q`).
    pub fn weight(&self) -> usize {
        self.axes.iter().filter(|&&a| a != Axis::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Every nonzero slot is `z`.
    pub fn is_z_string(&self) -> bool {
        self.axes.iter().all(|&a| matches!(a, Axis::I | Axis::Z))
    }

    /// 1-indexed spins with a nonzero axis, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.axes
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != Axis::I)
            .map(|(k, _)| k + 1)
            .collect()
    }

    /// Basis-index bit for slot `k` (0-based).
    fn bit(&self, k: usize) -> usize {
        1 << (self.axes.len() - 1 - k)
    }

    /// Bits flipped by the sigma string (x and y slots).
    pub fn flip_mask(&self) -> usize {
        self.axes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.flips())
            .fold(0, |m, (k, _)| m | self.bit(k))
    }

    /// The sigma string has exactly one nonzero per column: column `col`
    /// holds `value` at row `col ^ flip_mask()`.
    pub fn sigma_entry(&self, col: usize) -> Complex64 {
        let mut k = 0u8;
        for (slot, &a) in self.axes.iter().enumerate() {
            let set = col & self.bit(slot) != 0;
            match a {
                Axis::I | Axis::X => {}
                // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
                Axis::Y => k += if set { 3 } else { 1 },
                Axis::Z => k += if set { 2 } else { 0 },
            }
        }
        i_pow(k)
    }

    /// `B_s` as a dense `2^N x 2^N` matrix.
    pub fn materialize(&self) -> ComplexMatrix {
        let dim = 1usize << self.spins();
        let flip = self.flip_mask();
        let mut m = ComplexMatrix::zeros(dim);
        for col in 0..dim {
            m[(col ^ flip, col)] = self.sigma_entry(col) * 0.5;
        }
        m
    }

    /// True iff the two basis operators commute.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        check_len(self, other)?;
        Ok(self.anticommuting_slots(other).is_multiple_of(2))
    }

    fn anticommuting_slots(&self, other: &PauliString) -> usize {
        self.axes
            .iter()
            .zip(&other.axes)
            .filter(|(&a, &b)| a != Axis::I && b != Axis::I && a != b)
            .count()
    }

    /// `sigma_self * sigma_other = i^k sigma_result`.
    pub fn sigma_product(&self, other: &PauliString) -> Result<(PauliString, u8)> {
        check_len(self, other)?;
        let mut k = 0u8;
        let axes = self
            .axes
            .iter()
            .zip(&other.axes)
            .map(|(&a, &b)| {
                let (r, p) = a.product(b);
                k = (k + p) % 4;
                r
            })
            .collect();
        Ok((PauliString::new(axes), k))
    }

    /// `[B_self, B_other]`.
    pub fn commutator(&self, other: &PauliString) -> Result<Commutator> {
        let (result, k) = self.sigma_product(other)?;
        if self.anticommuting_slots(other).is_multiple_of(2) {
            return Ok(Commutator {
                vanishes: true,
                result,
                coefficient: Complex64::new(0.0, 0.0),
            });
        }
        // B_a B_b - B_b B_a = 2 * (1/4) i^k sigma_c = i^k B_c
        let coefficient = i_pow(k);
        debug_assert!(coefficient.re == 0.0);
        Ok(Commutator {
            vanishes: false,
            result,
            coefficient,
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axes {
            write!(f, "{}", a.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .chars()
            .map(|c| {
                Axis::from_symbol(c)
                    .ok_or_else(|| Error::parse(0, format!("bad axis '{c}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if axes.is_empty() || axes.len() > MAX_SPINS {
            return Err(Error::SpinCount(axes.len(), MAX_SPINS));
        }
        Ok(PauliString::new(axes))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Result of `[B_a, B_b]`. When it does not vanish it equals
/// `coefficient * B_result` with `coefficient = +-i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Commutator {
    pub vanishes: bool,
    pub result: PauliString,
    pub coefficient: Complex64,
}

impl Commutator {
    /// `+1` for `[B_a, B_b] = i B_c`, `-1` for `-i B_c`, `0` when vanishing.
    pub fn orientation(&self) -> f64 {
        if self.vanishes {
            0.0
        } else {
            self.coefficient.im.signum()
        }
    }
}

/// All `4^N` strings, ordered with spin 1 most significant and `0 < x < y < z`.
pub fn enumerate_basis(spins: usize) -> Vec<PauliString> {
    let count = 1usize << (2 * spins);
    (0..count)
        .map(|idx| {
            let axes = (0..spins)
                .map(|slot| Axis::ALL[(idx >> (2 * (spins - 1 - slot))) & 3])
                .collect();
            PauliString::new(axes)
        })
        .collect()
}

pub fn materialize(s: &PauliString) -> ComplexMatrix {
    s.materialize()
}

pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.commutes(b)
}

pub fn commutator(a: &PauliString, b: &PauliString) -> Result<Commutator> {
    a.commutator(b)
}

pub(crate) fn check_spin(spin: usize, spins: usize) -> Result<()> {
    if spin == 0 || spin > spins {
        Err(Error::InvalidSpin { index: spin, spins })
    } else {
        Ok(())
    }
}

fn check_len(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.spins() != b.spins() {
        Err(Error::LengthMismatch(a.spins(), b.spins()))
    } else {
        Ok(())
    }
}
