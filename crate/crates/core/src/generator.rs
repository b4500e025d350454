//! Generator extraction and product-operator expansion.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs_diff, ComplexMatrix, CLUSTER_TOL};
use crate::pauli::{enumerate_basis, PauliString};

/// Default threshold below which expansion coefficients are dropped.
pub const COEFF_TOL: f64 = 1e-10;

/// Interval that eigenphases `theta` (with `lambda = e^{-i theta}`) are
/// folded into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchConvention {
    /// `(-pi, pi]`
    PrincipalUpper,
    /// `[-pi, pi)`; maps eigenvalue `-1` to `-pi`.
    #[default]
    PrincipalLower,
}

impl BranchConvention {
    /// The eigenphase `theta` of a unit-modulus `lambda = e^{-i theta}`.
    pub fn phase(self, lambda: Complex64) -> f64 {
        let theta = -lambda.arg();
        match self {
            BranchConvention::PrincipalLower if theta > PI - CLUSTER_TOL => theta - 2.0 * PI,
            BranchConvention::PrincipalUpper if theta < -PI + CLUSTER_TOL => theta + 2.0 * PI,
            _ => theta,
        }
    }
}

/// Returns a Hermitian `G` with `exp(-iG) = U` exactly (no phase freedom).
pub fn extract_generator(
    u: &ComplexMatrix,
    branch: BranchConvention,
    tol: f64,
) -> Result<ComplexMatrix> {
    let eig = linalg::eig_unitary(u, tol)?;

    let mut phases: Vec<f64> = Vec::with_capacity(eig.eigenvalues.len());
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let shared = (0..k).find(|&j| (eig.eigenvalues[j] - lambda).norm() < CLUSTER_TOL);
        phases.push(match shared {
            Some(j) => phases[j],
            None => branch.phase(lambda),
        });
    }

    let diag: Vec<Complex64> = phases.iter().map(|&t| Complex64::new(t, 0.0)).collect();
    let g = &(&eig.t.adjoint() * &ComplexMatrix::from_diag(&diag)) * &eig.t;
    let g = g.hermitian_part();

    let residual = max_abs_diff(&linalg::matrix_exp_hermitian(&g)?, u)?;
    if residual > 10.0 * tol {
        return Err(Error::GeneratorResidual(residual));
    }
    Ok(g)
}

/// `G = identity_coeff * E + sum_s b_s B_s` over non-identity strings.
///
/// The identity term is stored as the coefficient of the unit matrix `E`
/// rather than of `B_0 = E/2`; it only contributes the global phase
/// `e^{-i identity_coeff}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorExpansion {
    pub spins: usize,
    pub coeffs: BTreeMap<PauliString, f64>,
    pub identity_coeff: f64,
}

impl GeneratorExpansion {
    pub fn new(spins: usize) -> Self {
        GeneratorExpansion {
            spins,
            coeffs: BTreeMap::new(),
            identity_coeff: 0.0,
        }
    }

    /// Adds `b` to the coefficient of `s`. An identity string adds `b/2` to
    /// the `E` coefficient.
    pub fn add(&mut self, s: PauliString, b: f64) {
        assert_eq!(s.spins(), self.spins);
        if s.is_identity() {
            self.identity_coeff += b / 2.0;
        } else {
            *self.coeffs.entry(s).or_insert(0.0) += b;
        }
    }

    pub fn with(mut self, s: &str, b: f64) -> Self {
        self.add(s.parse().expect("valid pauli string"), b);
        self
    }

    /// Number of non-identity terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.coeffs.iter().map(|(s, &b)| (s, b))
    }

    pub fn get(&self, s: &PauliString) -> f64 {
        self.coeffs.get(s).copied().unwrap_or(0.0)
    }

    /// Whether every pair of non-identity terms commutes.
    pub fn all_commute(&self) -> bool {
        let terms: Vec<&PauliString> = self.coeffs.keys().collect();
        terms.iter().enumerate().all(|(k, a)| {
            terms[k + 1..]
                .iter()
                .all(|b| a.commutes(b).expect("expansion strings share a length"))
        })
    }

    /// Removes terms with `|b| < tol`.
    pub fn prune(&mut self, tol: f64) {
        self.coeffs.retain(|_, b| b.abs() >= tol);
        if self.identity_coeff.abs() < tol {
            self.identity_coeff = 0.0;
        }
    }

    /// Phase `theta` such that `exp(-iG) = e^{i theta} exp(-i sum_s b_s B_s)`.
    pub fn global_phase(&self) -> f64 {
        -self.identity_coeff
    }
}

/// `b_s = tr(G B_s) / 2^(N-2)` for every non-identity `s`, and
/// `tr(G) / 2^N` for the identity term.
pub fn expand(g: &ComplexMatrix, spins: usize, tol: f64) -> Result<GeneratorExpansion> {
    let dim = 1usize << spins;
    if g.dim() != dim {
        return Err(Error::DimensionMismatch(g.dim(), dim));
    }
    let defect = g.hermiticity_defect();
    if defect >= tol.max(f64::EPSILON * g.max_abs() * dim as f64) {
        return Err(Error::NotHermitian(defect));
    }
    let norm = (1u64 << spins) as f64 / 4.0;
    let mut out = GeneratorExpansion::new(spins);
    for s in enumerate_basis(spins) {
        let flip = s.flip_mask();
        let tr: Complex64 = (0..dim)
            .map(|col| g[(col, col ^ flip)] * s.sigma_entry(col))
            .sum::<Complex64>()
            * 0.5;
        let b = tr / norm;
        if b.im.abs() >= tol {
            return Err(Error::NotHermitian(b.im.abs()));
        }
        if b.re.abs() < tol {
            continue;
        }
        out.add(s, b.re);
    }
    Ok(out)
}

/// `identity_coeff * E + sum_s b_s B_s` as a dense matrix.
pub fn reconstruct(exp: &GeneratorExpansion) -> ComplexMatrix {
    let dim = 1usize << exp.spins;
    let mut m = ComplexMatrix::identity(dim).scale_real(exp.identity_coeff);
    for (s, b) in exp.terms() {
        let flip = s.flip_mask();
        for col in 0..dim {
            m[(col ^ flip, col)] += s.sigma_entry(col) * (0.5 * b);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::GateSpec;
    use crate::pauli::Axis;

    fn diag(entries: &[f64]) -> ComplexMatrix {
        let d: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        ComplexMatrix::from_diag(&d)
    }

    #[test]
    fn identity_has_zero_generator() {
        let g = extract_generator(
            &ComplexMatrix::identity(4),
            BranchConvention::PrincipalLower,
            1e-9,
        )
        .unwrap();
        assert!(g.max_abs() < 1e-15);
        assert!(expand(&g, 2, COEFF_TOL).unwrap().is_empty());
    }

    #[test]
    fn controlled_phase_generator() {
        let u = diag(&[1.0, 1.0, 1.0, -1.0]);
        let g = extract_generator(&u, BranchConvention::PrincipalLower, 1e-9).unwrap();
        assert!(max_abs_diff(&g, &diag(&[0.0, 0.0, 0.0, -PI])).unwrap() < 1e-12);
        let e = expand(&g, 2, COEFF_TOL).unwrap();
        // -pi (E/2 - I1z)(E/2 - I2z) = -pi/4 E + pi/2 I1z + pi/2 I2z - pi/2 (2 I1z I2z)
        assert!((e.identity_coeff + PI / 4.0).abs() < 1e-12);
        assert!((e.get(&"z0".parse().unwrap()) - PI / 2.0).abs() < 1e-12);
        assert!((e.get(&"0z".parse().unwrap()) - PI / 2.0).abs() < 1e-12);
        assert!((e.get(&"zz".parse().unwrap()) + PI / 2.0).abs() < 1e-12);
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn toffoli_expansion() {
        let u = GateSpec::toffoli().build().unwrap();
        let g = extract_generator(&u, BranchConvention::PrincipalLower, 1e-9).unwrap();
        let e = expand(&g, 3, COEFF_TOL).unwrap();
        assert!((e.identity_coeff + PI / 8.0).abs() < 1e-12);
        let want = [
            ("z00", 0.25),
            ("0z0", 0.25),
            ("zz0", -0.25),
            ("00x", 0.25),
            ("z0x", -0.25),
            ("0zx", -0.25),
            ("zzx", 0.25),
        ];
        assert_eq!(e.len(), want.len());
        for (s, b) in want {
            assert!((e.get(&s.parse().unwrap()) - b * PI).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn branch_flip_changes_generator_not_unitary() {
        let u = GateSpec::toffoli().build().unwrap();
        let lo = extract_generator(&u, BranchConvention::PrincipalLower, 1e-9).unwrap();
        let hi = extract_generator(&u, BranchConvention::PrincipalUpper, 1e-9).unwrap();
        assert!(max_abs_diff(&lo, &hi).unwrap() > 1.0);
        let diff = &hi - &lo;
        // hi - lo = 2 pi P_-
        assert!((diff.trace().re - 2.0 * PI).abs() < 1e-10);
        let u_hi = linalg::matrix_exp_hermitian(&hi).unwrap();
        assert!(max_abs_diff(&u_hi, &u).unwrap() < 1e-10);
    }

    #[test]
    fn expand_single_term() {
        let phi = 0.37;
        let g = PauliString::single(1, 1, Axis::Z)
            .unwrap()
            .materialize()
            .scale_real(phi);
        let e = expand(&g, 1, COEFF_TOL).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e.get(&"z".parse().unwrap()) - phi).abs() < 1e-15);
        assert!(expand(&ComplexMatrix::zeros(2), 1, COEFF_TOL)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn reconstruct_examples() {
        assert_eq!(
            reconstruct(&GeneratorExpansion::new(2)),
            ComplexMatrix::zeros(4)
        );
        let m = reconstruct(&GeneratorExpansion::new(1).with("z", 0.8));
        assert_eq!(m, diag(&[0.4, -0.4]));
        let m = reconstruct(&GeneratorExpansion::new(1).with("0", 0.8));
        assert_eq!(m, diag(&[0.4, 0.4]));
    }

    #[test]
    fn expand_errors() {
        assert_eq!(
            expand(&ComplexMatrix::zeros(4), 3, COEFF_TOL),
            Err(Error::DimensionMismatch(4, 8))
        );
        let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            expand(&m, 1, COEFF_TOL),
            Err(Error::NotHermitian(_))
        ));
        let m = ComplexMatrix::from_real(&[&[2.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(
            extract_generator(&m, BranchConvention::PrincipalLower, 1e-9),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn branch_phase_folding() {
        let minus_one = Complex64::new(-1.0, 0.0);
        assert_eq!(BranchConvention::PrincipalLower.phase(minus_one), -PI);
        assert_eq!(BranchConvention::PrincipalUpper.phase(minus_one), PI);
        let nudged = Complex64::new(-1.0, -1e-17);
        assert!((BranchConvention::PrincipalLower.phase(nudged) + PI).abs() < 1e-15);
        assert!((BranchConvention::PrincipalUpper.phase(nudged) - PI).abs() < 1e-15);
    }
}
