#![allow(dead_code)]

use pulsesynth::generator::{reconstruct, GeneratorExpansion};
use pulsesynth::linalg::matrix_exp_hermitian;
use pulsesynth::pauli::enumerate_basis;
use pulsesynth::{Complex64, ComplexMatrix, PauliString};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize, scale: f64) -> ComplexMatrix {
    let data = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
        .collect();
    ComplexMatrix::from_row_major(data)
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize, scale: f64) -> ComplexMatrix {
    random_matrix(rng, dim, scale).hermitian_part()
}

pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    matrix_exp_hermitian(&random_hermitian(rng, dim, 2.0)).unwrap()
}

/// Random generator over mutually commuting strings built from z and x axes.
pub fn random_commuting_zx(
    rng: &mut impl Rng,
    spins: usize,
    max_terms: usize,
) -> GeneratorExpansion {
    let pool: Vec<PauliString> = enumerate_basis(spins)
        .into_iter()
        .filter(|s| !s.is_identity() && s.axes().iter().all(|a| !matches!(a, pulsesynth::Axis::Y)))
        .collect();
    let mut chosen: Vec<PauliString> = Vec::new();
    let wanted = rng.gen_range(1..=max_terms);
    for _ in 0..64 {
        if chosen.len() == wanted {
            break;
        }
        let s = &pool[rng.gen_range(0..pool.len())];
        if !chosen.contains(s) && chosen.iter().all(|c| c.commutes(s).unwrap()) {
            chosen.push(s.clone());
        }
    }
    let mut exp = GeneratorExpansion::new(spins);
    for s in chosen {
        exp.add(s, rng.gen_range(-3.0..3.0));
    }
    exp.identity_coeff = rng.gen_range(-1.0..1.0);
    exp
}

pub fn unitary_of(exp: &GeneratorExpansion) -> ComplexMatrix {
    matrix_exp_hermitian(&reconstruct(exp)).unwrap()
}
