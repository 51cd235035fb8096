#![allow(dead_code)]

use molpea::pauli::{Pauli, PauliString, PauliSum};
use molpea::{CMatrix, Complex64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_string<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    PauliString::from_qubit_ops((0..n).map(|_| Pauli::ALL[rng.random_range(0..4)]).collect())
}

pub fn random_sum<R: Rng>(rng: &mut R, n: usize, max_terms: usize) -> PauliSum {
    let terms = rng.random_range(1..=max_terms);
    let entries: Vec<_> = (0..terms)
        .map(|_| {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (random_string(rng, n), c)
        })
        .collect();
    PauliSum::from_terms(n, entries).unwrap()
}

/// Positive-definite, symmetric, unit-diagonal matrix of size `d`.
pub fn random_overlap<R: Rng>(rng: &mut R, d: usize) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let s = a.transpose() * &a + DMatrix::identity(d, d) * 0.1;
    let scale: Vec<f64> = (0..d).map(|i| 1.0 / s[(i, i)].sqrt()).collect();
    DMatrix::from_fn(d, d, |i, j| s[(i, j)] * scale[i] * scale[j])
}

/// Kronecker product built factor by factor, leftmost factor = qubit n-1.
pub fn kron_dense(s: &PauliString) -> CMatrix {
    let mut m = CMatrix::identity(1, 1);
    for q in (0..s.num_qubits()).rev() {
        m = m.kronecker(&s.get(q).matrix());
    }
    m
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).camax()
}
