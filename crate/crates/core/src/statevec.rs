//! Dense statevectors and operators.
//!
//! Non-unitary operators are allowed everywhere. Postselection is modelled
//! by renormalizing after application and reporting `‖A·ψ‖²` as the
//! success probability.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::{CMatrix, CVector};

/// Below this squared norm a state is treated as annihilated.
pub const ANNIHILATION_TOL: f64 = 1e-14;

/// `‖U†U − I‖` entry tolerance for the unitary flag.
pub const UNITARY_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps amplitudes as given, without normalizing.
    pub fn from_amplitudes(amplitudes: CVector) -> Self {
        StateVector { amplitudes }
    }

    /// Normalizes `amplitudes`; fails on a zero vector.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm_sq = amplitudes.norm_squared();
        if norm_sq < ANNIHILATION_TOL {
            return Err(Error::Annihilated {
                probability: norm_sq,
            });
        }
        Ok(StateVector {
            amplitudes: amplitudes / Complex64::new(norm_sq.sqrt(), 0.0),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut v = CVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes: v })
    }

    /// Equal-weight superposition of every basis state.
    pub fn uniform(dim: usize) -> Self {
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector {
            amplitudes: CVector::from_element(dim, a),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Qubit count, when the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionOperator {
    matrix: CMatrix,
    unitary: bool,
}

impl EvolutionOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let dim = matrix.nrows();
        let unitary =
            (matrix.adjoint() * &matrix - CMatrix::identity(dim, dim)).camax() < UNITARY_TOL;
        Ok(EvolutionOperator { matrix, unitary })
    }

    pub fn identity(dim: usize) -> Self {
        EvolutionOperator {
            matrix: CMatrix::identity(dim, dim),
            unitary: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// `self^power` by repeated squaring.
    pub fn pow(&self, power: usize) -> Result<EvolutionOperator> {
        EvolutionOperator::new(matrix_power(&self.matrix, power))
    }
}

pub(crate) fn matrix_power(m: &CMatrix, mut power: usize) -> CMatrix {
    let mut result = CMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while power > 0 {
        if power & 1 == 1 {
            result = &result * &base;
        }
        power >>= 1;
        if power > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Applies `op` to `state`. Returns the (optionally renormalized) result
/// and `‖op·state‖²`.
pub fn apply(
    op: &EvolutionOperator,
    state: &StateVector,
    renormalize: bool,
) -> Result<(StateVector, f64)> {
    if op.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: state.dim(),
        });
    }
    let out = &op.matrix * &state.amplitudes;
    let p = out.norm_squared();
    if p < ANNIHILATION_TOL {
        return Err(Error::Annihilated { probability: p });
    }
    let out = if renormalize {
        out / Complex64::new(p.sqrt(), 0.0)
    } else {
        out
    };
    Ok((StateVector::from_amplitudes(out), p))
}

/// Eigenvalues in ascending order and the matching eigenvectors as columns.
pub fn eig_hermitian(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: h.ncols(),
        });
    }
    let deviation = (h - h.adjoint()).camax();
    if deviation > HERMITIAN_TOL * h.camax().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(h.nrows(), h.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// `e^{-iHt}` through the eigendecomposition of `H`.
pub fn exact_exponential(h: &PauliSum, t: f64) -> Result<EvolutionOperator> {
    let dense = hermitian_dense(h)?;
    let (values, vectors) = eig_hermitian(&dense)?;
    let phases = CVector::from_iterator(
        values.len(),
        values.iter().map(|&l| Complex64::from_polar(1.0, -l * t)),
    );
    let u = &vectors * CMatrix::from_diagonal(&phases) * vectors.adjoint();
    EvolutionOperator::new(u)
}

/// Dense form of a Pauli sum that must be Hermitian term by term.
pub fn hermitian_dense(h: &PauliSum) -> Result<CMatrix> {
    if !h.is_hermitian_as_sum() {
        let deviation = h.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
        return Err(Error::NotHermitian { deviation });
    }
    h.to_dense()
}

/// Joint state laid out as `register ⊗ system`, register index outermost.
/// The system block for register value `k` is multiplied by `op^k`.
pub fn controlled_apply(
    op: &EvolutionOperator,
    joint: &StateVector,
    register_dim: usize,
) -> Result<StateVector> {
    let d = op.dim();
    if joint.dim() != register_dim * d {
        return Err(Error::DimensionMismatch {
            expected: register_dim * d,
            found: joint.dim(),
        });
    }
    let mut out = joint.amplitudes.clone();
    let mut power = CMatrix::identity(d, d);
    for k in 0..register_dim {
        if k > 0 {
            power = &op.matrix * &power;
            let block = &power * joint.amplitudes.rows(k * d, d);
            out.rows_mut(k * d, d).copy_from(&block);
        }
    }
    Ok(StateVector::from_amplitudes(out))
}
