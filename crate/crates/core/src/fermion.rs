//! Fermionic ladder operators and the Jordan-Wigner map onto qubits.
//!
//! Mode `j` sits on qubit `j`. The annihilator is
//!
//! ```text
//! a_j = I^{⊗(n-j-1)} ⊗ Q⁻ ⊗ Z^{⊗j},   Q⁻ = |0⟩⟨1| = (X + iY)/2
//! a†_j = I^{⊗(n-j-1)} ⊗ Q⁺ ⊗ Z^{⊗j},  Q⁺ = |1⟩⟨0| = (X − iY)/2
//! ```
//!
//! [`ladder_dense`] builds the same operators directly in the occupation
//! basis with explicit parity signs, independent of any Pauli algebra.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, DENSE_MAX_QUBITS};
use crate::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: usize,
    /// `true` for a creation operator.
    pub dagger: bool,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        LadderOp { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        LadderOp {
            mode,
            dagger: false,
        }
    }
}

/// `coeff · f_1 f_2 … f_k`, multiplied left to right as written.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coeff: Complex64,
    pub factors: Vec<LadderOp>,
}

impl FermionTerm {
    pub fn new(coeff: impl Into<Complex64>, factors: Vec<LadderOp>) -> Self {
        FermionTerm {
            coeff: coeff.into(),
            factors,
        }
    }

    /// `coeff · b†_i b_j`.
    pub fn hopping(coeff: impl Into<Complex64>, i: usize, j: usize) -> Self {
        Self::new(coeff, vec![LadderOp::create(i), LadderOp::annihilate(j)])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionSum {
    n_modes: usize,
    terms: Vec<FermionTerm>,
}

impl FermionSum {
    pub fn new(n_modes: usize) -> Self {
        assert!(n_modes > 0, "need at least one mode");
        FermionSum {
            n_modes,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(n_modes: usize, terms: Vec<FermionTerm>) -> Result<Self> {
        let mut sum = Self::new(n_modes);
        for t in terms {
            sum.push(t)?;
        }
        Ok(sum)
    }

    pub fn push(&mut self, term: FermionTerm) -> Result<()> {
        if let Some(bad) = term.factors.iter().find(|f| f.mode >= self.n_modes) {
            return Err(Error::ModeOutOfRange {
                mode: bad.mode,
                n_modes: self.n_modes,
            });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    /// Dense matrix built from [`ladder_dense`] factors. Oracle path.
    pub fn to_dense(&self) -> Result<CMatrix> {
        let dim = 1usize << self.n_modes;
        let mut out = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let mut prod = CMatrix::identity(dim, dim);
            for f in &term.factors {
                prod *= ladder_dense(f.mode, f.dagger, self.n_modes)?;
            }
            out += prod * term.coeff;
        }
        Ok(out)
    }
}

/// Jordan-Wigner image of a single ladder operator as a two-term sum.
pub fn jw_ladder(mode: usize, dagger: bool, n_modes: usize) -> Result<PauliSum> {
    if mode >= n_modes {
        return Err(Error::ModeOutOfRange { mode, n_modes });
    }
    let string = |op| {
        let mut ops = vec![Pauli::I; n_modes];
        ops[..mode].fill(Pauli::Z);
        ops[mode] = op;
        PauliString::from_qubit_ops(ops)
    };
    let y_sign = if dagger { -0.5 } else { 0.5 };
    PauliSum::from_terms(
        n_modes,
        [
            (string(Pauli::X), Complex64::new(0.5, 0.0)),
            (string(Pauli::Y), Complex64::new(0.0, y_sign)),
        ],
    )
}

/// Maps every term through [`jw_ladder`] and sums the products.
pub fn jw_transform(h: &FermionSum) -> Result<PauliSum> {
    let n = h.n_modes;
    let mut total = PauliSum::zero(n);
    for term in &h.terms {
        let mut prod = PauliSum::identity(n, term.coeff);
        for f in &term.factors {
            prod = prod.mul(&jw_ladder(f.mode, f.dagger, n)?)?;
            if prod.is_empty() {
                break;
            }
        }
        total = total.add(&prod)?;
    }
    Ok(total)
}

/// `a_j` or `a†_j` in the occupation basis: bit `k` of a basis index is the
/// occupation of mode `k`, and the sign is `(-1)^{Σ_{k<j} n_k}`.
pub fn ladder_dense(mode: usize, dagger: bool, n_modes: usize) -> Result<CMatrix> {
    if mode >= n_modes {
        return Err(Error::ModeOutOfRange { mode, n_modes });
    }
    if n_modes > DENSE_MAX_QUBITS {
        return Err(Error::DenseCutoff {
            qubits: n_modes,
            max: DENSE_MAX_QUBITS,
        });
    }
    let dim = 1usize << n_modes;
    let mut m = CMatrix::zeros(dim, dim);
    let bit = 1usize << mode;
    for occ in 0..dim {
        let occupied = occ & bit != 0;
        if occupied == dagger {
            continue;
        }
        let parity = (occ & (bit - 1)).count_ones();
        let sign = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
        m[(occ ^ bit, occ)] = Complex64::new(sign, 0.0);
    }
    Ok(m)
}
