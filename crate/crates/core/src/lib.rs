//! Molecular Hamiltonians on qubits, simulated and measured end to end.
//!
//! The pipeline runs in four stages, each with a dense-matrix cross-check:
//!
//! 1. [`chem`]: overlap matrices of atomic orbitals, Gram-Schmidt virtual
//!    orbitals, and the one-body Hamiltonian `H = Σ h_ij b†_i b_j`.
//! 2. [`fermion`]: Jordan-Wigner mapping of ladder operators onto
//!    [`pauli::PauliSum`]s.
//! 3. [`lcu`]: truncated Taylor expansion of `e^{-iHt/m}` as a Pauli sum,
//!    applied `m` times with postselection modelled by renormalization.
//! 4. [`pea`]: phase estimation over an `N`-level register (any `N ≥ 2`)
//!    and decoding of energies from the peak positions.
//!
//! # Qubit ordering
//!
//! A printed Pauli string such as `XZY` lists qubit `n-1` first and qubit 0
//! last, and the leftmost character is the leftmost tensor factor. Basis
//! state `|b⟩` has qubit `q` in bit `q` of `b`. Fermionic mode `j` lives on
//! qubit `j`, with its parity string on qubits `0..j`.

pub mod chem;
pub mod error;
pub mod fermion;
pub mod lcu;
pub mod pauli;
pub mod pea;
pub mod statevec;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Dense complex matrix used by every oracle path.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex vector.
pub type CVector = nalgebra::DVector<Complex64>;
