//! LCAO overlap matrices, metric Gram-Schmidt virtual orbitals, and the
//! one-body Hamiltonian `H = Σ h_ij b†_i b_j`.
//!
//! The named molecules use these orbital orderings and overlap patterns:
//!
//! ```text
//! H2-nospin   1s_A 1s_B            [[1, S], [S, 1]]
//! H2-spin     1s_A↑ 1s_A↓ 1s_B↑ 1s_B↓   two [[1, S], [S, 1]] blocks, one per atom
//! He2-nospin  1s_A 1s_B 2s_A 2s_B  [[1, S, 0, S1], [S, 1, S1, 0],
//!                                   [0, S1, 1, S2], [S1, 0, S2, 1]]
//! ```
//!
//! The H2-spin pattern couples the two spin orbitals of the *same* atom and
//! leaves the atoms uncoupled. Physical overlap would instead couple
//! same-spin orbitals on different atoms; the pattern is kept as tabulated.
//!
//! The published Pauli decompositions ship as fixtures ([`load_fixture`]).
//! They are not regenerated from overlaps, since the overlap values and
//! `h_ij` behind them are not known.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{FermionSum, FermionTerm};
use crate::pauli::{PauliSum, SIMPLIFY_TOL};
use crate::CMatrix;

/// Smallest acceptable squared metric norm during Gram-Schmidt.
pub const PIVOT_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Molecule {
    H2NoSpin,
    H2Spin,
    He2NoSpin,
    Custom,
}

impl Molecule {
    pub const NAMED: [Molecule; 3] = [Molecule::H2NoSpin, Molecule::H2Spin, Molecule::He2NoSpin];

    pub fn name(self) -> &'static str {
        match self {
            Molecule::H2NoSpin => "H2-nospin",
            Molecule::H2Spin => "H2-spin",
            Molecule::He2NoSpin => "He2-nospin",
            Molecule::Custom => "custom",
        }
    }

    /// Taylor order used for this molecule's published runs.
    pub fn default_order(self) -> usize {
        match self {
            Molecule::H2NoSpin | Molecule::H2Spin => 2,
            Molecule::He2NoSpin | Molecule::Custom => 1,
        }
    }

    pub fn orbital_labels(self) -> Vec<String> {
        let labels: &[&str] = match self {
            Molecule::H2NoSpin => &["1s_A", "1s_B"],
            Molecule::H2Spin => &["1s_A_up", "1s_A_down", "1s_B_up", "1s_B_down"],
            Molecule::He2NoSpin => &["1s_A", "1s_B", "2s_A", "2s_B"],
            Molecule::Custom => &[],
        };
        labels.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for Molecule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Molecule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h2-nospin" => Ok(Molecule::H2NoSpin),
            "h2-spin" => Ok(Molecule::H2Spin),
            "he2-nospin" => Ok(Molecule::He2NoSpin),
            "custom" => Ok(Molecule::Custom),
            _ => Err(Error::UnknownFixture(s.to_string())),
        }
    }
}

/// The overlap parameters `S`, `S1`, `S2`. Unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OverlapParams {
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeSpec {
    pub molecule: Molecule,
    pub overlap: OverlapParams,
    /// Full overlap matrix for [`Molecule::Custom`].
    pub custom_overlap: Option<DMatrix<f64>>,
    /// `h_ij` in the atomic-orbital basis.
    pub one_body: Option<CMatrix>,
}

impl MoleculeSpec {
    pub fn named(molecule: Molecule, overlap: OverlapParams) -> Self {
        MoleculeSpec {
            molecule,
            overlap,
            custom_overlap: None,
            one_body: None,
        }
    }

    pub fn custom(overlap: DMatrix<f64>) -> Self {
        MoleculeSpec {
            molecule: Molecule::Custom,
            overlap: OverlapParams::default(),
            custom_overlap: Some(overlap),
            one_body: None,
        }
    }

    pub fn with_one_body(mut self, h: CMatrix) -> Self {
        self.one_body = Some(h);
        self
    }
}

/// Symmetric, unit-diagonal, positive-definite matrix of orbital overlaps.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    entries: DMatrix<f64>,
    labels: Vec<String>,
}

impl OverlapMatrix {
    pub fn new(entries: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let d = entries.nrows();
        if entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: entries.ncols(),
            });
        }
        if labels.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: labels.len(),
            });
        }
        for i in 0..d {
            if (entries[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(Error::NotPositiveDefinite(format!(
                    "diagonal entry {} is {}, expected 1",
                    labels[i],
                    entries[(i, i)]
                )));
            }
            for j in 0..i {
                if (entries[(i, j)] - entries[(j, i)]).abs() > 1e-12 {
                    return Err(Error::NotPositiveDefinite(format!(
                        "not symmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        if entries.clone().cholesky().is_none() {
            let min = entries.clone().symmetric_eigen().eigenvalues.min();
            return Err(Error::NotPositiveDefinite(format!(
                "smallest eigenvalue is {min:.6}"
            )));
        }
        Ok(OverlapMatrix { entries, labels })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Overlap between two orbitals looked up by label.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.entries[(i, j)])
    }
}

/// Column `k` of `coeffs` expresses virtual orbital `k` in atomic orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalBasis {
    coeffs: DMatrix<f64>,
}

impl OrbitalBasis {
    pub fn dim(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    /// `max |CᵀSC − I|`.
    pub fn orthonormality_error(&self, s: &OverlapMatrix) -> f64 {
        let gram = self.coeffs.transpose() * s.entries() * &self.coeffs;
        (gram - DMatrix::identity(self.dim(), self.dim())).camax()
    }
}

/// Hermitian `h_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneBodyHamiltonian {
    h: CMatrix,
}

impl OneBodyHamiltonian {
    pub fn new(h: CMatrix) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch {
                expected: h.nrows(),
                found: h.ncols(),
            });
        }
        let deviation = (&h - h.adjoint()).camax();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(OneBodyHamiltonian { h })
    }

    pub fn from_real(h: &DMatrix<f64>) -> Result<Self> {
        Self::new(h.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.h
    }

    /// `Cᵀ h C`.
    pub fn in_basis(&self, basis: &OrbitalBasis) -> Result<OneBodyHamiltonian> {
        if basis.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: basis.dim(),
            });
        }
        let c = basis.coeffs.map(|x| Complex64::new(x, 0.0));
        let h = c.transpose() * &self.h * c;
        // Restore exact Hermiticity lost to rounding.
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(OneBodyHamiltonian { h })
    }

    pub fn to_fermion_sum(&self) -> FermionSum {
        let d = self.dim();
        let mut sum = FermionSum::new(d);
        for i in 0..d {
            for j in 0..d {
                let hij = self.h[(i, j)];
                if hij.norm() >= SIMPLIFY_TOL {
                    sum.push(FermionTerm::hopping(hij, i, j))
                        .expect("indices are below the mode count");
                }
            }
        }
        sum
    }
}

fn check_param(key: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v.abs() >= 1.0 {
        return Err(Error::config(key, format!("{v} is outside (-1, 1)")));
    }
    Ok(())
}

pub fn build_overlap(spec: &MoleculeSpec) -> Result<OverlapMatrix> {
    let OverlapParams { s, s1, s2 } = spec.overlap;
    let entries = match spec.molecule {
        Molecule::H2NoSpin => {
            check_param("S", s)?;
            DMatrix::from_row_slice(2, 2, &[1.0, s, s, 1.0])
        }
        Molecule::H2Spin => {
            check_param("S", s)?;
            #[rustfmt::skip]
            let m = DMatrix::from_row_slice(4, 4, &[
                1.0, s,   0.0, 0.0,
                s,   1.0, 0.0, 0.0,
                0.0, 0.0, 1.0, s,
                0.0, 0.0, s,   1.0,
            ]);
            m
        }
        Molecule::He2NoSpin => {
            check_param("S", s)?;
            check_param("S1", s1)?;
            check_param("S2", s2)?;
            #[rustfmt::skip]
            let m = DMatrix::from_row_slice(4, 4, &[
                1.0, s,   0.0, s1,
                s,   1.0, s1,  0.0,
                0.0, s1,  1.0, s2,
                s1,  0.0, s2,  1.0,
            ]);
            m
        }
        Molecule::Custom => {
            let m = spec.custom_overlap.clone().ok_or_else(|| {
                Error::config("overlap-file", "custom molecule needs an overlap matrix")
            })?;
            let labels = (0..m.nrows()).map(|i| format!("orbital_{i}")).collect();
            return OverlapMatrix::new(m, labels);
        }
    };
    OverlapMatrix::new(entries, spec.molecule.orbital_labels())
}

/// Classical Gram-Schmidt under the metric `⟨u, v⟩ = uᵀSv`, taking the
/// atomic orbitals in label order. The result is upper triangular with a
/// positive diagonal.
pub fn gram_schmidt(s: &OverlapMatrix) -> Result<OrbitalBasis> {
    let d = s.dim();
    let metric = s.entries();
    let mut coeffs = DMatrix::<f64>::zeros(d, d);
    for k in 0..d {
        let mut v = nalgebra::DVector::<f64>::zeros(d);
        v[k] = 1.0;
        for j in 0..k {
            let cj = coeffs.column(j);
            let proj = cj.dot(&metric.column(k));
            v -= cj * proj;
        }
        let norm_sq = v.dot(&(metric * &v));
        if norm_sq <= PIVOT_TOL {
            return Err(Error::DegeneratePivot {
                index: k,
                pivot: norm_sq,
            });
        }
        coeffs.set_column(k, &(v / norm_sq.sqrt()));
    }
    Ok(OrbitalBasis { coeffs })
}

/// One-body Hamiltonian of `spec` re-expressed in the virtual orbitals of
/// `basis`, as `Σ h'_ij b†_i b_j`.
pub fn build_hamiltonian(spec: &MoleculeSpec, basis: &OrbitalBasis) -> Result<FermionSum> {
    let h = spec
        .one_body
        .clone()
        .ok_or_else(|| Error::config("h-matrix", "no one-body matrix supplied"))?;
    let h = OneBodyHamiltonian::new(h)?;
    Ok(h.in_basis(basis)?.to_fermion_sum())
}

const H2_NOSPIN: &str = include_str!("../fixtures/h2_nospin.txt");
const H2_SPIN: &str = include_str!("../fixtures/h2_spin.txt");
const HE2_NOSPIN: &str = include_str!("../fixtures/he2_nospin.txt");

/// Shipped text of a named fixture.
pub fn fixture_text(molecule: Molecule) -> Result<&'static str> {
    match molecule {
        Molecule::H2NoSpin => Ok(H2_NOSPIN),
        Molecule::H2Spin => Ok(H2_SPIN),
        Molecule::He2NoSpin => Ok(HE2_NOSPIN),
        Molecule::Custom => Err(Error::UnknownFixture("custom".into())),
    }
}

/// The published Pauli decomposition for `name`.
pub fn load_fixture(name: &str) -> Result<PauliSum> {
    PauliSum::parse(fixture_text(name.parse()?)?)
}

/// Reads a square real matrix written as whitespace-separated rows.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("invalid number `{t}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    let d = rows.len();
    if d == 0 {
        return Err(Error::Parse {
            line: 0,
            message: "empty matrix".into(),
        });
    }
    if rows[0].len() != d {
        return Err(Error::Parse {
            line: 0,
            message: format!("matrix is {}x{}, expected square", d, rows[0].len()),
        });
    }
    Ok(DMatrix::from_row_iterator(d, d, rows.into_iter().flatten()))
}
