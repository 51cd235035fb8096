//! Pauli strings and their sparse complex linear combinations.
//!
//! Strings are stored by qubit index (`ops[q]` acts on qubit `q`) and printed
//! with qubit `n-1` first, so `"XY"` means `X` on qubit 1 and `Y` on qubit 0,
//! i.e. the matrix `X ⊗ Y`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::CMatrix;

/// Coefficients with magnitude below this are dropped from every [`PauliSum`].
pub const SIMPLIFY_TOL: f64 = 1e-12;

/// Largest qubit count for which dense matrices are built.
pub const DENSE_MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// The 2×2 matrix in the `{|0⟩, |1⟩}` basis.
    pub fn matrix(self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        CMatrix::from_row_slice(2, 2, &entries)
    }
}

/// A fourth root of unity, stored as the exponent of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn power_of_i(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Single-qubit Pauli product: `a · b = phase · c`.
pub fn mul_single(a: Pauli, b: Pauli) -> (Phase, Pauli) {
    use Pauli::*;
    match (a, b) {
        (I, p) | (p, I) => (Phase::ONE, p),
        (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, I),
        (X, Y) => (Phase::I, Z),
        (Y, X) => (Phase::MINUS_I, Z),
        (Y, Z) => (Phase::I, X),
        (Z, Y) => (Phase::MINUS_I, X),
        (Z, X) => (Phase::I, Y),
        (X, Z) => (Phase::MINUS_I, Y),
    }
}

/// A tensor product of single-qubit Paulis on `n ≥ 1` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    /// Builds a string from operators indexed by qubit (`ops[0]` is qubit 0).
    pub fn from_qubit_ops(ops: Vec<Pauli>) -> Self {
        assert!(!ops.is_empty(), "a Pauli string needs at least one qubit");
        PauliString { ops }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_qubit_ops(vec![Pauli::I; n])
    }

    /// `op` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, op: Pauli) -> Self {
        let mut ops = vec![Pauli::I; n];
        ops[qubit] = op;
        Self::from_qubit_ops(ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.ops[qubit]
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// Image of the basis state `|col⟩`: returns `(row, amplitude)` with
    /// `P|col⟩ = amplitude · |row⟩`.
    pub fn apply_to_basis(&self, col: usize) -> (usize, Complex64) {
        let mut row = col;
        let mut phase = Phase::ONE;
        for (q, &op) in self.ops.iter().enumerate() {
            let bit = (col >> q) & 1;
            match op {
                Pauli::I => {}
                Pauli::X => row ^= 1 << q,
                Pauli::Y => {
                    row ^= 1 << q;
                    phase = phase * if bit == 0 { Phase::I } else { Phase::MINUS_I };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = phase * Phase::MINUS_ONE;
                    }
                }
            }
        }
        (row, phase.to_complex())
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        check_dense(self.num_qubits())?;
        let dim = 1usize << self.num_qubits();
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, amp) = self.apply_to_basis(col);
            m[(row, col)] = amp;
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in self.ops.iter().rev() {
            write!(f, "{}", op.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.is_empty() {
            return Err("empty Pauli string".into());
        }
        let mut ops = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            ops.push(Pauli::from_char(c).ok_or_else(|| format!("invalid Pauli character `{c}`"))?);
        }
        Ok(PauliString { ops })
    }
}

/// A Pauli string carrying a global phase from the Pauli group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub phase: Phase,
    pub string: PauliString,
}

impl PhasedPauli {
    pub fn new(phase: Phase, string: PauliString) -> Self {
        PhasedPauli { phase, string }
    }
}

impl From<PauliString> for PhasedPauli {
    fn from(string: PauliString) -> Self {
        PhasedPauli::new(Phase::ONE, string)
    }
}

/// Qubit-wise product with the accumulated phase.
pub fn mul_strings(p: &PhasedPauli, q: &PhasedPauli) -> Result<PhasedPauli> {
    let (n, m) = (p.string.num_qubits(), q.string.num_qubits());
    if n != m {
        return Err(Error::QubitMismatch { left: n, right: m });
    }
    let mut phase = p.phase * q.phase;
    let ops = p
        .string
        .ops
        .iter()
        .zip(&q.string.ops)
        .map(|(&a, &b)| {
            let (ph, c) = mul_single(a, b);
            phase = phase * ph;
            c
        })
        .collect();
    Ok(PhasedPauli::new(phase, PauliString { ops }))
}

fn check_dense(n: usize) -> Result<()> {
    if n > DENSE_MAX_QUBITS {
        return Err(Error::DenseCutoff {
            qubits: n,
            max: DENSE_MAX_QUBITS,
        });
    }
    Ok(())
}

/// Sparse linear combination `Σ c_P · P` over Pauli strings of one qubit
/// count. Terms keep insertion order, which makes text output reproduce the
/// input layout; equality ignores order.
#[derive(Debug, Clone)]
pub struct PauliSum {
    n: usize,
    terms: IndexMap<PauliString, Complex64>,
}

impl PauliSum {
    /// The empty (zero) operator on `n` qubits.
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "a Pauli sum needs at least one qubit");
        PauliSum {
            n,
            terms: IndexMap::new(),
        }
    }

    pub fn identity(n: usize, coeff: impl Into<Complex64>) -> Self {
        Self::from_term(PauliString::identity(n), coeff)
    }

    pub fn from_term(string: PauliString, coeff: impl Into<Complex64>) -> Self {
        let mut sum = Self::zero(string.num_qubits());
        sum.accumulate(string, coeff.into());
        sum.simplify();
        sum
    }

    /// Collects terms, merging repeated strings.
    pub fn from_terms<I, C>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, C)>,
        C: Into<Complex64>,
    {
        let mut sum = Self::zero(n);
        for (string, coeff) in terms {
            if string.num_qubits() != n {
                return Err(Error::QubitMismatch {
                    left: n,
                    right: string.num_qubits(),
                });
            }
            sum.accumulate(string, coeff.into());
        }
        sum.simplify();
        Ok(sum)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    /// Coefficient of `string`, zero when absent.
    pub fn coeff(&self, string: &PauliString) -> Complex64 {
        self.terms.get(string).copied().unwrap_or_default()
    }

    /// Convenience lookup by printed form, e.g. `sum.coeff_of("XY")`.
    pub fn coeff_of(&self, printed: &str) -> Complex64 {
        printed
            .parse::<PauliString>()
            .map(|s| self.coeff(&s))
            .unwrap_or_default()
    }

    /// `Σ |c_P|`, the LCU normalization.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn accumulate(&mut self, string: PauliString, coeff: Complex64) {
        *self.terms.entry(string).or_default() += coeff;
    }

    fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() >= SIMPLIFY_TOL);
    }

    fn check_same_n(&self, other: &PauliSum) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (s, &c) in &other.terms {
            out.accumulate(s.clone(), c);
        }
        out.simplify();
        Ok(out)
    }

    /// Operator product `self · other`, expanded over all term pairs.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_n(other)?;
        let mut out = PauliSum::zero(self.n);
        for (p, &a) in &self.terms {
            for (q, &b) in &other.terms {
                let r = mul_strings(&p.clone().into(), &q.clone().into())?;
                out.accumulate(r.string, a * b * r.phase.to_complex());
            }
        }
        out.simplify();
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= factor);
        out.simplify();
        out
    }

    pub fn neg(&self) -> PauliSum {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Pauli strings are Hermitian, so the sum is Hermitian iff every
    /// coefficient is real.
    pub fn is_hermitian_as_sum(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < SIMPLIFY_TOL)
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        check_dense(self.n)?;
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (s, &c) in &self.terms {
            for col in 0..dim {
                let (row, amp) = s.apply_to_basis(col);
                m[(row, col)] += c * amp;
            }
        }
        Ok(m)
    }

    /// Term-wise comparison within `tol`, ignoring term order.
    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        self.n == other.n
            && self
                .terms
                .keys()
                .chain(other.terms.keys())
                .all(|s| (self.coeff(s) - other.coeff(s)).norm() <= tol)
    }

    /// Parses the one-term-per-line text format (`<coeff> <string>`).
    pub fn parse(text: &str) -> Result<PauliSum> {
        let mut n = None;
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(coeff), Some(string), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(err(format!(
                    "expected `<coefficient> <pauli string>`, got `{line}`"
                )));
            };
            let coeff = parse_complex(coeff).map_err(err)?;
            let string: PauliString = string.parse().map_err(err)?;
            match n {
                None => n = Some(string.num_qubits()),
                Some(n) if n != string.num_qubits() => {
                    return Err(err(format!(
                        "string `{string}` has {} qubits, expected {n}",
                        string.num_qubits()
                    )));
                }
                Some(_) => {}
            }
            entries.push((string, coeff));
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            message: "no terms; qubit count cannot be determined".into(),
        })?;
        PauliSum::from_terms(n, entries)
    }
}

impl PartialEq for PauliSum {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .all(|(s, c)| other.terms.get(s) == Some(c))
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in &self.terms {
            writeln!(f, "{} {}", format_complex(*c), s)?;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliSum::parse(s)
    }
}

/// Shortest round-trip decimal; `a+bi` when the imaginary part is nonzero.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im.is_sign_negative() {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Accepts `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("invalid coefficient `{s}`");
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}
