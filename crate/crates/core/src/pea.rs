//! Phase estimation over an `N`-level register.
//!
//! The register starts in the uniform superposition, branch `k` receives
//! `U^k`, and an `N`-point inverse Fourier transform with kernel
//! `e^{-2πi kK/N}/√N` maps the register to outcomes `K = 0..N`. For
//! `U = e^{-iHt}` an eigenvalue `λ` appears as register phase
//! `θ = frac(-λt/2π)`, peaking at `K ≈ Nθ`. For `N = 2^n` this is the
//! textbook qubit-register algorithm.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::statevec::{self, EvolutionOperator, StateVector, ANNIHILATION_TOL};
use crate::{CMatrix, CVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeaConfig {
    /// Register dimension `N ≥ 2`.
    pub registers: usize,
    /// Evolution time `t` used to build `U`; only needed for decoding.
    pub time: f64,
}

impl PeaConfig {
    pub fn new(registers: usize, time: f64) -> Result<Self> {
        if registers < 2 {
            return Err(Error::config(
                "registers",
                format!("{registers} is below 2"),
            ));
        }
        if time == 0.0 || !time.is_finite() {
            return Err(Error::config(
                "time",
                format!("{time} must be finite and nonzero"),
            ));
        }
        Ok(PeaConfig { registers, time })
    }
}

/// Input state fed to the system register.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Equal superposition of all computational basis states.
    Uniform,
    /// Eigenvector `i` of the Hamiltonian, eigenvalues ascending.
    Eigenstate(usize),
    /// Computational basis state `|i⟩`.
    Basis(usize),
    /// Arbitrary amplitudes, normalized on use.
    Vector(CVector),
}

impl InitialState {
    pub fn prepare(&self, h: &PauliSum) -> Result<StateVector> {
        let dim = 1usize << h.num_qubits();
        match self {
            InitialState::Uniform => Ok(StateVector::uniform(dim)),
            InitialState::Basis(i) => StateVector::basis(dim, *i),
            InitialState::Eigenstate(i) => {
                let (_, vectors) = statevec::eig_hermitian(&statevec::hermitian_dense(h)?)?;
                if *i >= dim {
                    return Err(Error::config(
                        "initial-state",
                        format!("eigenstate {i} out of range for dimension {dim}"),
                    ));
                }
                Ok(StateVector::from_amplitudes(
                    vectors.column(*i).into_owned(),
                ))
            }
            InitialState::Vector(v) => {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: v.len(),
                    });
                }
                StateVector::normalized(v.clone())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            InitialState::Uniform => "uniform".into(),
            InitialState::Eigenstate(i) => format!("eigenstate:{i}"),
            InitialState::Basis(i) => format!("basis:{i}"),
            InitialState::Vector(v) => format!("vector[{}]", v.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    pub registers: usize,
    pub probabilities: Vec<f64>,
    pub time: f64,
    /// Squared norm of the joint state before renormalization; 1 for a
    /// unitary `U`.
    pub success_probability: f64,
    /// Free-form run annotations (molecule, order, warnings, …).
    pub metadata: BTreeMap<String, String>,
}

impl PhaseDistribution {
    /// `2πK/N` for every outcome.
    pub fn phases(&self) -> Vec<f64> {
        (0..self.registers)
            .map(|k| phase_of(k, self.registers))
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn argmax(&self) -> usize {
        find_peaks(self, 1)[0].0
    }

    /// Full width at half maximum of the peak at `peak`, in phase units.
    /// Crossings are linearly interpolated between neighbouring outcomes and
    /// the register is treated as circular.
    pub fn half_height_width(&self, peak: usize) -> f64 {
        let n = self.registers;
        let p = &self.probabilities;
        let half = p[peak] / 2.0;
        let side = |dir: isize| -> f64 {
            let at =
                |i: usize| p[(peak as isize + dir * i as isize).rem_euclid(n as isize) as usize];
            for i in 1..n {
                let (prev, cur) = (at(i - 1), at(i));
                if cur < half {
                    return (i - 1) as f64 + (prev - half) / (prev - cur);
                }
            }
            n as f64 / 2.0
        };
        (side(1) + side(-1)) * 2.0 * PI / n as f64
    }
}

pub fn phase_of(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Runs phase estimation of `u` on `system`. A non-unitary `u` (e.g. a
/// truncated Taylor operator) is accepted; the joint state is renormalized
/// once after all controlled powers and a warning is stored in `metadata`.
pub fn run_pea(
    u: &EvolutionOperator,
    config: PeaConfig,
    system: &StateVector,
) -> Result<PhaseDistribution> {
    let n = config.registers;
    let d = u.dim();
    if system.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: system.dim(),
        });
    }
    let scale = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut joint = CVector::zeros(n * d);
    for k in 0..n {
        joint
            .rows_mut(k * d, d)
            .copy_from(&(system.amplitudes() * scale));
    }
    let joint = statevec::controlled_apply(u, &StateVector::from_amplitudes(joint), n)?;
    let mut amps = joint.amplitudes().clone();
    let norm_sq = amps.norm_squared();
    let mut metadata = BTreeMap::new();
    let success_probability = if u.is_unitary() {
        1.0
    } else {
        if norm_sq < ANNIHILATION_TOL {
            return Err(Error::Annihilated {
                probability: norm_sq,
            });
        }
        amps /= Complex64::new(norm_sq.sqrt(), 0.0);
        metadata.insert(
            "warning".to_string(),
            format!("non-unitary evolution; distribution postselected with success probability {norm_sq}"),
        );
        norm_sq
    };

    let registers = CMatrix::from_fn(n, d, |k, s| amps[k * d + s]);
    let transformed = inverse_dft(n) * registers;
    let probabilities = transformed
        .row_iter()
        .map(|row| row.norm_squared())
        .collect();
    Ok(PhaseDistribution {
        registers: n,
        probabilities,
        time: config.time,
        success_probability,
        metadata,
    })
}

/// `F[K][k] = e^{-2πi kK/N}/√N`.
pub fn inverse_dft(n: usize) -> CMatrix {
    let norm = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |kk, k| {
        let angle = -2.0 * PI * ((k * kk) % n) as f64 / n as f64;
        Complex64::from_polar(norm, angle)
    })
}

/// Half-open energy interval `[lo, hi)` used to resolve the alias integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    pub lo: f64,
    pub hi: f64,
}

impl EnergyWindow {
    pub fn new(lo: f64, hi: f64) -> Self {
        EnergyWindow { lo, hi }
    }

    /// The widest alias-free window, `[center − π/|t|, center + π/|t|)`.
    pub fn centered(center: f64, time: f64) -> Self {
        let half = PI / time.abs();
        EnergyWindow::new(center - half, center + half)
    }

    pub fn contains(&self, e: f64) -> bool {
        self.lo <= e && e < self.hi
    }
}

/// `E = −2π(K/N + j)/t` for the single integer `j` placing `E` in `window`.
pub fn decode_energy(k_peak: usize, config: PeaConfig, window: EnergyWindow) -> Result<f64> {
    let t = config.time;
    if t == 0.0 {
        return Err(Error::config("time", "must be nonzero"));
    }
    let period = 2.0 * PI / t.abs();
    let width = window.hi - window.lo;
    if width.is_nan() || width <= 0.0 || width > period * (1.0 + 1e-12) {
        return Err(Error::DecodeWindow(format!(
            "width {width} must be positive and at most 2π/|t| = {period}"
        )));
    }
    let theta = k_peak as f64 / config.registers as f64;
    let energy = |j: i64| -2.0 * PI * (theta + j as f64) / t;
    // E(j) is linear in j; bracket the j values that can reach the window.
    let j_at = |e: f64| -e * t / (2.0 * PI) - theta;
    let (a, b) = (j_at(window.lo), j_at(window.hi));
    let (j_min, j_max) = (a.min(b).floor() as i64 - 1, a.max(b).ceil() as i64 + 1);
    let hits: Vec<f64> = (j_min..=j_max)
        .map(energy)
        .filter(|&e| window.contains(e))
        .collect();
    match hits.as_slice() {
        [e] => Ok(*e),
        [] => Err(Error::DecodeWindow(format!(
            "no alias of K={k_peak} lies in [{}, {})",
            window.lo, window.hi
        ))),
        _ => Err(Error::DecodeWindow(format!(
            "{} aliases of K={k_peak} lie in [{}, {})",
            hits.len(),
            window.lo,
            window.hi
        ))),
    }
}

/// The `count` most probable outcomes, ties going to the smaller `K`.
pub fn find_peaks(d: &PhaseDistribution, count: usize) -> Vec<(usize, f64)> {
    let mut ranked: Vec<(usize, f64)> = d.probabilities.iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(count);
    ranked
}

/// Register value nearest `N·frac(−λt/2π)`, wrapped into `0..N`.
pub fn expected_peak(eigenvalue: f64, config: PeaConfig) -> usize {
    let theta = (-eigenvalue * config.time / (2.0 * PI)).rem_euclid(1.0);
    let n = config.registers;
    ((theta * n as f64).round() as usize) % n
}

/// Draws `shots` outcomes from `d`; returns counts per `K`.
pub fn sample(d: &PhaseDistribution, shots: usize, seed: u64) -> Result<Vec<u64>> {
    let weights = WeightedIndex::new(&d.probabilities)
        .map_err(|e| Error::config("distribution", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; d.registers];
    for _ in 0..shots {
        counts[weights.sample(&mut rng)] += 1;
    }
    Ok(counts)
}
