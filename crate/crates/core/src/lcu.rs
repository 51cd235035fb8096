//! Truncated Taylor expansion of the time-evolution operator.
//!
//! For a Hermitian Pauli sum `H`, one segment of length `τ = t/m` is
//!
//! ```text
//! Ṽ = Σ_{l=0}^{k} (-iτ)^l H^l / l!
//! ```
//!
//! kept as a [`PauliSum`] so every Pauli coefficient of the expansion is an
//! explicit LCU weight. The full evolution is `Ṽ^m`. `Ṽ` is not unitary, and
//! applying it models a postselected LCU circuit: the state is renormalized
//! and the squared norm is reported as the success probability.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::statevec::{self, EvolutionOperator, StateVector};
use crate::CMatrix;

/// Default cap on expansion size.
pub const TERM_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcuConfig {
    /// Highest Taylor power kept.
    pub order: usize,
    /// Number of segments `m`.
    pub segments: usize,
    /// Total evolution time `t`.
    pub time: f64,
}

impl LcuConfig {
    pub fn new(order: usize, segments: usize, time: f64) -> Result<Self> {
        let cfg = LcuConfig {
            order,
            segments,
            time,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Picks the smallest `m` with `‖H‖₁·|t|/m ≤ 1`.
    pub fn with_default_segments(h: &PauliSum, order: usize, time: f64) -> Result<Self> {
        Self::new(order, default_segments(h, time), time)
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments == 0 {
            return Err(Error::config("segments", "must be at least 1"));
        }
        if !self.time.is_finite() {
            return Err(Error::config(
                "time",
                format!("{} is not finite", self.time),
            ));
        }
        Ok(())
    }

    pub fn segment_time(&self) -> f64 {
        self.time / self.segments as f64
    }
}

pub fn default_segments(h: &PauliSum, time: f64) -> usize {
    let angle = h.one_norm() * time.abs();
    (angle.ceil() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorLcuOperator {
    pub config: LcuConfig,
    /// `Ṽ` for a single segment.
    pub expansion: PauliSum,
    /// A-priori bound on `‖Ṽ^m − e^{-iHt}‖`: with per-segment remainder `r`
    /// (using `‖H‖ ≤ ‖H‖₁`), `‖(U + R)^m − U^m‖ ≤ (1 + r)^m − 1`.
    pub error_bound: f64,
}

impl TaylorLcuOperator {
    pub fn num_qubits(&self) -> usize {
        self.expansion.num_qubits()
    }

    /// Dense `Ṽ` for one segment.
    pub fn segment_matrix(&self) -> Result<CMatrix> {
        self.expansion.to_dense()
    }

    /// Dense `Ṽ^m` wrapped as an operator (normally flagged non-unitary).
    pub fn evolution_operator(&self) -> Result<EvolutionOperator> {
        let v = self.segment_matrix()?;
        EvolutionOperator::new(statevec::matrix_power(&v, self.config.segments))
    }
}

pub fn build_taylor(h: &PauliSum, config: LcuConfig) -> Result<TaylorLcuOperator> {
    build_taylor_with_budget(h, config, TERM_BUDGET)
}

pub fn build_taylor_with_budget(
    h: &PauliSum,
    config: LcuConfig,
    budget: usize,
) -> Result<TaylorLcuOperator> {
    config.validate()?;
    if !h.is_hermitian_as_sum() {
        let deviation = h.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.num_qubits();
    let step = Complex64::new(0.0, -config.segment_time());
    let mut power = PauliSum::identity(n, 1.0);
    let mut expansion = power.clone();
    for l in 1..=config.order {
        power = power.mul(h)?.scale(step / l as f64);
        if power.len() > budget {
            return Err(Error::TermBudget {
                order: l,
                terms: power.len(),
                budget,
            });
        }
        if power.is_empty() {
            break;
        }
        expansion = expansion.add(&power)?;
    }
    Ok(TaylorLcuOperator {
        config,
        expansion,
        error_bound: remainder_bound(h.one_norm(), config),
    })
}

/// `(1 + r)^m − 1` with `r = Σ_{l>k} (λτ)^l / l!`, `λ = ‖H‖₁`.
fn remainder_bound(lambda: f64, config: LcuConfig) -> f64 {
    let x = lambda * config.segment_time().abs();
    let mut term = 1.0;
    let mut partial = 1.0;
    for l in 1..=config.order {
        term *= x / l as f64;
        partial += term;
    }
    let tail = (x.exp() - partial).max(0.0);
    (1.0 + tail).powi(config.segments as i32) - 1.0
}

/// Spectral norm `‖Ṽ^m − e^{-iHt}‖`, computed densely.
pub fn truncation_error(h: &PauliSum, config: LcuConfig) -> Result<f64> {
    let approx = build_taylor(h, config)?.evolution_operator()?;
    let exact = statevec::exact_exponential(h, config.time)?;
    let diff = approx.matrix() - exact.matrix();
    Ok(diff.singular_values().max())
}

/// Applies `Ṽ` once per segment with renormalization. Returns the final
/// state and the product of per-segment success probabilities.
pub fn evolve(h: &PauliSum, config: LcuConfig, state: &StateVector) -> Result<(StateVector, f64)> {
    let op = build_taylor(h, config)?;
    let v = EvolutionOperator::new(op.segment_matrix()?)?;
    let mut current = state.clone();
    let mut success = 1.0;
    for _ in 0..config.segments {
        let (next, p) = statevec::apply(&v, &current, true)?;
        current = next;
        success *= p;
    }
    Ok((current, success))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn order_zero_is_identity() {
        let h = PauliSum::from_term("ZX".parse().unwrap(), 0.7);
        let op = build_taylor(&h, LcuConfig::new(0, 1, 1.0).unwrap()).unwrap();
        assert_eq!(op.expansion, PauliSum::identity(2, 1.0));
    }

    #[test]
    fn first_order_single_term() {
        let a = 0.3;
        let h = PauliSum::from_term("Z".parse().unwrap(), a);
        let op = build_taylor(&h, LcuConfig::new(1, 1, 1.0).unwrap()).unwrap();
        let want = PauliSum::from_terms(
            1,
            [
                ("I".parse().unwrap(), c(1.0, 0.0)),
                ("Z".parse().unwrap(), c(0.0, -a)),
            ],
        )
        .unwrap();
        assert_eq!(op.expansion, want);
        assert!(!op.expansion.is_hermitian_as_sum());
    }

    #[test]
    fn config_validation() {
        assert!(LcuConfig::new(2, 0, 1.0).is_err());
        assert!(LcuConfig::new(2, 1, f64::NAN).is_err());
        let h = PauliSum::from_terms(
            1,
            [("Z".parse().unwrap(), 2.5), ("X".parse().unwrap(), -1.0)],
        )
        .unwrap();
        assert_eq!(default_segments(&h, 1.0), 4);
        assert_eq!(default_segments(&h, 0.1), 1);
        assert_eq!(default_segments(&PauliSum::zero(1), 5.0), 1);
    }

    #[test]
    fn term_budget_reports_order() {
        let h = crate::chem::load_fixture("He2-nospin").unwrap();
        let err = build_taylor_with_budget(&h, LcuConfig::new(3, 1, 1.0).unwrap(), 20).unwrap_err();
        assert!(
            matches!(
                err,
                Error::TermBudget {
                    order: 2,
                    budget: 20,
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn non_hermitian_rejected() {
        let h = PauliSum::from_term("X".parse().unwrap(), c(0.0, 1.0));
        assert!(matches!(
            build_taylor(&h, LcuConfig::new(1, 1, 1.0).unwrap()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn zero_hamiltonian_evolves_trivially() {
        let s = StateVector::uniform(4);
        let (out, p) = evolve(&PauliSum::zero(2), LcuConfig::new(3, 2, 1.0).unwrap(), &s).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert!((out.amplitudes() - s.amplitudes()).camax() < 1e-15);
    }

    #[test]
    fn order_zero_error_is_exact_distance() {
        let h = PauliSum::from_term("Z".parse().unwrap(), 0.5);
        let err = truncation_error(&h, LcuConfig::new(0, 1, 1.0).unwrap()).unwrap();
        // ‖I − diag(e^{-i/2}, e^{i/2})‖ = |1 − e^{-i/2}| = 2 sin(1/4)
        assert!((err - 2.0 * 0.25f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn bound_dominates_exact_error() {
        let h = crate::chem::load_fixture("H2-nospin").unwrap();
        for k in 1..4 {
            let cfg = LcuConfig::with_default_segments(&h, k, 1.0).unwrap();
            let op = build_taylor(&h, cfg).unwrap();
            assert!(truncation_error(&h, cfg).unwrap() <= op.error_bound * 1.000001);
        }
    }
}
