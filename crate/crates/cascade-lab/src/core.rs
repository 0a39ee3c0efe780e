//! Shared domain types and belief-space conversions.
//!
//! Everything downstream works with the public log-likelihood ratio `l`
//! rather than the probability `pi = 1/(1+e^-l)`, because `l` grows without
//! bound under asymptotic learning while `pi` saturates in double precision.
//! Conversions here are overflow-safe and keep both a probability and its
//! complement so that `logit(logistic(x))` round-trips far into the tails.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation errors for model parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("signal accuracy p must lie strictly in (1/2, 1), got {0}")]
    SignalAccuracy(f64),
    #[error("signal standard deviation must be positive, got {0}")]
    Sigma(f64),
    #[error("fixed privacy budget must be positive, got {0}")]
    Epsilon(f64),
    #[error("uniform budget requires 0 <= lo < hi, got [{lo}, {hi}]")]
    UniformRange { lo: f64, hi: f64 },
    #[error("probability outside [0, 1]: {0}")]
    Probability(f64),
    #[error("NaN is not a valid input")]
    NotANumber,
}

/// The unknown binary state of nature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WorldState {
    Plus,
    Minus,
}

impl WorldState {
    /// Signed value of the state, +1.0 or -1.0.
    pub fn sign(self) -> f64 {
        match self {
            WorldState::Plus => 1.0,
            WorldState::Minus => -1.0,
        }
    }

    pub fn flip(self) -> WorldState {
        match self {
            WorldState::Plus => WorldState::Minus,
            WorldState::Minus => WorldState::Plus,
        }
    }
}

/// A privacy-budget description: fixed, infinite (non-private), or uniform
/// over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BudgetSpec {
    Fixed(f64),
    Infinite,
    UniformDist { lo: f64, hi: f64 },
}

impl BudgetSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        match *self {
            BudgetSpec::Fixed(eps) => {
                if !eps.is_finite() || eps <= 0.0 {
                    return Err(ParamError::Epsilon(eps));
                }
            }
            BudgetSpec::Infinite => {}
            BudgetSpec::UniformDist { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || lo >= hi {
                    return Err(ParamError::UniformRange { lo, hi });
                }
            }
        }
        Ok(())
    }
}

/// A probability together with its complement.
///
/// Storing `1 - p` explicitly preserves tail information that a bare f64
/// destroys near 1, which is what makes the logit/logistic round trip exact
/// to ~1e-14 over |l| <= 700 instead of failing beyond |l| ~ 16.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    p: f64,
    q: f64,
}

impl Probability {
    /// Build from a plain probability value in [0, 1].
    pub fn new(p: f64) -> Result<Self, ParamError> {
        if p.is_nan() {
            return Err(ParamError::NotANumber);
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(ParamError::Probability(p));
        }
        Ok(Probability { p, q: 1.0 - p })
    }

    pub fn value(self) -> f64 {
        self.p
    }

    /// 1 - p, carried exactly.
    pub fn complement(self) -> f64 {
        self.q
    }
}

/// The public belief, stored as the log-likelihood ratio
/// `l = log P(theta=+1|history) / P(theta=-1|history)`.
///
/// `l = +/-inf` is the absorbed-belief sentinel; finite arithmetic never
/// produces it by overflow because conversions run in the log domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PublicBelief {
    pub l: f64,
}

impl PublicBelief {
    pub fn neutral() -> Self {
        PublicBelief { l: 0.0 }
    }

    pub fn new(l: f64) -> Result<Self, ParamError> {
        if l.is_nan() {
            return Err(ParamError::NotANumber);
        }
        Ok(PublicBelief { l })
    }

    pub fn is_absorbed(self) -> bool {
        self.l.is_infinite()
    }

    /// The probability form `pi = 1/(1+e^-l)`.
    pub fn pi(self) -> Probability {
        logistic(self.l)
    }
}

/// `1/(1+e^-l)`, overflow-safe for any `l` including +/-inf.
pub fn logistic(l: f64) -> Probability {
    if l.is_nan() {
        return Probability { p: f64::NAN, q: f64::NAN };
    }
    // Evaluate each side with an exponent that cannot overflow.
    let p = if l >= 0.0 {
        1.0 / (1.0 + (-l).exp())
    } else {
        let e = l.exp();
        e / (1.0 + e)
    };
    let q = if l >= 0.0 {
        let e = (-l).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + l.exp())
    };
    Probability { p, q }
}

/// `log(p / (1-p))`, the inverse of [`logistic`]. Endpoints map to the
/// +/-inf sentinels.
pub fn logit(pi: Probability) -> Result<f64, ParamError> {
    let (p, q) = (pi.p, pi.q);
    if p.is_nan() || q.is_nan() {
        return Err(ParamError::NotANumber);
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if q == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(p.ln() - q.ln())
}

/// Parameters of the binary-signal model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryParams {
    pub p: f64,
    pub budget: BudgetSpec,
}

impl BinaryParams {
    pub fn new(p: f64, budget: BudgetSpec) -> Result<Self, ParamError> {
        if !(p > 0.5 && p < 1.0) {
            return Err(ParamError::SignalAccuracy(p));
        }
        budget.validate()?;
        Ok(BinaryParams { p, budget })
    }
}

/// Parameters of the Gaussian-signal model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub sigma: f64,
    pub budget: BudgetSpec,
}

impl GaussianParams {
    pub fn new(sigma: f64, budget: BudgetSpec) -> Result<Self, ParamError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(ParamError::Sigma(sigma));
        }
        budget.validate()?;
        Ok(GaussianParams { sigma, budget })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn logistic_at_zero_is_half() {
        assert_eq!(logistic(0.0).value(), 0.5);
        assert_eq!(logistic(0.0).complement(), 0.5);
    }

    #[test]
    fn logistic_saturates_without_overflow() {
        assert_eq!(logistic(f64::INFINITY).value(), 1.0);
        assert_eq!(logistic(1000.0).value(), 1.0);
        assert_eq!(logistic(1.0e6).value(), 1.0);
        assert_eq!(logistic(-1000.0).complement(), 1.0);
    }

    #[test]
    fn logit_endpoints_are_sentinels() {
        assert_eq!(logit(Probability::new(1.0).unwrap()).unwrap(), f64::INFINITY);
        assert_eq!(logit(Probability::new(0.0).unwrap()).unwrap(), f64::NEG_INFINITY);
        assert_eq!(logit(Probability::new(0.5).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn logit_rejects_nan() {
        assert!(Probability::new(f64::NAN).is_err());
    }

    #[test]
    fn round_trip_inverse_pair() {
        let x = 3.7;
        let back = logit(logistic(x)).unwrap();
        assert!((back - x).abs() < 1e-12, "got {back}");
    }

    #[test]
    fn parameter_validation() {
        assert!(BinaryParams::new(0.5, BudgetSpec::Infinite).is_err());
        assert!(BinaryParams::new(1.0, BudgetSpec::Infinite).is_err());
        assert!(BinaryParams::new(1.2, BudgetSpec::Infinite).is_err());
        assert!(BinaryParams::new(0.7, BudgetSpec::Fixed(-1.0)).is_err());
        assert!(BinaryParams::new(0.7, BudgetSpec::Fixed(0.0)).is_err());
        assert!(GaussianParams::new(0.0, BudgetSpec::Infinite).is_err());
        assert!(GaussianParams::new(-2.0, BudgetSpec::Infinite).is_err());
        assert!(BudgetSpec::UniformDist { lo: 0.5, hi: 0.5 }.validate().is_err());
        assert!(BudgetSpec::UniformDist { lo: -0.1, hi: 1.0 }.validate().is_err());
        assert!(BudgetSpec::UniformDist { lo: 0.0, hi: 1.0 }.validate().is_ok());
    }

    proptest! {
        #[test]
        fn round_trip_within_1e9(x in -30.0f64..30.0) {
            let back = logit(logistic(x)).unwrap();
            prop_assert!((back - x).abs() <= 1e-9, "x={x} back={back}");
        }

        #[test]
        fn antisymmetry(l in -700.0f64..700.0) {
            let a = logistic(-l).value();
            let b = logistic(l).complement();
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }
}
