use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::DistanceConvention;

/// How smooth max-relative entropies are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothingStrategy {
    /// Report the unsmoothed value, an upper bound on the smoothed one.
    #[default]
    None,
    /// Exact optimum over perturbations diagonal in the common eigenbasis;
    /// requires commuting arguments.
    DiagonalScan,
}

/// Smoothing strategy together with the purified-distance convention of the ball.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Smoothing {
    pub strategy: SmoothingStrategy,
    pub convention: DistanceConvention,
}

impl Smoothing {
    pub fn new(strategy: SmoothingStrategy, convention: DistanceConvention) -> Self {
        Self {
            strategy,
            convention,
        }
    }
}

/// Which of δ or δ' enters the fractional-log penalty of the two-user theorem rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaChoice {
    #[default]
    Delta,
    DeltaPrime,
}

/// Error, smoothing and secrecy parameters shared by every rate expression.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceParams {
    /// Decoding error / hypothesis-testing parameter ε.
    pub eps: f64,
    /// Covering parameter ε', strictly below `delta_prime`.
    pub eps_prime: f64,
    pub delta: f64,
    pub delta_prime: f64,
    /// Secrecy threshold ϑ.
    pub theta: f64,
    /// Value substituted for every unspecified constant-order term.
    pub big_o_constant: f64,
    pub delta_choice: DeltaChoice,
}

impl Default for ToleranceParams {
    fn default() -> Self {
        Self {
            eps: 0.25,
            eps_prime: 0.1,
            delta: 0.01,
            delta_prime: 0.2,
            theta: 0.01,
            big_o_constant: 0.0,
            delta_choice: DeltaChoice::Delta,
        }
    }
}

impl ToleranceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::OutOfRange {
                name: "eps",
                value: self.eps,
            });
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: self.delta,
            });
        }
        if !(self.delta_prime > 0.0 && self.delta_prime.is_finite()) {
            return Err(Error::OutOfRange {
                name: "delta_prime",
                value: self.delta_prime,
            });
        }
        if !(self.eps_prime > 0.0 && self.eps_prime < self.delta_prime) {
            return Err(Error::OutOfRange {
                name: "eps_prime",
                value: self.eps_prime,
            });
        }
        // smoothing balls are defined for radii in (0, 1)
        if self.eta() >= 1.0 {
            return Err(Error::OutOfRange {
                name: "eta",
                value: self.eta(),
            });
        }
        if !(self.theta >= 0.0) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: self.theta,
            });
        }
        if !self.big_o_constant.is_finite() {
            return Err(Error::OutOfRange {
                name: "big_o_constant",
                value: self.big_o_constant,
            });
        }
        Ok(())
    }

    /// η = δ' − ε', the smoothing radius of every max-information term.
    pub fn eta(&self) -> f64 {
        self.delta_prime - self.eps_prime
    }

    /// log₂(3/ε'³).
    pub fn log_three_over_eps_prime_cubed(&self) -> f64 {
        (3.0 / self.eps_prime.powi(3)).log2()
    }

    /// The δ-type parameter used by the two-user theorem rows.
    pub fn theorem_one_delta(&self) -> f64 {
        match self.delta_choice {
            DeltaChoice::Delta => self.delta,
            DeltaChoice::DeltaPrime => self.delta_prime,
        }
    }
}
