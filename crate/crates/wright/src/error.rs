//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by evaluation and expansion routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum WrightError {
    /// Gamma evaluated at a nonpositive integer.
    #[error("gamma function pole at {0}")]
    Pole(String),

    /// The parameter κ = 1 + Σβ − Σα is not positive; the defining series
    /// does not converge for all z and the asymptotic machinery does not apply.
    #[error("kappa = {kappa} is not positive")]
    KappaNonPositive { kappa: f64 },

    /// The defining series failed to converge within the term budget.
    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),

    /// Two pole sequences of g(-s) collide; the simple-pole algebraic
    /// expansion is invalid there.
    #[error("higher-order pole: sequences m={m} (k={k}) and r={r} (k'={k_prime}) collide")]
    HigherOrderPole {
        m: usize,
        k: usize,
        r: usize,
        k_prime: usize,
    },

    /// Raising the working precision repeatedly still left the residual
    /// below the oracle's error floor.
    #[error("residual lost to the oracle error floor after {attempts} precision escalations")]
    PrecisionExhausted { attempts: usize },

    /// Generalised Bernoulli polynomials are only generated for σ ≤ 0.
    #[error("unsupported sigma {0} > 0 for generalised Bernoulli polynomial")]
    UnsupportedSigma(i64),

    /// A parameter set violates the definition's restrictions.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A Stokes-line location was requested outside the regime where the
    /// formula applies.
    #[error("out of regime: {0}")]
    OutOfRegime(String),
}

pub type Result<T> = std::result::Result<T, WrightError>;
