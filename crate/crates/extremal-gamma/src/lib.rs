//! Norming constants and limit distributions for row maxima of triangular
//! gamma arrays and for the largest coordinate of exchangeable Dirichlet
//! vectors of growing dimension.
//!
//! The row distribution is Gamma(α_n, 1) where the shape parameter is a
//! closed-form family α_n = c·n^p·(log n)^q. Depending on how α_n compares
//! to log n and to 1/n, the maximum M_n converges (after a linear or power
//! transformation) to one of five limit laws: Gumbel, F_α, H(α, β),
//! Uniform(0, 1), or the mixture U_λ. This crate
//!
//! - classifies a family into its convergence regime ([`family`]),
//! - solves the implicit norming equations for b_n, ζ_n, ξ_n and assembles
//!   the centering/scaling per regime ([`norming`]),
//! - evaluates the limit laws through CDFs, quantiles, and moments
//!   ([`limits`]),
//! - samples gamma rows and Dirichlet vectors in log space with
//!   reproducible, splittable randomness ([`sampling`]),
//! - and verifies the convergence statements at desk scale, exactly via
//!   incomplete gamma for the gamma model and by Monte Carlo
//!   goodness-of-fit for the Dirichlet model ([`verify`]).
//!
//! All exact computation rests on the special functions in [`special`].
//!
//! # Example
//!
//! ```
//! use extremal_gamma::family::ShapeFamily;
//! use extremal_gamma::norming::gamma_norming;
//!
//! // alpha_n = 1 for all n: classical exponential maxima, Gumbel limit
//! let fam = ShapeFamily::new(1.0, 0.0, 0.0).unwrap();
//! let nc = gamma_norming(1000, &fam).unwrap();
//! assert!((nc.c_n - 1.0).abs() < 1e-15);
//! assert!((nc.d_n - 1000f64.ln()).abs() < 1e-12);
//! ```

pub mod cli;
pub mod family;
pub mod limits;
pub mod norming;
mod quad;
pub mod sampling;
pub mod special;
pub mod verify;

use thiserror::Error as ThisError;

/// Crate-wide error type. The CLI maps variants onto its exit codes.
#[derive(Debug, ThisError)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration (series, continued fraction, bisection) did not reach
    /// its tolerance within the iteration cap.
    #[error("convergence failure after {iterations} iterations: {context}")]
    Convergence { context: String, iterations: u32 },

    /// The requested solve presumes a regime the given family is not in.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    /// The family is in the right regime but n is too small for the
    /// asymptotic quantities to exist yet.
    #[error("regime not yet asymptotic at this n: {0}")]
    NotYetAsymptotic(String),

    /// Operation undefined for this input by design (e.g. the H law has
    /// no closed-form CDF).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Caller misuse: malformed input, missing required argument,
    /// violated precondition.
    #[error("usage: {0}")]
    Usage(String),

    /// A configured resource budget would be exceeded.
    #[error("resource budget exceeded: {0}")]
    Budget(String),

    /// Numerical failure that is none of the above (overflow, failed
    /// quadrature target, lost bracket).
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl Error {
    /// Process exit code for this error: 2 numeric/regime, 3 resource,
    /// 64 usage.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 64,
            Error::Budget(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
