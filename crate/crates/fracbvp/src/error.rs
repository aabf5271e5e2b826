//! Crate-wide error type.

use thiserror::Error;

use crate::wellposed::Certificate;

/// Errors produced by the fractional-calculus kernels, the solvers, and the
/// command-line front end.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Gamma function evaluated at a pole (zero or a negative integer).
    #[error("gamma function pole at x = {x}")]
    GammaPole { x: f64 },

    /// Beta function requires strictly positive arguments.
    #[error("beta function domain error: B({a}, {b}) needs a > 0 and b > 0")]
    BetaDomain { a: f64, b: f64 },

    /// A closed-form fractional operator was applied to a sum mixing
    /// x^mu and (1-x)^mu terms; no power-rule form exists for the cross case.
    #[error("mixed-side power sum has no closed-form fractional transform; use the grid path")]
    MixedSide,

    /// An integral-type operation met an exponent <= -1, which is not
    /// integrable on (0,1).
    #[error("exponent {exponent} is not integrable on (0,1)")]
    NonIntegrable { exponent: f64 },

    /// The Caputo derivative does not exist: classical differentiation left a
    /// term whose exponent is <= -1, so the trailing fractional integral
    /// diverges pointwise.
    #[error("Caputo derivative undefined: differentiated exponent {exponent} <= -1")]
    CaputoUndefined { exponent: f64 },

    /// Problem data violate the cell's compatibility constraint.
    #[error("incompatible data: constraint residual {residual:e} exceeds tolerance")]
    IncompatibleData { residual: f64 },

    /// The requested equation/boundary-condition combination has no solution
    /// in general; the certificate explains the obstruction.
    #[error("ill-posed combination: {}", .certificate.detail)]
    IllPosed { certificate: Box<Certificate> },

    /// An ill-posedness certificate was requested for a well-posed cell.
    #[error("certificate unavailable: the combination is well posed")]
    CertificateUnavailable,

    /// The cell carries no compatibility constraint.
    #[error("the combination carries no compatibility constraint")]
    Unconstrained,

    /// The dense FEM system lost rank; this signals an assembly bug, since the
    /// continuous bilinear form is coercive on the mean-zero subspace.
    #[error("singular linear system in FEM solve")]
    SingularSystem,

    /// Invalid input data (bad grid size, non-finite samples, malformed spec).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
