//! Error type shared by the whole library.
//!
//! Variants split into two families: input/validation failures (rejected
//! constructor arguments, out-of-domain parameters) and numerical
//! degeneracies (quantities that exist mathematically but cannot be
//! computed reliably from the given data). The CLI maps the families to
//! distinct exit codes.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A transmission amplitude of zero admits no transfer matrix (alpha = 1/t).
    #[error("transmission amplitude is zero: no transfer matrix exists")]
    NoTransmission,

    /// |r|^2 + |t|^2 deviates from 1 beyond the accepted tolerance.
    #[error("flux conservation violated: ||r|^2+|t|^2 - 1| = {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    FluxViolation { residual: f64, tolerance: f64 },

    /// |alpha|^2 - |beta|^2 deviates from 1 beyond the accepted tolerance.
    #[error("determinant condition violated: ||alpha|^2-|beta|^2 - 1| = {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    DetViolation { residual: f64, tolerance: f64 },

    /// Scattering requires a propagating asymptotic state, i.e. E > 0.
    #[error("energy must be positive, got {value}")]
    NonPositiveEnergy { value: f64 },

    /// The real-representation change of basis needs a positive wavenumber.
    #[error("wavenumber must be positive, got {value}")]
    NonPositiveWavenumber { value: f64 },

    /// Generic parameter validation failure; the message names the offender.
    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    /// Hyperbolic distance involving a boundary point is infinite.
    #[error("hyperbolic distance to a boundary point is infinite")]
    BoundaryPoint,

    /// An operation defined only for hyperbolic matrices received another class.
    #[error("operation requires a hyperbolic matrix, got a {found} one")]
    NotHyperbolic { found: &'static str },

    /// The composition denominator 1 + r1* r2 e^{2i arg t1} vanished: the
    /// composite reflects perfectly and has no amplitude description.
    #[error("composite is perfectly reflecting: composition denominator vanishes")]
    PerfectlyReflecting,

    /// A Moebius denominator shrank below the representable range.
    #[error("Moebius denominator nearly vanishes: numerical degeneracy")]
    DegenerateDenominator,

    /// The integration grid is too coarse to keep the propagator unimodular.
    #[error("integration grid too coarse: determinant residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    GridTooCoarse { residual: f64, tolerance: f64 },

    /// No closed-form N-cell expression exists for elliptic cells.
    #[error("no closed form for an elliptic cell: use iterate_disk or elliptic_zn")]
    EllipticClosedForm,
}

impl Error {
    /// True for errors caused by invalid input rather than numerical degeneracy.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::PerfectlyReflecting
                | Error::DegenerateDenominator
                | Error::GridTooCoarse { .. }
                | Error::BoundaryPoint
        )
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
