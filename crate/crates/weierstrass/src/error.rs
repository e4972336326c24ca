use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input contains a NaN or infinite component")]
    NonFinite,
    #[error("iteration cap reached before the stopping threshold was met")]
    NoConvergence,
    #[error("curve is degenerate for this operation")]
    DegenerateCurve,
    #[error("invariants are mutually inconsistent")]
    InconsistentInvariants,
    #[error("argument is too close to a lattice point")]
    PoleProximity,
    #[error("point does not satisfy the curve equation")]
    OffCurve,
    #[error("argument is too close to a logarithmic singularity")]
    LogSingularity,
    #[error("parameter is outside its admissible range")]
    OutOfRange,
}

pub type Result<T> = std::result::Result<T, Error>;
