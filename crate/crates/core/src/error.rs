use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is numerically singular (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("eigenvalue iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix exponential argument too large: |tA| = {norm:.3e} exceeds bound {bound:.3e}")]
    Overflow { norm: f64, bound: f64 },
    #[error("no grid cell straddles the level {0}")]
    EmptyLevelSet(f64),
    #[error("no trusted grid nodes available")]
    NoTrustedNodes,
    #[error("no crossing of level {0} along the sampled line")]
    NoCrossing(f64),
    #[error("insufficient data for the fit: {0}")]
    InsufficientData(String),
    #[error("argument outside the admissible domain: {0}")]
    DomainError(String),
    #[error("contour around eigenvalue {index} (radius {radius}) encloses another eigenvalue")]
    EnclosureViolation { index: usize, radius: f64 },
    #[error("contour quadrature did not converge at {0} nodes")]
    QuadratureNotConverged(usize),
    #[error("numerical rank of the complementary projection is ambiguous at tolerance {0:.1e}")]
    RankDetectionFailure(f64),
    #[error("restricted block is singular at the requested point")]
    BlockSingular,
    #[error("time stepping lost stability: norm grew by {0:.3e} in one step")]
    StabilityLoss(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
