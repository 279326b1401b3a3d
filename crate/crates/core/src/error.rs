use thiserror::Error;

/// Errors raised by the design pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("several inequivalent mirror involutions map the input to the output")]
    SymmetryDetectionAmbiguous,
    #[error("eigenvalue {0} has multiplicity above one inside the supported subspace")]
    DegenerateSupport(String),
    #[error("matrix dimension {0} is too small")]
    DimensionTooSmall(usize),
    #[error("evaluation point {0} is a pole")]
    PoleAt(String),
    #[error("polynomial has {0} non-real roots")]
    ComplexRoots(usize),
    #[error("roots coincide near {0}")]
    CoincidentRoots(String),
    #[error("subspaces share eigenvalues {0:?}")]
    SharedEigenvalues(Vec<String>),
    #[error("no grid point of the required parity inside the band around {0}")]
    NoParityRepresentative(String),
    #[error("epsilon {0} is too large for the rounding to preserve ordering")]
    EpsilonTooLarge(String),
    #[error("interpolation system is singular")]
    SingularSystem,
    #[error("solved coupling square {0} is not positive")]
    NegativeJSquared(String),
    #[error("target {0} is a pole of the central response")]
    PoleTarget(String),
    #[error("targets do not have the parity structure required by the half-size solve: {0}")]
    ParityMismatch(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("spectral weight {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: String },
    #[error("Lanczos breakdown at step {0}")]
    BreakdownAtStep(usize),
    #[error("no encoding vector orthogonal to the uncontrolled eigenvectors")]
    EmptyNullSpace,
    #[error("eigen solver did not converge")]
    NoConvergence,
    #[error("shrink floor reached without a valid design")]
    ShrinkFloorReached,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
