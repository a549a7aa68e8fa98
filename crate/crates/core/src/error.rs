use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid convex body: {0}")]
    InvalidBody(String),
    #[error("invalid affine subspace: {0}")]
    InvalidSubspace(String),
    #[error("degenerate facet: {0}")]
    DegenerateFacet(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    #[error("level-set cap is empty: no sample of the level set lies in the ball")]
    EmptyCap,
    #[error("quadrature resolution {0} is below 2 nodes per unit length")]
    ResolutionTooLow(f64),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("|xi| = {0} is too close to the origin for the asymptotic expansion")]
    TooCloseToOrigin(f64),
    #[error("test-family Gram matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditionedTestGram(f64),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("separation delta = {0} outside (0, 2]")]
    DeltaOutOfRange(f64),
    #[error("no admissible direction for class {class} after {trials} trials")]
    DirectionSearchFailed { class: usize, trials: usize },
    #[error("separation stalled for class {class} at lattice point {lattice:?}")]
    SeparationStall { class: usize, lattice: Vec<i64> },
    #[error("phase set degenerate for class {class}: best smallest singular value {best:.3e}")]
    PhaseDegenerate { class: usize, best: f64 },
    #[error("local-mass quadrature unstable: {coarse:.6e} vs {fine:.6e} under node doubling")]
    QuadratureUnstable { coarse: f64, fine: f64 },
    #[error("spherical grid too coarse: identity projector deviates by {0:.3e}")]
    GridTooCoarse(f64),
    #[error("projector not idempotent: eigenvalue {0} in the forbidden band")]
    NotIdempotent(f64),
    #[error("invalid isometry group: {0}")]
    InvalidGroup(String),
    #[error("invalid configuration: {}", .0.join("; "))]
    ConfigInvalid(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for this error: 2 for violated construction
    /// hypotheses, 3 for numerical-stability failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisViolation(_)
            | Error::DirectionSearchFailed { .. }
            | Error::PhaseDegenerate { .. } => 2,
            Error::IllConditionedTestGram(_)
            | Error::SeparationStall { .. }
            | Error::QuadratureUnstable { .. }
            | Error::GridTooCoarse(_)
            | Error::NotIdempotent(_)
            | Error::EmptyCap => 3,
            _ => 1,
        }
    }

    /// Numerical errors are recorded per row in a sweep instead of aborting it.
    pub fn is_numerical(&self) -> bool {
        self.exit_code() == 3
    }
}

/// Non-fatal diagnostics carried alongside results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Quadrature node spacing exceeds the Nyquist rule for the requested frequency.
    AliasRisk { spacing: f64, max_frequency: f64 },
    /// The test band is not comfortably inside the reach of the spectrum.
    BandExceedsSpectrum { band: f64, reach: f64 },
}
