use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state has no terms")]
    EmptyState,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("mixed photon numbers in one state: {0} and {1}")]
    MixedPhotonNumber(u32, u32),
    #[error("photon number mismatch: expected {expected}, got {got}")]
    PhotonNumberMismatch { expected: u32, got: u32 },
    #[error("transfer map is not an isometry (max |U^dag U - I| = {deviation:.3e})")]
    NotIsometric { deviation: f64 },
    #[error("transfer map dimensions do not match: {0}")]
    Shape(String),
    #[error("mode label collision: {0}")]
    LabelCollision(String),
    #[error("overlap {0} outside [0, 1]")]
    OverlapOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("circuit needs at least 2 parties, got {0}")]
    TooFewParties(usize),
    #[error("mode {0} carries amplitude but is not wired to a detector")]
    UnwiredMode(String),
    #[error("coincidence classes overlap on pattern {0}")]
    OverlappingClasses(String),
    #[error("no conclusive outcomes; error rate undefined")]
    NoConclusiveEvents,
    #[error("input is not a Bell state the scheme can resolve")]
    NotResolvableBellState,
    #[error("tomography data is not informationally complete; missing settings: {0}")]
    IncompleteTomography(String),
    #[error("parse error: {0}")]
    Parse(String),
}
