use thiserror::Error;

/// Errors produced by the mstratio library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate basis: |det(u, v)| = {0:e} is below the tolerance")]
    DegenerateBasis(f64),

    #[error("topology mismatch: {0}")]
    TopologyMismatch(String),

    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the hexagonal metric requires the unit hexagonal basis")]
    NotHexagonal,

    #[error("the point cloud is empty")]
    EmptyCloud,

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("degenerate sublattice: |det| = {0} must be at least 2")]
    DegenerateSublattice(i64),

    #[error("torus period {period} is not compatible with the sublattice")]
    IncompatiblePeriod { period: u32 },

    #[error("region too small: {0}")]
    RegionTooSmall(String),

    #[error("cloud has {points} points, above the exhaustive limit of {max}")]
    TooLarge { points: usize, max: usize },

    #[error("ratio cache does not belong to the current coloring")]
    StaleCache,

    #[error("torus period {period} must exceed 4k = {}", 4 * k)]
    PeriodTooSmall { period: u32, k: u32 },

    #[error("the subset B is empty")]
    EmptySet,

    #[error("the diagram subset is empty")]
    EmptySubset,

    #[error("color class {0} is empty")]
    EmptyClass(u32),

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("coloring mismatch: {0}")]
    ColoringMismatch(String),

    #[error("unknown construction: {0}")]
    UnknownConstruction(String),

    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
