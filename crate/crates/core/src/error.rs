use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element is not hyperbolic (|trace| = {trace})")]
    NonHyperbolic { trace: f64 },
    #[error("pole at {pole} lies in the closed disk centered at {center} with radius {radius}")]
    PoleInDisk { pole: f64, center: f64, radius: f64 },
    #[error("closed disks overlap: {0}")]
    DisksOverlap(String),
    #[error("geodesic length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("disk indices must be exactly ±1..±r: {0}")]
    BadIndexSet(String),
    #[error("invalid disk: {0}")]
    InvalidDisk(String),
    #[error("transition into block {target} from generator {generator} is forbidden")]
    ForbiddenTransition { generator: i32, target: i32 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("zero vector has no eigen residual")]
    ZeroVector,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("Euler characteristic must be nonpositive, got {0}")]
    PositiveChi(i64),
    #[error("function vanishes on the contour near {0}")]
    BoundaryZero(num_complex::Complex64),
    #[error("measured order {order} is below the topological order {topological}")]
    InconsistentOrder { order: u32, topological: u32 },
    #[error("spectral parameter {0} is not of the form -n + 2πik/L")]
    BadSpectralParameter(num_complex::Complex64),
    #[error("repelling fixed point {0} lies outside the target disk")]
    FixedPointOutsideDisk(f64),
    #[error("sample {0} coincides with a fixed point")]
    SampleAtFixedPoint(num_complex::Complex64),
    #[error("invalid Schottky data: {0}")]
    InvalidData(String),
    #[error("invalid search box: {0}")]
    InvalidBox(String),
}

pub type Result<T> = std::result::Result<T, Error>;
