use thiserror::Error;

/// Errors raised by the geometric kernels.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("degenerate center pair")]
    DegenerateCenterPair,
    #[error("non-finite integrand value at abscissa {0}")]
    NonFiniteSample(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("c-hull is the whole plane (out-radius {0} > 1)")]
    WholePlane(f64),
    #[error("no c-extremal representation for a full disk")]
    NoExtremalRepresentation,
    #[error("operation undefined for an empty body")]
    EmptyBody,
    #[error("degenerate symmetral")]
    DegenerateSymmetral,
    #[error("point outside the domain of patch {0}")]
    OutsidePatch(&'static str),
    #[error("curvature governed by a single sphere")]
    SingleSphereFiber,
    #[error("point is not on the boundary ({0})")]
    NotOnBoundary(&'static str),
    #[error("reflection leaves the raster window")]
    ReflectionLeavesWindow,
    #[error("no feasible parameter found")]
    NoFeasibleParameter,
    #[error("search did not converge: {0}")]
    SearchExhausted(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
