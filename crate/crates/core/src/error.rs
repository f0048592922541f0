use thiserror::Error;

/// Errors raised by the geometric and algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("the two points do not span a line")]
    DegenerateLine,
    #[error("line is contained in the plane")]
    Contained,
    #[error("not on surface: {0}")]
    NotOnSurface(String),
    #[error("point is singular")]
    SingularPoint,
    #[error("every sampled point of the line is singular")]
    AllSampledPointsSingular,
    #[error("degree error: {0}")]
    Degree(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("line is an exceptional line of the component")]
    ExceptionalLine,
    #[error("factor {0} could not be classified")]
    UnclassifiedFactor(usize),
    #[error("surface has a planar component (factor {0}); use the planar-components bound")]
    PlanarComponent(usize),
    #[error("line collapses under projection")]
    Collapse,
    #[error("no generic projection direction found after {0} resamples")]
    ResampleExhausted(usize),
    #[error("generation exhausted: {0}")]
    GenerationExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_arity(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Arity { expected, got })
    }
}
