//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PanelError {
    #[error("quadrature order {0} outside supported range 1..=64")]
    OrderOutOfRange(usize),
    #[error("degenerate parameter interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
    #[error("panel endpoints coincide")]
    CoincidentEndpoints,
    #[error("singularity location lies on the standard interval [-1,1]")]
    SingularityOnInterval,
    #[error("target point lies on the source curve")]
    TargetOnCurve,
    #[error("point is numerically on the panel/chord boundary; winding number undefined")]
    WindingUndefined,
    #[error("recursion depth cap {0} exceeded")]
    DepthExceeded(u32),
    #[error("polynomial has degree zero after trimming")]
    DegenerateRoots,
    #[error("repeated interpolation nodes")]
    RepeatedNodes,
    #[error("eigenvalue iteration failed to converge")]
    EigenNoConvergence,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, PanelError>;
