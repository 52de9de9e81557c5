use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("shape or spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("ad of the base element has non-real or non-integral spectrum: {0}")]
    NonSplitBase(String),
    #[error("orbit label {0} does not occur in this diagram")]
    LabelNotInDiagram(String),
    #[error("parameter {param} outside the domain of {what}")]
    ParamOutOfDomain { what: String, param: f64 },
    #[error("point lies on the incidence divisor <z,w> = 0")]
    IncidenceDivisor,
    #[error("point could not be classified (residual {residual:e}, nearest {nearest})")]
    Unclassifiable { residual: f64, nearest: String },
    #[error("domain {0} is not defined for this family")]
    DomainNotInFamily(String),
    #[error("orbit through the point is not a real hypersurface (tangent rank {rank}, expected {expected})")]
    NotHypersurface { rank: usize, expected: usize },
    #[error("defining function has vanishing differential at the point")]
    DegenerateGradient,
    #[error("nilpotent site not available: {0}")]
    SiteUnsupported(String),
    #[error("coordinates outside the source domain of the map")]
    OutOfDomain,
    #[error("target is not in the image of the covering")]
    TargetNotInImage,
    #[error("section undefined on the diagonal u = v")]
    DiagonalDegenerate,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
