use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("conic is not an ellipse (classified as {0})")]
    NotAnEllipse(String),
    #[error("conic degenerates to a point or the empty set")]
    Degenerate,
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("point is not on the conic (residual {0:e})")]
    NotOnConic(f64),
    #[error("conic gradient vanishes at the point")]
    SingularPoint,
    #[error("input is a pole of the map")]
    PoleInput,
    #[error("value is not unimodular (|λ| - 1 = {0:e})")]
    NotUnimodular(f64),
    #[error("root quality check failed: {0}")]
    RootQualityFailure(String),
    #[error("zero is not an admissible input")]
    ZeroInput,
    #[error("point lies inside the ellipse")]
    InsideEllipse,
    #[error("point lies inside the parabola")]
    InsideParabola,
    #[error("point is not on the boundary conic (residual {0:e})")]
    NotOnBoundary(f64),
    #[error("quadratic in r² has complex roots")]
    ComplexRoots,
    #[error("points are antipodal; tangent lines are parallel")]
    AntipodalPoints,
    #[error("modulus k = {0} out of range")]
    ModulusOutOfRange(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("input is a branch point of the integrand")]
    BranchPointInput,
    #[error("input outside the map domain: {0}")]
    DomainViolation(String),
    #[error("inner conic matrix is singular")]
    SingularInner,
    #[error("no tangent from the vertex to the inner conic")]
    NoTangent,
    #[error("least-squares system is rank deficient")]
    RankDeficient,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
