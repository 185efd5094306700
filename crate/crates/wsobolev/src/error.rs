use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown manifold kind `{0}`")]
    UnknownKind(String),
    #[error("invalid manifold spec: {0}")]
    InvalidSpec(String),
    #[error("window touches a singular locus: {0}")]
    SingularWindow(String),
    #[error("point {0:?} lies outside the chart domain")]
    OutsideDomain(Vec<f64>),
    #[error("point {0:?} is too close to the domain boundary for the finite-difference stencil")]
    NearBoundary(Vec<f64>),
    #[error("metric is not positive definite at {0:?}")]
    NotPositiveDefinite(Vec<f64>),
    #[error("degenerate point {0:?}: no admissible radius above 1e-6")]
    DegeneratePoint(Vec<f64>),
    #[error("degenerate plane: tangent vectors are parallel")]
    DegeneratePlane,
    #[error("invalid form degree: {0}")]
    InvalidDegree(String),
    #[error("grid too coarse: probe {0:?} is not covered")]
    GridTooCoarse(Vec<f64>),
    #[error("ball is not admissible: {0}")]
    NotAdmissible(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("radius field has no value at {0:?}")]
    MissingRadius(Vec<f64>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
