//! Numerical verification of weighted Sobolev embeddings and Gaffney
//! inequalities on complete Riemannian manifolds, built on ε-admissible
//! balls and the admissible radius R_ε.

pub mod admissible;
pub mod covering;
pub mod error;
pub mod exec;
pub mod fields;
pub mod geometry;
pub mod linalg;
pub mod manifold;
pub mod norms;
pub mod quadrature;
pub mod region;
pub mod sampling;
pub mod verify;

pub use admissible::{admissible_radius, is_admissible, AdmissibleBall, Grid, RadiusField, Sampler};
pub use error::{Error, Result};
pub use exec::Exec;
pub use manifold::{builtin, BuiltinKind, ChartedManifold, ManifoldSpec, Point};
