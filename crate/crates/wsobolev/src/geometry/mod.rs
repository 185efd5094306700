//! Levi-Civita connection, curvature, covariant derivatives and exterior
//! calculus on a single chart.

pub mod christoffel;
pub mod cmt;
pub mod curvature;
pub mod forms;
pub mod tensor;

pub use christoffel::{christoffel, christoffel_at, Christoffel};
pub use cmt::{cmt_check, CmtReport};
pub use curvature::{ricci_trace_residual, normalized_ricci_eigenvalues, ricci, riemann_at, sectional, Riemann};
pub use forms::{
    codifferential, exterior_derivative, hodge_star, wedge, Codifferential, FormField, FormSection, FormValue,
    HodgeFlavor,
};
pub use tensor::{covariant_derivative, covariant_jets, TensorValue};
