//! End-to-end experiments, report formats and the command-line interface.

pub mod cli;
pub mod curvature;
pub mod embedding;
pub mod gaffney;
pub mod kato;
pub mod report;
pub mod scaling;
pub mod suites;

pub use curvature::run_curvature;
pub use embedding::{check_ball_embedding, depth_series, run_embedding_experiment, DepthSeries};
pub use gaffney::{feasible_pair, run_gaffney_global, run_gaffney_local};
pub use kato::check_kato;
pub use report::{CoverReport, ExperimentReport, Row, Summary};
pub use scaling::check_euclidean_scaling;
