//! Partial identification, point estimation and sensitivity analysis for
//! treatment effects when outcome censoring mixes an informative and a
//! non-informative component.
//!
//! The pipeline runs from a [`Dataset`] through cross-fitted nuisances
//! ([`nuisance`]) to per-unit influence rows ([`influence`]), whose empirical
//! means give one-step estimates of every bound ([`estimators`]). The
//! [`oracle`] module evaluates the same targets exactly on known populations.

pub mod data;
pub mod error;
pub mod estimators;
pub mod influence;
pub mod nuisance;
pub mod oracle;
pub mod sensitivity;
pub mod simulation;
pub mod stats;

pub use data::{load_dataset, save_dataset, split_folds, Dataset, FoldAssignment, Observation};
pub use error::{Error, Result};
pub use estimators::{
    aggregate_seeds, BoundEstimate, Coefs, EstimateKind, Family, SeedAggregate, SensitivityParams,
};
pub use influence::{influence_matrix, Col, InfluenceMatrix, InfluenceRow, SmoothingSpec};
pub use nuisance::{
    cross_fit_nuisances, perturb_nuisance, LearnerKind, LearnerSpec, NuisanceValues,
    PerNuisance, PerturbationSpec,
};
pub use oracle::{DiscretePopulation, QuadratureSpec};
pub use sensitivity::TippingResult;
pub use simulation::{DgpParams, Population, StudyConfig, StudyMode, StudyReport};

/// Crate version, embedded in every serialized report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Name of the random generator behind every seeded stream.
pub const GENERATOR: &str = "ChaCha8Rng";
