//! Exact volumes of compact manifolds (spheres, projective spaces, classical
//! and exceptional groups, generalized flag manifolds) together with the
//! numerical machinery to check them: coordinate charts with invariant
//! densities, Gauss-Legendre and Monte Carlo integration, and Haar sampling.

pub mod charts;
pub mod cli;
pub mod closed_forms;
pub mod exact;
pub mod haar;
pub mod integrate;
pub mod linalg;
pub mod states;
pub mod stats;
pub mod verify;

pub use closed_forms::{ClosedFormError, Family, Field, ManifoldId};
pub use exact::{ExactError, ExactVolume};
