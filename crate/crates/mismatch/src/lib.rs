//! Analysis of the dominant eigenvector of noisy density matrices: the
//! coherent mismatch, its closed-form and commutator-norm bounds, extremal
//! states that saturate them, virtual-distillation noise floors, and noisy
//! circuit ensembles.

pub mod arrowhead;
pub mod bounds;
pub mod circuits;
pub mod cli;
pub mod distillation;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod states;

pub use error::{MismatchError, Result};
