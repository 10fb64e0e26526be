//! Minimization of decomposable submodular functions `F = Σ_i F_i` through
//! the dual proximal problem
//!
//! ```text
//! min ‖Σ_i y_i‖²   subject to   y_i ∈ B(F_i)
//! ```
//!
//! solved by random block coordinate descent ([`solvers::rcdm_run`]), its
//! accelerated epoch-restarted variant ([`solvers::acdm_run`]) and
//! alternating projections ([`solvers::ap_run`]). A minimizer of `F` is read
//! off from `x = −Σ_i y_i` by thresholding.

pub mod blocks;
pub mod error;
pub mod instances;
pub mod segmentation;
pub mod solvers;
pub mod submodular;
pub mod verify;

pub use error::{Error, Result};
