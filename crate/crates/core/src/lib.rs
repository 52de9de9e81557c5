//! Numerical geometry of `G^C / K^C` for `G = SO0(n,1)` and `SU(n,1)`.
//!
//! Modules are layered: [`lie_core`] (matrix algebra), [`models`] (the two
//! explicit models), [`orbits`] (invariants and classification), [`levi`]
//! (two Levi-form engines), [`stein`] (table verification), [`covering`]
//! and the [`cli`] front end.

pub mod error;
pub mod linalg;
pub mod lie_core;
pub mod models;
pub mod orbits;
pub mod levi;
pub mod stein;
pub mod covering;
pub mod cli;
pub mod rng;

pub use error::{Error, Result};
pub use lie_core::{Family, GroupSpec};
