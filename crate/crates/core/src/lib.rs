//! Exact computations with (a,b)-modules: free modules of finite rank over
//! formal power series in `b`, carrying an operator `a` with `ab - ba = b^2`.
//!
//! Everything is exact over the Gaussian rationals and truncated at a
//! declared b-adic precision.

pub mod error;
pub mod format;
pub mod forms;
pub mod hom;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod saito;
pub mod scalar;
pub mod script;
pub mod series;
pub mod structure;

pub use error::{Error, Result};
pub use hom::{are_isomorphic, solve_hom, ABMorphism, HomBasis, IsoVerdict};
pub use matrix::BMatrix;
pub use module::{ABModule, Element};
pub use scalar::Scalar;
pub use series::{BLaurent, BSeries};
pub use structure::{krull_schmidt, DecompositionReport};
