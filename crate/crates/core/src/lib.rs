//! Exact computations with the seventeen planar crystallographic groups
//! (flat 2-orbifold groups): construction in the affine model, holonomy
//! classification, second cohomology and extensions, finite presentations
//! with coset enumeration, recognition, fibrations, coverings, and Seifert
//! base tables.

pub mod affine;
pub mod catalog;
pub mod cohomology;
pub mod covering;
pub mod error;
pub mod fibration;
pub mod holonomy;
pub mod linalg;
pub mod mat2;
pub mod presentation;
pub mod recognition;
pub mod seifert;
pub mod verify;

pub use error::{Error, Result};
