//! Cocyclic generalized Hadamard matrices over elementary abelian groups,
//! the generalized Hadamard full propelinear (GHFP) codes they induce, and
//! the relative difference sets in the associated central extensions.
//!
//! Coefficients always live in the additive group of a finite field, so the
//! multiplicative notation `u v`, `u^{-1}` of cocycle identities becomes
//! `u + v`, `-u` throughout.

pub mod cocycle;
pub mod code;
pub mod error;
pub mod extension;
pub mod field;
pub mod gh_matrix;
pub mod group;
pub mod io;
pub mod linalg;
pub mod monomial;
pub mod perm;
pub mod planar;
pub mod propelinear;

pub use cocycle::Cocycle;
pub use code::{Code, GhCode};
pub use error::{Error, Result};
pub use extension::ExtensionGroup;
pub use field::{Fe, Field, FieldElement};
pub use gh_matrix::GhMatrix;
pub use group::{FiniteGroup, Group, GroupStructure};
pub use perm::Perm;
pub use propelinear::PropelinearCode;
