//! Images of multilinear graded *-polynomials on upper triangular matrix
//! algebras with involution.

pub mod catalog;
pub mod cli;
pub mod classify;
pub mod counterexample;
pub mod error;
pub mod generic;
pub mod image;
pub mod field;
pub mod linalg;
pub mod matrix;
pub mod report;
pub mod mpoly;
pub mod star_poly;
pub mod structure;

pub use error::{Error, Result};
pub use field::{FieldKind, FieldSpec, Scalar};
pub use matrix::TriMatrix;
pub use mpoly::{MPoly, Monomial, Var};
pub use structure::{GradeSpec, InvolutionKind, StructureSpec, Symmetry};
