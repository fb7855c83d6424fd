//! Exact computations with finitely presented Lie algebras.
//!
//! The crate goes from a presentation (generators and relations) to a
//! finite-dimensional structure-constant table, and then certifies the table:
//! Jacobi identity, Killing form, root decomposition and Cartan type. The
//! shipped presentation is 𝔤₂ on three generators subject to quadruple
//! relations.

pub mod analysis;
pub mod document;
pub mod free_lie;
pub mod linalg;
pub mod presentation;
pub mod table;
