//! Open Lie algebras: partial bracket tables, Jacobi closure, closing
//! quotients and matrix representations.

pub mod algebra;
pub mod element;
pub mod iso;
pub mod jacobi;
pub mod rep;

pub use algebra::{apply_closing_map, relation_string, substitute, Generator, OpenAlgebra, Provenance};
pub use element::{LieElement, LieTerm};
pub use iso::find_relabeling_isomorphism;
pub use jacobi::{jacobi_closure, jacobi_relation, ClosureReport, PassReport};
pub use rep::{verify_homomorphism, HomomorphismReport, MatrixRep, ResidualEntry};
