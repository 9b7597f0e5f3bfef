//! Exterior calculus over jet coordinates: wedge, exterior derivative, the
//! model's exterior differential system, sectioning, and reduction modulo
//! the ideal.

pub mod eds;
pub mod form;
pub mod reduce;

pub use eds::{build_eds, evolution_rhs, sectioned_scalar, verify_eds_closed, ClosureEntry, EdsIdeal, NamedForm, PdeSystem};
pub use form::{canonical_word, DiffForm, OneForm, ScalarForm, MAX_DEGREE};
pub use reduce::{is_reduced, reduce_mod_ideal, Stage, XiSubstitution};
