//! Exact arithmetic: Gaussian-rational Laurent polynomials in λ and
//! multivariate polynomials over jet symbols.

pub mod exact;
pub mod field;
pub mod jet;
pub mod model;

pub use exact::{ExactScalar, Gauss};
pub use field::{Coefficient, FieldExpr, Monomial, RingCoefficient, ScalarExpr};
pub use jet::{Coord, FnArg, Jet, JetSymbol, ParamMatrix, Unknown, UnknownFn};
pub use model::{ConstraintReducer, Gamma2, ModelParams};
