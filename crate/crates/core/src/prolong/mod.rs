//! The prolongation pipeline: ansatz, determining equations, solved
//! towers and extraction of the open algebra.

pub mod ansatz;
pub mod constr;
pub mod determining;
pub mod solution;
pub mod tower;

pub use ansatz::{build_ansatz, Ansatz};
pub use constr::{check_constr_relation, BbarInterpretation, ConstrReport};
pub use determining::{derive_determining_equations, BracketConvention, DeterminingEquation, Derivation, Family, LiftedEquation};
pub use solution::{extract_open_algebra, reduction_algebra, ReductionAlgebra, verify_solution_form, CheckEntry, EmittedRelation, SolutionReport, PAIR_NAMES};
pub use tower::{build_reduction, constant, field_bracket, gen, lx, LieExpr, Reduction, Tower};
