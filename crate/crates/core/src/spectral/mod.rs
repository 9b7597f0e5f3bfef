//! Matrix realizations of the closed algebra and the resulting linear
//! spectral problems.

pub mod matrix;
pub mod connection;
pub mod constraint;
pub mod rep;

pub use matrix::{mat_commutator, mat_product, mul_left, mul_right, Entry, ExprMatrix, MatExpr, Matrix2};
pub use rep::{alternative_closing_map, closing_map, instantiate_tower, pauli_rep, two_i_lambda, MatrixTower};
pub use constraint::{total_derivative, transport, verify_fundamental_constraint};
pub use connection::{compatibility, connection_residuals, export_spectral_problem, solve_connection, ConnectionComponents, ConnectionOutcome, SectionSign};
