//! Command-line surface: relation DSL, configuration and reports.

pub mod app;
pub mod config;
pub mod dsl;
pub mod pipelines;
pub mod report;

pub use report::{Entry, Format, Report, Section, Status};
pub use dsl::{algebra_to_dsl, build_algebra, load_algebra, parse_algebra_dsl, parse_scalar, print_statements, AlgebraSpec, Atom, LinComb, Statement};
pub use config::{Overrides, Settings};
pub use app::{run, Outcome};
