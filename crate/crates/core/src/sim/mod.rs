//! Finite-difference integration of the spin model and numeric monitors.

pub mod convergence;
pub mod field;
pub mod integrate;
pub mod monitor;

pub use convergence::{convergence_study, ls_slope, ConvergenceReport, Series, FLOOR};
pub use field::{constraint_value, init_field, project, InitKind, PlaneWave, SpinField, DOMAIN};
pub use integrate::{dt_bound, integrate, rhs, step, RunStats};
pub use monitor::{
    constraint_monitor, matrix_monitors, measure_residuals, pde_monitors, GridJets, Monitor, MonitorStats, ResidualReport,
};
