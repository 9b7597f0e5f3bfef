//! Prolongation analysis workbench for the (2+1)-dimensional isotropic
//! Heisenberg spin model `(ΓS)_t = S × (S_xx + S_yy)`.

pub mod cli;
pub mod error;
pub mod exterior;
pub mod liealg;
pub mod prolong;
pub mod scalar;
pub mod sim;
pub mod spectral;

pub use error::{Error, Result};
