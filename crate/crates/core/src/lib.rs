//! Structure-preserving global Krylov solvers for quaternion matrix
//! equations `A X = B` and `A X + X B = C`.

pub mod baseline;
pub mod cli;
pub mod error;
pub mod problems;
pub mod qblock;
pub mod qcore;
pub mod qsolve;

pub use error::{Error, Result};
