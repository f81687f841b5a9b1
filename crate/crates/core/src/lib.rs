pub mod error;
pub mod matrix;
pub mod numfield;
pub mod cocycle;
pub mod qalg;
pub mod symrep;
pub mod forms;
pub mod g2;
pub mod bend;
pub mod redux;
pub mod json;

pub use error::{Error, Result};
pub use matrix::{BMatrix, FMatrix, Matrix, Scalar};
