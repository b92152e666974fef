pub mod bounds;
pub mod cli;
pub mod codec;
pub mod construct;
pub mod error;
pub mod field;
pub mod io;
pub mod matrix;
pub mod sim;
pub mod spread;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use matrix::{Matrix, Vector};
