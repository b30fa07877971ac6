pub mod adjoint;
pub mod catoperad;
pub mod dalgebra;
pub mod dmulticat;
pub mod error;
pub mod fincat;
pub mod finset;
pub mod opmonad;
pub mod report;

pub use error::{Error, Result};
