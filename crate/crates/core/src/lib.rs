pub mod abelian;
pub mod chain;
pub mod error;
pub mod forms;
pub mod graded;
pub mod ltables;
pub mod poincare;

pub use error::{Error, Result};
