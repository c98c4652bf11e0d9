pub mod algebra;
pub mod catalog;
pub mod enumerate;
pub mod error;
pub mod forms;
pub mod matlin;
pub mod polyring;
pub mod resonance;
pub mod scalars;

pub use error::{Error, Result};
