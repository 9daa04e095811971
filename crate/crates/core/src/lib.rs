pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod local;
pub mod flop;
pub mod resolution;
pub mod geometry;
pub mod cli;
