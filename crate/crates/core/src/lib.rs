pub mod cli;
pub mod closure;
pub mod error;
pub mod exactmath;
pub mod gallery;
pub mod involutions;
pub mod pairs;
pub mod quadforms;
pub mod verify;

pub use error::{Error, Result};
