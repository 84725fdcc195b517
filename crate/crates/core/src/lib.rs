pub mod algebra;
pub mod chain;
pub mod error;
pub mod experiments;
pub mod hash;
pub mod kzg;
pub mod luck;
pub mod pod;
pub mod poe;
pub mod sim;

pub use error::{Error, Result};
