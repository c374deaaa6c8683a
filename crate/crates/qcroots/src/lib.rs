pub mod arith;
pub mod compare;
pub mod correspondence;
pub mod density;
pub mod error;
pub mod qfield;
pub mod stats;

pub use error::{Error, Result};
