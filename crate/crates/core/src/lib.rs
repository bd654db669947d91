pub mod cli;
pub mod error;
pub mod estimates;
pub mod flow;
pub mod geometry;
pub mod inradius;
pub mod scenarios;

pub use error::{Error, Result};
