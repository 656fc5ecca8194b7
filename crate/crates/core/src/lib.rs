pub mod error;
pub mod io;
pub mod experiment;
pub mod field;
pub mod kernel;
pub mod moments;
pub mod potential;
pub mod sampler;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
