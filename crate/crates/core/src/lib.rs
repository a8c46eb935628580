pub mod cli;
pub mod descent;
pub mod envelope;
pub mod error;
pub mod hull_lp;
pub mod model;
pub mod oracles;
pub mod testfns;

pub use error::{Error, Result};
