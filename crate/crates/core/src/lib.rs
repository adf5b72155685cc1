pub mod certify;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod raster;
pub mod regions;
pub mod spectra;

pub use error::{Error, Result};
