pub mod cli;
pub mod distgeom;
pub mod embed;
pub mod error;
pub mod estimators;
pub mod fixtures;
pub mod hilbert;
pub mod inference;
pub mod io;
mod numeric;
pub mod partial;
pub mod rng;
pub mod select;
pub mod simbench;

pub use error::{Error, Result};
