pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod exact;
pub mod io;
pub mod lie;
pub mod reconstruction;

pub use error::{Error, Result};
