//! Non-crossing geometric perfect matchings on exact rational coordinates.

pub mod algorithms;
pub mod error;
pub mod geom;
pub mod io;
pub mod matching_engine;
pub mod orientation;
pub mod oracle;
pub mod registry;
pub mod subdivision;

pub use error::{Error, Result};
