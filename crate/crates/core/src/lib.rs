pub mod error;
pub mod geometry;
pub mod gieseking;
pub mod holonomy;
pub mod klein;
pub mod solver;
pub mod triangulation;

pub use error::{Error, Result};
pub mod cli;
