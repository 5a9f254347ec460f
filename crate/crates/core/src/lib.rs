//! Exact motivic Donaldson–Thomas invariants of quivers via wall-crossing of
//! quantum dilogarithms.

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod kronecker;
pub mod motivic;
pub mod quiver;
pub mod skewseries;
pub mod wallcross;

pub use error::{Error, Result};
