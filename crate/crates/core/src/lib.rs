pub mod cli;
pub mod decimal;
pub mod error;
pub mod generators;
pub mod ledger;
pub mod quantities;
pub mod rational;
pub mod search;
pub mod record;
pub mod set;
pub mod setfile;
pub mod setops;

pub use error::{Error, Result};
pub use rational::Rational;
pub use set::{cartesian, diagonal, CountMap, PlanarSet, RSet};
