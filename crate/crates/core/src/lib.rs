pub mod acceptance;
pub mod cli;
pub mod error;
pub mod expr;
pub mod family;
pub mod generator;
pub mod oracle;
pub mod poly;
pub mod schrodinger;
pub mod specfun;

pub use error::{Error, Result};
pub use family::{Cutoff, FamilySpec, Interval, SigmaCase};
