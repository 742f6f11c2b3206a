//! Homology of finite branched covers of closed oriented surfaces.
//!
//! A cover is given by a permutation representation of the surface group.
//! From it the crate builds the covering surface, an integral basis of its
//! first homology with the intersection form, homology classes of lifted
//! loops and the action of lifted Dehn twists, and runs exact checks on
//! spans of lifted simple closed curves.

pub mod cli;
pub mod covering;
pub mod curves;
pub mod error;
pub mod nilcert;
pub mod report;
pub mod spancheck;
pub mod surface;
pub mod symplin;
pub mod twist;

pub use error::{Error, Result};
