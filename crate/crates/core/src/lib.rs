//! Bailey pairs, their zeta deformation, and the two-step limit that turns
//! binomially weighted L-series partial sums into `L(s, chi) / sqrt(pi)`.

pub mod bailey;
pub mod cli;
pub mod error;
pub mod limits;
pub mod qcore;
pub mod weights;

pub use error::{Error, Result};
