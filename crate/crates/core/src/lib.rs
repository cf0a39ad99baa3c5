//! Geometry of curve systems on finite-type surfaces: decomposition
//! enumeration, exact metrics on the low-complexity building blocks,
//! product regions with coning, and coarse distance estimates.

pub mod error;
pub mod formula;
pub mod graphcore;
pub mod kernels;
pub mod regions;
pub mod topology;

pub use error::{Error, ErrorKind, Result};
