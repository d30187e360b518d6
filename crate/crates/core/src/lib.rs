//! Exact engine for formal symplectic groupoids with separation of variables,
//! their infinitesimal deformations, and the logarithm of the formal Berezin
//! transform.

pub mod algebra;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod groupoid;
pub mod kset;
pub mod report;
pub mod samples;
pub mod serial;
pub mod starprod;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
