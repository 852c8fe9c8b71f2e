//! Exact Betti-number bookkeeping for intersection spaces of complex
//! projective hypersurfaces with isolated singularities.

pub mod chain;
pub mod error;
pub mod local;
pub mod matrix;
pub mod monodromy;
pub mod poly;
pub mod rational;
pub mod reproduce;
pub mod schema;
pub mod stability;
pub mod topology;

pub use error::{Error, Result};
