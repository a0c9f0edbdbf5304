//! F2 Khovanov homology, filtered spectral sequences and explicit model
//! complexes over polynomial rings in F2.

pub mod algebra;
pub mod cli;
pub mod complex;
pub mod error;
pub mod infer;
pub mod khovanov;
pub mod models;
pub mod spectral;

pub use error::{Error, Result};
