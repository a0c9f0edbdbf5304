//! Khovanov complexes of link diagrams over F2.

mod cube;
mod diagram;

pub use cube::{actions_agree_on_homology, basepoint_action, ckh, generator_id, Convention, Cube, Flavor, Resolution};
pub use diagram::{LinkDiagram, MAX_CROSSINGS};
