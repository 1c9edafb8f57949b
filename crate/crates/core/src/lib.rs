//! Computational kernel for exploded manifolds: the exploded semiring,
//! integral affine cones and polygons, coordinate models, tropical curves,
//! refinements, regularity estimates and exploded annuli.

pub mod annuli;
pub mod coordmodel;
pub mod error;
pub mod lattice;
pub mod polyhedron;
pub mod rational;
pub mod grid;
pub mod refinement;
pub mod regularity;
pub mod semiring;
pub mod tropcurve;

pub use error::{Error, Result};
