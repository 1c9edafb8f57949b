//! Integral affine geometry: integer normal forms, cones, Hilbert bases and
//! polygons.

pub mod cone;
pub mod matrix;
pub mod polygon;

pub use cone::{combinations, DualCone, HilbertBasis, IntegralCone};
pub use matrix::{hermite_normal_form, left_kernel, smith_normal_form, IntMatrix, SmithForm};
pub use polygon::{is_complete_complex, ExplodedPolygon, PolygonConstraint, Stratum};
