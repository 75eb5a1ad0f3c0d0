//! Exact-arithmetic deformation theory of morphisms of (dg) associative
//! algebras: the L∞-algebra of simultaneous deformations, Maurer–Cartan
//! solving over `Q[t]/(t^{N+1})`, gauge equivalence, and the cohomology of
//! the cone complex.

pub mod coeff;
pub mod cohomology;
pub mod conventions;
pub mod deformation;
pub mod exact_linalg;
pub mod graded_signs;
pub mod hochschild;
pub mod linfty;
pub mod multimap;
pub mod sampling;
pub mod suite;
