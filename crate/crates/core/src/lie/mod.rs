//! Affine E6 in its loop realization, the (1,1,0,1,0,1,0) gradation and the
//! Heisenberg subalgebra generated from `Λ1`.

pub mod algebra;
pub mod heisenberg;
pub mod linalg;
pub mod roots;

pub use algebra::{AffineE6, Basis, LieElement, DEFAULT_TRUNCATION};
pub use heisenberg::{check_heisenberg, Gradation, GradationTheta};
pub use roots::{Root, RootSystem};
