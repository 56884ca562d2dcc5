//! Exact and numerical laboratory for the coupled Painleve VI system with
//! affine Weyl group symmetry of type E6(1).

pub mod backlund;
pub mod dual;
pub mod error;
pub mod flow;
pub mod fp;
pub mod hamiltonian;
pub mod io;
pub mod lie;
pub mod scalar;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
