//! Sparse spectral methods on spherical caps.
//!
//! Functions on the cap `{x² + y² + z² = 1, α < z < 1}` are expanded in the
//! orthogonal basis `Q^{(a)}_{n,k,i} = R^{(a,2k)}_{n−k}(z) ρ(z)^k Y_{k,i}(θ)`.
//! Differential, conversion and multiplication operators act on coefficient
//! vectors as banded-block-banded matrices, and rotationally invariant
//! operators decouple into one banded system per Fourier mode.

pub mod basis;
pub mod circular;
pub mod error;
pub mod operators;
pub mod semiclassical;
pub mod solvers;
pub mod structured;
pub mod transforms;

pub use basis::{BasisSpec, CapPoint, CoefficientVector, Ordering};
pub use error::{Error, Result};
pub use structured::BandedBlockBanded;
