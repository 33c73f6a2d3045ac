//! Geometry of the extended Bianchi-Cartan-Vranceanu (EBCV) spaces.
//!
//! The EBCV metrics form a two-parameter family `(m, l)` on domains of R^7
//! generalising the three-dimensional BCV spaces; `(m, l) = (0, 1)` is the
//! quaternionic Heisenberg group. This crate evaluates frames, brackets, the
//! Levi-Civita connection and curvature by exact forward-mode
//! differentiation, builds the characteristic connection of the
//! vertical/horizontal splitting and its torsion, checks Killing fields, and
//! integrates normal sub-Riemannian geodesics.

pub mod error;
pub mod geodesic;
pub mod homogeneous;
pub mod killing;
pub mod manifold;
pub mod reference;
pub mod sampling;
pub mod scalar;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use manifold::{CoordPoint, FrameVector, ModelParams};

/// Agreement expected from two exact evaluation paths.
pub const TOL_EXACT: f64 = 1e-12;
/// Agreement expected once derivative layers are stacked.
pub const TOL_DERIV: f64 = 1e-8;
/// Agreement between exact derivatives and central finite differences.
pub const TOL_FD: f64 = 1e-6;
