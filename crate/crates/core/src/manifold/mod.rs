//! The EBCV family of metrics on domains of R^7: orthonormal frame and
//! coframe, metric, frame brackets, Levi-Civita connection and curvature.
//!
//! Coordinates are always ordered `(r, s, t, w, x, y, z)` so that frame
//! vector `X_a` agrees with the `a`-th coordinate direction at the origin.
//! `X_1, X_2, X_3` span the vertical distribution and `X_4..X_7` the
//! horizontal one.

pub mod bcv;
pub mod connection;
pub mod curvature;
pub mod frame;

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::DIM;

pub use bcv::{bcv_classify, bcv_frame, BcvCase, BcvClass, Case2Predicate};
pub use connection::{
    bracket_frame, connection_table, levi_civita_frame, structure_constants_table,
};
pub use curvature::{
    christoffel_table, ricci_frame, riemann_frame, riemann_frame_cartan, scalar_curvature, Curvature4,
};
pub use frame::{coframe_matrix, frame_matrix, k_factor, metric_matrix, FrameMatrix, Matrix7};

/// Coordinate slots, in storage order.
pub const R: usize = 0;
pub const S: usize = 1;
pub const T: usize = 2;
pub const W: usize = 3;
pub const X: usize = 4;
pub const Y: usize = 5;
pub const Z: usize = 6;

pub const COORD_NAMES: [&str; DIM] = ["r", "s", "t", "w", "x", "y", "z"];

/// Vertical frame labels (0-based).
pub const VERTICAL: std::ops::Range<usize> = 0..3;
/// Horizontal frame labels (0-based).
pub const HORIZONTAL: std::ops::Range<usize> = 3..7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoordPoint {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CoordPoint {
    pub const ORIGIN: CoordPoint =
        CoordPoint { r: 0.0, s: 0.0, t: 0.0, w: 0.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn from_array(c: [f64; DIM]) -> Self {
        CoordPoint { r: c[0], s: c[1], t: c[2], w: c[3], x: c[4], y: c[5], z: c[6] }
    }

    pub fn to_array(&self) -> [f64; DIM] {
        [self.r, self.s, self.t, self.w, self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Squared norm of the horizontal coordinates `w^2 + x^2 + y^2 + z^2`.
    pub fn horizontal_norm2(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }
}

/// Parameters `(m, l)` of the metric family: `m` is the conformal parameter
/// and `l` the twist.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub m: f64,
    pub l: f64,
}

impl ModelParams {
    pub fn new(m: f64, l: f64) -> Self {
        ModelParams { m, l }
    }

    /// The quaternionic Heisenberg group.
    pub const HEISENBERG: ModelParams = ModelParams { m: 0.0, l: 1.0 };
}

/// Tangent vector in the orthonormal frame `X_1..X_7`. Indexing is 0-based;
/// [`FrameVector::coeff`] takes the 1-based frame label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameVector(pub [f64; DIM]);

impl FrameVector {
    pub fn zero() -> Self {
        FrameVector([0.0; DIM])
    }

    pub fn basis(label: usize) -> Self {
        let mut c = [0.0; DIM];
        c[label - 1] = 1.0;
        FrameVector(c)
    }

    pub fn coeff(&self, label: usize) -> f64 {
        self.0[label - 1]
    }

    /// Euclidean norm of the coefficients, which is the metric norm since the
    /// frame is orthonormal.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &FrameVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        crate::tensor::max_abs(self.0)
    }
}

impl Index<usize> for FrameVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for FrameVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl std::ops::Add for FrameVector {
    type Output = FrameVector;
    fn add(self, rhs: FrameVector) -> FrameVector {
        FrameVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl std::ops::Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, rhs: FrameVector) -> FrameVector {
        FrameVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

/// Convert a 1-based frame label to a storage index.
pub fn label(a: usize) -> Result<usize> {
    if (1..=DIM).contains(&a) {
        Ok(a - 1)
    } else {
        Err(Error::InvalidIndex(a))
    }
}

/// Validate that `q` lies in the chart `K > 0` and return `K`.
pub fn check_domain(q: &CoordPoint, p: &ModelParams) -> Result<f64> {
    let k = 1.0 + p.m * q.horizontal_norm2();
    if !q.is_finite() || !k.is_finite() || k <= 0.0 {
        return Err(Error::DomainViolation { k });
    }
    Ok(k)
}
