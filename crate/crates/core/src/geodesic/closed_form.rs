//! Closed-form normal geodesics of the quaternionic Heisenberg group.
//!
//! With `omega = w + i x + j y + k z`, `P = P_W + i P_X + j P_Y + k P_Z` and
//! the constant `Lambda = i p_r + j p_s + k p_t`, the flow gives
//! `P' = -Lambda P`, hence
//!
//! ```text
//! omega(u) = omega(0) + Lambda^{-1} (1 - exp(-Lambda u)) P(0)
//! ```
//!
//! The vertical coordinates follow from `(r', s', t') = Im(omega conj(omega')) / 2`
//! and are integrated numerically.

use serde::{Deserialize, Serialize};

use super::quaternion::Quaternion;
use super::{momenta, CotangentState};
use crate::error::{Error, Result};
use crate::manifold::{CoordPoint, ModelParams};

/// Below this `|Lambda|` the geodesic is a straight horizontal line.
pub const DEGENERATE_LAMBDA: f64 = 1e-12;
/// Minimum Simpson panel count for the vertical quadrature.
pub const MIN_PANELS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormInput {
    pub omega0: Quaternion,
    /// Horizontal momenta `P(0)`.
    pub p0: Quaternion,
    /// `(p_r, p_s, p_t)`, conserved along the flow.
    pub lambda: [f64; 3],
    /// `(r, s, t)` at `u = 0`.
    pub vertical0: [f64; 3],
}

impl ClosedFormInput {
    /// Initial data of the flow through a Heisenberg cotangent state.
    pub fn from_state(s: &CotangentState) -> Self {
        let pm = momenta(s, &ModelParams::HEISENBERG);
        ClosedFormInput {
            omega0: Quaternion::new(s.q.w, s.q.x, s.q.y, s.q.z),
            p0: Quaternion::new(pm[3], pm[4], pm[5], pm[6]),
            lambda: [s.p[0], s.p[1], s.p[2]],
            vertical0: [s.q.r, s.q.s, s.q.t],
        }
    }

    pub fn lambda_quaternion(&self) -> Quaternion {
        Quaternion::imaginary(self.lambda[0], self.lambda[1], self.lambda[2])
    }

    fn validate(&self) -> Result<()> {
        let (o, p) = (self.omega0.to_array(), self.p0.to_array());
        if o.iter().chain(&p).chain(&self.lambda).chain(&self.vertical0).all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("non-finite closed-form input".into()))
        }
    }

    /// `omega(u)` and `omega'(u)`.
    pub fn horizontal_with_velocity(&self, u: f64) -> (Quaternion, Quaternion) {
        let lam = self.lambda_quaternion();
        match lam.inverse().filter(|_| lam.norm() >= DEGENERATE_LAMBDA) {
            None => (self.omega0 + self.p0.scale(u), self.p0),
            Some(inv) => {
                let e = (-lam.scale(u)).exp_imaginary();
                let omega = self.omega0 + inv * ((Quaternion::ONE - e) * self.p0);
                (omega, e * self.p0)
            }
        }
    }

    /// `(r', s', t')` at `u`.
    pub fn vertical_rate(&self, u: f64) -> [f64; 3] {
        let (omega, v) = self.horizontal_with_velocity(u);
        let q = omega * v.conj();
        [0.5 * q.x, 0.5 * q.y, 0.5 * q.z]
    }

    /// Composite Simpson for `int_a^b (r', s', t') du` with `panels` (even) panels.
    fn vertical_increment(&self, a: f64, b: f64, panels: usize) -> [f64; 3] {
        let n = panels + panels % 2;
        let h = (b - a) / n as f64;
        let mut acc = [0.0; 3];
        for k in 0..=n {
            let weight = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let f = self.vertical_rate(a + k as f64 * h);
            for i in 0..3 {
                acc[i] += weight * f[i];
            }
        }
        acc.map(|v| v * h / 3.0)
    }

    fn point(&self, omega: Quaternion, vertical: [f64; 3]) -> CoordPoint {
        CoordPoint::from_array([vertical[0], vertical[1], vertical[2], omega.w, omega.x, omega.y, omega.z])
    }

    /// The geodesic sampled at `u_k = k h`, `k = 0..=n`. Each interval gets
    /// enough Simpson panels that the whole range uses at least [`MIN_PANELS`].
    pub fn samples(&self, h: f64, n: usize) -> Result<Vec<(f64, CoordPoint)>> {
        self.validate()?;
        let per_step = MIN_PANELS.div_ceil(n.max(1)).max(2);
        let mut vertical = self.vertical0;
        let mut out = Vec::with_capacity(n + 1);
        out.push((0.0, self.point(self.omega0, vertical)));
        for k in 1..=n {
            let (a, b) = ((k - 1) as f64 * h, k as f64 * h);
            let inc = self.vertical_increment(a, b, per_step);
            for i in 0..3 {
                vertical[i] += inc[i];
            }
            out.push((b, self.point(self.horizontal_with_velocity(b).0, vertical)));
        }
        Ok(out)
    }
}

/// The horizontal projection `omega(u)`.
pub fn closed_form_horizontal(input: &ClosedFormInput, u: f64) -> Quaternion {
    input.horizontal_with_velocity(u).0
}

/// The full point at parameter `u`.
pub fn closed_form_geodesic(input: &ClosedFormInput, u: f64) -> Result<CoordPoint> {
    input.validate()?;
    if !u.is_finite() {
        return Err(Error::InvalidArgument(format!("parameter u = {u}")));
    }
    let inc = input.vertical_increment(0.0, u, MIN_PANELS);
    let v = input.vertical0;
    Ok(input.point(closed_form_horizontal(input, u), [v[0] + inc[0], v[1] + inc[1], v[2] + inc[2]]))
}
