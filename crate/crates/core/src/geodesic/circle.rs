//! Recognising horizontal projections that are circles or lines.
//!
//! A normal geodesic of the quaternionic Heisenberg group satisfies
//! `omega'' = -Lambda omega'` for a constant imaginary `Lambda`. We estimate
//! `Lambda` by least squares from central differences and test the fit.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::quaternion::Quaternion;
use super::Trajectory;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 8;
/// Relative tolerance for the fit residual and for speed constancy.
pub const CIRCLE_REL_TOL: f64 = 1e-4;
/// `|Lambda| * span` below this counts as a line.
pub const LINE_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CircleVerdict {
    Circle { center: Quaternion, radius: f64, lambda: [f64; 3] },
    Line,
    Neither { residual: f64, speed_spread: f64 },
}

impl std::fmt::Display for CircleVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CircleVerdict::Circle { radius, .. } => write!(f, "circle, radius {radius:.6}"),
            CircleVerdict::Line => write!(f, "line"),
            CircleVerdict::Neither { residual, speed_spread } => {
                write!(f, "neither (residual {residual:.3e}, speed spread {speed_spread:.3e})")
            }
        }
    }
}

/// Circle test on the `(w, x, y, z)` projection of a trajectory.
pub fn circle_check(traj: &Trajectory) -> Result<CircleVerdict> {
    circle_check_samples(traj.step, &traj.horizontal())
}

/// Circle test on points `omega_k` sampled at uniform spacing `h`.
pub fn circle_check_samples(h: f64, omega: &[Quaternion]) -> Result<CircleVerdict> {
    if omega.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: omega.len(), need: MIN_SAMPLES });
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("sample spacing {h}")));
    }
    let inner = 1..omega.len() - 1;
    let vel: Vec<Quaternion> = inner.clone().map(|k| (omega[k + 1] - omega[k - 1]).scale(0.5 / h)).collect();
    let acc: Vec<Quaternion> =
        inner.clone().map(|k| (omega[k + 1] - omega[k].scale(2.0) + omega[k - 1]).scale(1.0 / (h * h))).collect();

    // acc = -Lambda vel is linear in (l1, l2, l3).
    let units = [Quaternion::imaginary(1., 0., 0.), Quaternion::imaginary(0., 1., 0.), Quaternion::imaginary(0., 0., 1.)];
    let rows = 4 * vel.len();
    let mut a = DMatrix::<f64>::zeros(rows, 3);
    let mut b = DVector::<f64>::zeros(rows);
    for (k, (v, ac)) in vel.iter().zip(&acc).enumerate() {
        for (j, e) in units.iter().enumerate() {
            let col = (-*e * *v).to_array();
            for i in 0..4 {
                a[(4 * k + i, j)] = col[i];
            }
        }
        for (i, x) in ac.to_array().iter().enumerate() {
            b[4 * k + i] = *x;
        }
    }
    let lam = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    let lambda = Quaternion::imaginary(lam[0], lam[1], lam[2]);

    let speeds: Vec<f64> = vel.iter().map(|v| v.norm()).collect();
    let mean_speed = speeds.iter().sum::<f64>() / speeds.len() as f64;
    let speed_spread = if mean_speed > 0.0 {
        speeds.iter().fold(0.0f64, |m, s| m.max((s - mean_speed).abs())) / mean_speed
    } else {
        0.0
    };

    let span = h * (omega.len() - 1) as f64;
    if lambda.norm() * span < LINE_TOL {
        return Ok(if speed_spread < CIRCLE_REL_TOL {
            CircleVerdict::Line
        } else {
            CircleVerdict::Neither { residual: 0.0, speed_spread }
        });
    }

    let res_norm: f64 = vel.iter().zip(&acc).map(|(v, ac)| (*ac + lambda * *v).norm2()).sum::<f64>().sqrt();
    let acc_norm: f64 = acc.iter().map(|ac| ac.norm2()).sum::<f64>().sqrt();
    let residual = res_norm / acc_norm.max(f64::MIN_POSITIVE);
    if residual >= CIRCLE_REL_TOL || speed_spread >= CIRCLE_REL_TOL {
        return Ok(CircleVerdict::Neither { residual, speed_spread });
    }

    let inv = lambda.inverse().expect("nonzero Lambda");
    let mut center = Quaternion::ZERO;
    for (k, v) in inner.zip(&vel) {
        center = center + omega[k] + inv * *v;
    }
    let center = center.scale(1.0 / vel.len() as f64);
    Ok(CircleVerdict::Circle { center, radius: mean_speed / lambda.norm(), lambda: [lam[0], lam[1], lam[2]] })
}
