use nalgebra::SMatrix;

use super::{check_domain, CoordPoint, ModelParams, R, S, T, W, X, Y, Z};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{mat_zeros, Mat, DIM};

pub type Matrix7 = SMatrix<f64, DIM, DIM>;

/// Column `a` holds the coordinate components of `X_{a+1}`.
pub type FrameMatrix = Matrix7;

/// Conformal factor `K = 1 + m (w^2 + x^2 + y^2 + z^2)`.
pub fn k_factor(q: &CoordPoint, p: &ModelParams) -> Result<f64> {
    check_domain(q, p)
}

pub(crate) fn k_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> N {
    let h2 = q[W] * q[W] + q[X] * q[X] + q[Y] * q[Y] + q[Z] * q[Z];
    N::one() + h2.scale(p.m)
}

/// Frame components `f[mu][a] = dx^mu(X_a)`.
pub(crate) fn frame_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Mat<N> {
    let k = k_generic(q, p);
    let hl = 0.5 * p.l;
    let (w, x, y, z) = (q[W].scale(hl), q[X].scale(hl), q[Y].scale(hl), q[Z].scale(hl));
    let mut f = mat_zeros::<N>();
    f[R][0] = N::one();
    f[S][1] = N::one();
    f[T][2] = N::one();

    // X4 = K d_w + (l/2)(x d_r + y d_s + z d_t)
    f[R][3] = x;
    f[S][3] = y;
    f[T][3] = z;
    f[W][3] = k;
    // X5 = K d_x - (l/2)(w d_r + z d_s - y d_t)
    f[R][4] = -w;
    f[S][4] = -z;
    f[T][4] = y;
    f[X][4] = k;
    // X6 = K d_y + (l/2)(z d_r - w d_s - x d_t)
    f[R][5] = z;
    f[S][5] = -w;
    f[T][5] = -x;
    f[Y][5] = k;
    // X7 = K d_z - (l/2)(y d_r - x d_s + w d_t)
    f[R][6] = -y;
    f[S][6] = x;
    f[T][6] = -w;
    f[Z][6] = k;
    f
}

/// Coframe components `omega[alpha][mu] = omega^alpha(d_mu)`, the closed-form
/// inverse of [`frame_generic`].
pub(crate) fn coframe_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Mat<N> {
    let k = k_generic(q, p);
    let inv_k = N::one() / k;
    let c = inv_k.scale(0.5 * p.l);
    let (w, x, y, z) = (q[W] * c, q[X] * c, q[Y] * c, q[Z] * c);
    let mut o = mat_zeros::<N>();
    // omega^1 = dr + l/(2K) (w dx - x dw + y dz - z dy)
    o[0][R] = N::one();
    o[0][W] = -x;
    o[0][X] = w;
    o[0][Y] = -z;
    o[0][Z] = y;
    // omega^2 = ds + l/(2K) (w dy - y dw + z dx - x dz)
    o[1][S] = N::one();
    o[1][W] = -y;
    o[1][X] = z;
    o[1][Y] = w;
    o[1][Z] = -x;
    // omega^3 = dt + l/(2K) (w dz - z dw + x dy - y dx)
    o[2][T] = N::one();
    o[2][W] = -z;
    o[2][X] = -y;
    o[2][Y] = x;
    o[2][Z] = w;
    o[3][W] = inv_k;
    o[4][X] = inv_k;
    o[5][Y] = inv_k;
    o[6][Z] = inv_k;
    o
}

/// Coordinate metric `G = Omega^T Omega`.
pub(crate) fn metric_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Mat<N> {
    let o = coframe_generic(q, p);
    let mut g = mat_zeros::<N>();
    for i in 0..DIM {
        for j in i..DIM {
            let mut acc = N::zero();
            for a in 0..DIM {
                acc += o[a][i] * o[a][j];
            }
            g[i][j] = acc;
            g[j][i] = acc;
        }
    }
    g
}

/// Inverse metric `G^{-1} = F F^T`.
pub(crate) fn inverse_metric_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Mat<N> {
    let f = frame_generic(q, p);
    let mut g = mat_zeros::<N>();
    for i in 0..DIM {
        for j in i..DIM {
            let mut acc = N::zero();
            for a in 0..DIM {
                acc += f[i][a] * f[j][a];
            }
            g[i][j] = acc;
            g[j][i] = acc;
        }
    }
    g
}

pub(crate) fn to_matrix(m: &Mat<f64>) -> Matrix7 {
    Matrix7::from_fn(|i, j| m[i][j])
}

pub fn frame_matrix(q: &CoordPoint, p: &ModelParams) -> Result<FrameMatrix> {
    check_domain(q, p)?;
    Ok(to_matrix(&frame_generic(&q.to_array(), p)))
}

/// Closed-form coframe; row `alpha` holds the components of `omega^{alpha+1}`.
pub fn coframe_matrix(q: &CoordPoint, p: &ModelParams) -> Result<Matrix7> {
    check_domain(q, p)?;
    Ok(to_matrix(&coframe_generic(&q.to_array(), p)))
}

/// Coordinate metric, computed as `Omega^T Omega` with `Omega` the numerical
/// inverse of the frame matrix.
pub fn metric_matrix(q: &CoordPoint, p: &ModelParams) -> Result<Matrix7> {
    let f = frame_matrix(q, p)?;
    let omega = f.try_inverse().ok_or(Error::SingularFrame)?;
    let g = omega.transpose() * omega;
    Ok((g + g.transpose()) * 0.5)
}

/// Metric at an already-validated point, as a plain array (finite-difference
/// oracle in tests).
#[cfg(test)]
pub(crate) fn metric_at(q: &CoordPoint, p: &ModelParams) -> Mat<f64> {
    metric_generic(&crate::scalar::lift::<f64, DIM>(&q.to_array()), p)
}
