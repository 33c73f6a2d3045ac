//! Christoffel symbols, Riemann, Ricci and scalar curvature.
//!
//! The production path works in coordinates: Christoffel symbols from exact
//! first derivatives of `G`, curvature from exact derivatives of the
//! Christoffel symbols, then conversion to the orthonormal frame. A second,
//! independent route differentiates the frame connection coefficients
//! ([`riemann_frame_cartan`]).
//!
//! Sign convention: `R[a][b][c][d] = <R(X_c, X_d) X_b, X_a>`, so that
//! `R[a][b][a][b]` is the sectional curvature of the plane `X_a ^ X_b`, and
//! `Ric[a][b] = sum_c R[c][a][c][b]`.

use super::connection::{levi_civita_generic, structure_constants_generic};
use super::frame::{frame_generic, inverse_metric_generic, metric_generic, Matrix7};
use super::{check_domain, CoordPoint, ModelParams};
use crate::error::Result;
use crate::scalar::{jet, Scalar};
use crate::tensor::{Tensor3, Tensor4, DIM};

pub type Curvature4 = Tensor4<f64>;

/// `gamma[k][i][j] = Gamma^k_{ij}`.
pub(crate) fn christoffel_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor3<N> {
    let (_, dg) = jet(q, |qd| {
        metric_generic(qd, p).iter().flat_map(|row| row.iter().copied()).collect()
    });
    // dg[i*DIM + j][l] = d_l G_ij
    let d = |l: usize, i: usize, j: usize| dg[i * DIM + j][l];
    let ginv = inverse_metric_generic(q, p);

    let mut lowered = Tensor3::zeros();
    for l in 0..DIM {
        for i in 0..DIM {
            for j in i..DIM {
                let v = (d(i, l, j) + d(j, l, i) - d(l, i, j)).scale(0.5);
                lowered[[l, i, j]] = v;
                lowered[[l, j, i]] = v;
            }
        }
    }
    Tensor3::from_fn(|k, i, j| {
        let mut acc = N::zero();
        for l in 0..DIM {
            acc += ginv[k][l] * lowered[[l, i, j]];
        }
        acc
    })
}

/// Fully lowered coordinate curvature `R_{rho sigma mu nu} = <R(d_mu, d_nu) d_sigma, d_rho>`.
pub(crate) fn riemann_coord_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor4<N> {
    let (values, partials) = jet(q, |qd| christoffel_generic(qd, p).as_slice().to_vec());
    let gamma = |k: usize, i: usize, j: usize| values[(k * DIM + i) * DIM + j];
    let dgamma = |m: usize, k: usize, i: usize, j: usize| partials[(k * DIM + i) * DIM + j][m];

    // R^rho_{sigma mu nu} = d_mu G^rho_{nu sigma} - d_nu G^rho_{mu sigma}
    //                       + G^rho_{mu lam} G^lam_{nu sigma} - G^rho_{nu lam} G^lam_{mu sigma}
    let mut up = Tensor4::zeros();
    for rho in 0..DIM {
        for sigma in 0..DIM {
            for mu in 0..DIM {
                for nu in (mu + 1)..DIM {
                    let mut acc = dgamma(mu, rho, nu, sigma) - dgamma(nu, rho, mu, sigma);
                    for lam in 0..DIM {
                        acc += gamma(rho, mu, lam) * gamma(lam, nu, sigma)
                            - gamma(rho, nu, lam) * gamma(lam, mu, sigma);
                    }
                    up[[rho, sigma, mu, nu]] = acc;
                    up[[rho, sigma, nu, mu]] = -acc;
                }
            }
        }
    }

    let g = metric_generic(q, p);
    let mut low = Tensor4::zeros();
    for rho in 0..DIM {
        for sigma in 0..DIM {
            for mu in 0..DIM {
                for nu in 0..DIM {
                    let mut acc = N::zero();
                    for lam in 0..DIM {
                        acc += g[rho][lam] * up[[lam, sigma, mu, nu]];
                    }
                    low[[rho, sigma, mu, nu]] = acc;
                }
            }
        }
    }
    low
}

pub(crate) fn riemann_frame_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor4<N> {
    riemann_coord_generic(q, p).change_basis(&frame_generic(q, p))
}

/// Curvature from the frame connection coefficients:
/// `<R(X_a,X_b)X_c, X_d> = X_a(g_bcd) - X_b(g_acd) + g_bce g_aed - g_ace g_bed - c_abe g_ecd`.
pub(crate) fn riemann_frame_cartan_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor4<N> {
    let (values, partials) = jet(q, |qd| levi_civita_generic(qd, p).as_slice().to_vec());
    let gamma = |a: usize, b: usize, c: usize| values[(a * DIM + b) * DIM + c];
    let f = frame_generic(q, p);
    // frame derivative X_a(gamma_bcd)
    let xd = |a: usize, b: usize, c: usize, d: usize| {
        let row = &partials[(b * DIM + c) * DIM + d];
        let mut acc = N::zero();
        for nu in 0..DIM {
            acc += f[nu][a] * row[nu];
        }
        acc
    };
    let cst = structure_constants_generic(q, p);

    let mut out = Tensor4::zeros();
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                for d in 0..DIM {
                    let mut acc = xd(a, b, c, d) - xd(b, a, c, d);
                    for e in 0..DIM {
                        acc += gamma(b, c, e) * gamma(a, e, d) - gamma(a, c, e) * gamma(b, e, d)
                            - cst[[a, b, e]] * gamma(e, c, d);
                    }
                    // R[d][c][a][b] = <R(X_a, X_b) X_c, X_d>
                    out[[d, c, a, b]] = acc;
                }
            }
        }
    }
    out
}

pub(crate) fn ricci_from<N: Scalar>(riem: &Tensor4<N>) -> [[N; DIM]; DIM] {
    let mut ric = [[N::zero(); DIM]; DIM];
    for (a, row) in ric.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let mut acc = N::zero();
            for c in 0..DIM {
                acc += riem[[c, a, c, b]];
            }
            *slot = acc;
        }
    }
    ric
}

/// `Gamma^k_{ij}` at `q`, indexed `[[k, i, j]]`.
pub fn christoffel_table(q: &CoordPoint, p: &ModelParams) -> Result<Tensor3<f64>> {
    check_domain(q, p)?;
    Ok(christoffel_generic(&q.to_array(), p))
}

pub fn riemann_frame(q: &CoordPoint, p: &ModelParams) -> Result<Curvature4> {
    check_domain(q, p)?;
    Ok(riemann_frame_generic(&q.to_array(), p))
}

/// Frame curvature by differentiating the connection coefficients; agrees
/// with [`riemann_frame`] up to rounding.
pub fn riemann_frame_cartan(q: &CoordPoint, p: &ModelParams) -> Result<Curvature4> {
    check_domain(q, p)?;
    Ok(riemann_frame_cartan_generic(&q.to_array(), p))
}

pub fn ricci_frame(q: &CoordPoint, p: &ModelParams) -> Result<Matrix7> {
    let riem = riemann_frame(q, p)?;
    let ric = ricci_from(&riem);
    Ok(Matrix7::from_fn(|a, b| ric[a][b]))
}

pub fn scalar_curvature(q: &CoordPoint, p: &ModelParams) -> Result<f64> {
    Ok(ricci_frame(q, p)?.trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::frame::metric_at;

    fn pt(c: [f64; 7]) -> CoordPoint {
        CoordPoint::from_array(c)
    }

    #[test]
    fn m0_sectional_curvatures() {
        let p = ModelParams::new(0.0, 2.0);
        let r = riemann_frame(&pt([0.1, 0.2, -0.3, 0.4, 0.1, -0.2, 0.3]), &p).unwrap();
        assert!((r.component(1, 4, 1, 4) - 1.0).abs() < 1e-12);
        assert!((r.component(6, 7, 6, 7) + 3.0).abs() < 1e-12);
    }

    #[test]
    fn r1414_at_y1() {
        let r = riemann_frame(&pt([0., 0., 0., 0., 0., 1., 0.]), &ModelParams::new(1.0, 1.0)).unwrap();
        assert!((r.component(1, 4, 1, 4) - 1.0).abs() < 1e-12, "{}", r.component(1, 4, 1, 4));
    }

    #[test]
    fn flat_when_both_parameters_vanish() {
        let r = riemann_frame(&pt([0.3, 0.1, 0.2, -0.4, 0.2, 0.1, 0.4]), &ModelParams::new(0.0, 0.0)).unwrap();
        assert_eq!(crate::tensor::max_abs(r.as_slice().iter().copied()), 0.0);
    }

    #[test]
    fn ricci_m0_diagonal() {
        let l: f64 = 2.0;
        let ric = ricci_frame(&pt([0.1, -0.2, 0.3, 0.2, 0.1, -0.4, 0.2]), &ModelParams::new(0.0, l)).unwrap();
        let diag = [l * l, l * l, l * l, -1.5 * l * l, -1.5 * l * l, -1.5 * l * l, -1.5 * l * l];
        let expected = Matrix7::from_diagonal(&nalgebra::SVector::<f64, 7>::from(diag));
        assert!((ric - expected).abs().max() < 1e-12);
    }

    #[test]
    fn scalar_curvature_examples() {
        let q = pt([0.1, 0.2, 0.1, -0.2, 0.3, 0.1, 0.1]);
        assert_eq!(scalar_curvature(&q, &ModelParams::new(0.0, 0.0)).unwrap(), 0.0);
        assert!((scalar_curvature(&q, &ModelParams::new(0.0, 1.0)).unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn christoffel_matches_central_differences() {
        let q = pt([0.2, -0.1, 0.3, 0.25, -0.35, 0.15, 0.3]);
        let p = ModelParams::new(0.9, 1.7);
        let gam = christoffel_table(&q, &p).unwrap();
        let h = 1e-5;
        let mut dg = vec![[[0.0; DIM]; DIM]; DIM];
        for (l, slot) in dg.iter_mut().enumerate() {
            let mut plus = q.to_array();
            let mut minus = q.to_array();
            plus[l] += h;
            minus[l] -= h;
            let (gp, gm) = (metric_at(&pt(plus), &p), metric_at(&pt(minus), &p));
            for i in 0..DIM {
                for j in 0..DIM {
                    slot[i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
                }
            }
        }
        let ginv = crate::manifold::metric_matrix(&q, &p).unwrap().try_inverse().unwrap();
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    let mut fd = 0.0;
                    for l in 0..DIM {
                        fd += 0.5 * ginv[(k, l)] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                    }
                    assert!((fd - gam[[k, i, j]]).abs() < crate::TOL_FD, "{k}{i}{j}");
                }
            }
        }
    }

    #[test]
    fn coordinate_and_cartan_routes_agree() {
        let q = pt([0.2, -0.1, 0.3, 0.25, -0.35, 0.15, 0.3]);
        let p = ModelParams::new(-0.6, 1.4);
        let a = riemann_frame(&q, &p).unwrap();
        let b = riemann_frame_cartan(&q, &p).unwrap();
        let diff = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "{diff}");
    }
}
