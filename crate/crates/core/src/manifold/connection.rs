//! Frame brackets and the Levi-Civita connection.
//!
//! Brackets are obtained by differentiating the frame coefficient functions
//! exactly, `[X_a, X_b]^mu = X_a^nu d_nu X_b^mu - X_b^nu d_nu X_a^mu`, and
//! pulled back to the frame with the closed-form coframe. The connection then
//! follows from the Koszul formula for an orthonormal frame.

use super::frame::{coframe_generic, frame_generic};
use super::{check_domain, label, CoordPoint, FrameVector, ModelParams};
use crate::error::Result;
use crate::scalar::{jet, Scalar};
use crate::tensor::{Tensor3, DIM};

/// Structure functions `c[a][b][c] = omega^c([X_a, X_b])`.
pub(crate) fn structure_constants_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor3<N> {
    let (values, partials) = jet(q, |qd| {
        frame_generic(qd, p).iter().flat_map(|row| row.iter().copied()).collect()
    });
    let f = |mu: usize, a: usize| values[mu * DIM + a];
    let df = |mu: usize, a: usize, nu: usize| partials[mu * DIM + a][nu];
    let omega = coframe_generic(q, p);

    let mut c = Tensor3::zeros();
    for a in 0..DIM {
        for b in (a + 1)..DIM {
            let mut coord = [N::zero(); DIM];
            for (mu, slot) in coord.iter_mut().enumerate() {
                let mut acc = N::zero();
                for nu in 0..DIM {
                    acc += f(nu, a) * df(mu, b, nu) - f(nu, b) * df(mu, a, nu);
                }
                *slot = acc;
            }
            for k in 0..DIM {
                let mut acc = N::zero();
                for mu in 0..DIM {
                    acc += omega[k][mu] * coord[mu];
                }
                c[[a, b, k]] = acc;
                c[[b, a, k]] = -acc;
            }
        }
    }
    c
}

/// Connection coefficients `gamma[a][b][c] = <nabla_{X_a} X_b, X_c>` from
/// precomputed structure functions.
pub(crate) fn koszul<N: Scalar>(c: &Tensor3<N>) -> Tensor3<N> {
    Tensor3::from_fn(|a, b, k| (c[[a, b, k]] - c[[b, k, a]] + c[[k, a, b]]).scale(0.5))
}

pub(crate) fn levi_civita_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor3<N> {
    koszul(&structure_constants_generic(q, p))
}

/// All brackets at `q`: `table[[a, b, c]]` is the `X_{c+1}` coefficient of
/// `[X_{a+1}, X_{b+1}]`.
pub fn structure_constants_table(q: &CoordPoint, p: &ModelParams) -> Result<Tensor3<f64>> {
    check_domain(q, p)?;
    Ok(structure_constants_generic(&q.to_array(), p))
}

/// All Levi-Civita coefficients at `q`: `table[[a, b, c]] = <nabla_a X_b, X_c>`.
pub fn connection_table(q: &CoordPoint, p: &ModelParams) -> Result<Tensor3<f64>> {
    check_domain(q, p)?;
    Ok(levi_civita_generic(&q.to_array(), p))
}

/// `[X_a, X_b]` in frame coefficients; `a`, `b` are 1-based frame labels.
pub fn bracket_frame(a: usize, b: usize, q: &CoordPoint, p: &ModelParams) -> Result<FrameVector> {
    let (a, b) = (label(a)?, label(b)?);
    let table = structure_constants_table(q, p)?;
    Ok(FrameVector(std::array::from_fn(|k| table[[a, b, k]])))
}

/// `nabla_{X_a} X_b` in frame coefficients; 1-based labels.
pub fn levi_civita_frame(a: usize, b: usize, q: &CoordPoint, p: &ModelParams) -> Result<FrameVector> {
    let (a, b) = (label(a)?, label(b)?);
    let table = connection_table(q, p)?;
    Ok(FrameVector(std::array::from_fn(|k| table[[a, b, k]])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: [f64; 7]) -> CoordPoint {
        CoordPoint::from_array(c)
    }

    #[test]
    fn m0_bracket_45() {
        let q = pt([0.2, -0.1, 0.3, 0.4, -0.3, 0.2, 0.1]);
        let v = bracket_frame(4, 5, &q, &ModelParams::new(0.0, 3.0)).unwrap();
        let mut expected = [0.0; 7];
        expected[0] = -3.0;
        assert!((v - FrameVector(expected)).max_abs() < 1e-14);
    }

    #[test]
    fn vertical_brackets_vanish() {
        let q = pt([0.2, -0.1, 0.3, 0.4, -0.3, 0.2, 0.1]);
        let p = ModelParams::new(0.7, -1.3);
        for i in 1..=3 {
            for b in 1..=7 {
                assert_eq!(bracket_frame(i, b, &q, &p).unwrap().max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn bracket_45_at_x1_for_unit_params() {
        let v = bracket_frame(4, 5, &pt([0., 0., 0., 0., 1., 0., 0.]), &ModelParams::new(1.0, 1.0)).unwrap();
        assert!((v - FrameVector([-1., 0., 0., -2., 0., 0., 0.])).max_abs() < 1e-14, "{v:?}");
    }

    #[test]
    fn connection_examples() {
        let q = pt([0.1, 0.2, 0.3, 0.4, -0.2, 0.1, 0.25]);
        let p = ModelParams::new(0.6, 1.2);
        assert_eq!(levi_civita_frame(1, 2, &q, &p).unwrap().max_abs(), 0.0);

        let v = levi_civita_frame(1, 4, &q, &ModelParams::new(0.0, 2.0)).unwrap();
        assert!((v - FrameVector::basis(5)).max_abs() < 1e-14);

        let v = levi_civita_frame(4, 4, &pt([0., 0., 0., 0., 1., 0., 0.]), &ModelParams::new(1.0, 1.0)).unwrap();
        assert!((v - FrameVector([0., 0., 0., 0., 2., 0., 0.])).max_abs() < 1e-14, "{v:?}");
    }

    #[test]
    fn bad_label_is_rejected() {
        assert!(bracket_frame(0, 3, &CoordPoint::ORIGIN, &ModelParams::HEISENBERG).is_err());
        assert!(levi_civita_frame(1, 8, &CoordPoint::ORIGIN, &ModelParams::HEISENBERG).is_err());
    }
}
