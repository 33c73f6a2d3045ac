//! The characteristic connection `D` of the vertical/horizontal splitting,
//! its torsion, Tricerri-Vanhecke membership tests and Ambrose-Singer
//! residuals.
//!
//! `D_A B = nabla_A B + (P/2)(nabla_A P) B` with `P = V - H`; on the frame this
//! is the vertical part of `nabla_A X_b` for vertical `b` and the horizontal
//! part for horizontal `b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::connection::{levi_civita_generic, structure_constants_generic};
use crate::manifold::curvature::{christoffel_generic, riemann_frame_generic};
use crate::manifold::frame::{coframe_generic, frame_generic};
use crate::manifold::{check_domain, label, CoordPoint, FrameVector, ModelParams};
use crate::scalar::{jet, Dual, Scalar};
use crate::tensor::{Tensor3, Tensor4, DIM};

/// The almost product structure `P = V - H`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SplitProjector;

impl SplitProjector {
    /// `+1` on vertical labels (0-based 0..3), `-1` on horizontal ones.
    pub fn sign(index: usize) -> f64 {
        if index < 3 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_vertical(index: usize) -> bool {
        index < 3
    }

    pub fn apply(v: &FrameVector) -> FrameVector {
        FrameVector(std::array::from_fn(|i| Self::sign(i) * v[i]))
    }

    pub fn vertical(v: &FrameVector) -> FrameVector {
        FrameVector(std::array::from_fn(|i| if i < 3 { v[i] } else { 0.0 }))
    }

    pub fn horizontal(v: &FrameVector) -> FrameVector {
        FrameVector(std::array::from_fn(|i| if i < 3 { 0.0 } else { v[i] }))
    }
}

fn same_block(b: usize, c: usize) -> bool {
    SplitProjector::is_vertical(b) == SplitProjector::is_vertical(c)
}

/// `delta[a][b][c] = <D_{X_a} X_b, X_c>` by block projection of the Koszul
/// coefficients.
pub(crate) fn char_connection_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor3<N> {
    let g = levi_civita_generic(q, p);
    Tensor3::from_fn(|a, b, c| if same_block(b, c) { g[[a, b, c]] } else { N::zero() })
}

/// `D` from coordinate Christoffel symbols, independent of the Koszul table:
/// `nabla_{X_a} X_b = X_a(X_b^mu) d_mu + Gamma^mu_{nu rho} X_a^nu X_b^rho d_mu`,
/// pulled back by the coframe and block-projected.
fn char_connection_coordinate(q: &[f64; DIM], p: &ModelParams) -> Tensor3<f64> {
    let (f, df) = jet(q, |qd| frame_generic(qd, p).iter().flat_map(|r| r.iter().copied()).collect());
    let gam = christoffel_generic(q, p);
    let omega = coframe_generic(q, p);
    let mut out = Tensor3::zeros();
    for a in 0..DIM {
        for b in 0..DIM {
            let mut coord = [0.0; DIM];
            for (mu, slot) in coord.iter_mut().enumerate() {
                let mut acc = 0.0;
                for nu in 0..DIM {
                    acc += f[nu * DIM + a] * df[mu * DIM + b][nu];
                    for rho in 0..DIM {
                        acc += gam[[mu, nu, rho]] * f[nu * DIM + a] * f[rho * DIM + b];
                    }
                }
                *slot = acc;
            }
            for c in 0..DIM {
                if same_block(b, c) {
                    out[[a, b, c]] = (0..DIM).map(|mu| omega[c][mu] * coord[mu]).sum();
                }
            }
        }
    }
    out
}

/// `T[a][b][c] = <T^D(X_a, X_b), X_c>` with `T^D(A,B) = D_A B - D_B A - [A,B]`.
pub(crate) fn torsion_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor3<N> {
    let cst = structure_constants_generic(q, p);
    let g = levi_civita_generic(q, p);
    let d = |a: usize, b: usize, c: usize| if same_block(b, c) { g[[a, b, c]] } else { N::zero() };
    Tensor3::from_fn(|a, b, c| d(a, b, c) - d(b, a, c) - cst[[a, b, c]])
}

/// `T^D(A,B) = (P/2)((nabla_A P)B - (nabla_B P)A)`, using
/// `<(nabla_a P) X_b, X_c> = (eps_b - eps_c) gamma[a][b][c]`.
fn torsion_via_p(q: &[f64; DIM], p: &ModelParams) -> Tensor3<f64> {
    let g = levi_civita_generic(q, p);
    let e = SplitProjector::sign;
    Tensor3::from_fn(|a, b, c| {
        0.5 * e(c) * ((e(b) - e(c)) * g[[a, b, c]] - (e(a) - e(c)) * g[[b, a, c]])
    })
}

/// `S = nabla - D`: `S[a][b][c] = <S_{X_a} X_b, X_c>`. This is the tensor
/// whose associated connection `nabla - S` is `D`.
pub(crate) fn structure_tensor_generic<N: Scalar>(q: &[N; DIM], p: &ModelParams) -> Tensor3<N> {
    let g = levi_civita_generic(q, p);
    Tensor3::from_fn(|a, b, c| if same_block(b, c) { N::zero() } else { g[[a, b, c]] })
}

/// `D_{X_a} X_b`; 1-based labels.
pub fn char_connection(a: usize, b: usize, q: &CoordPoint, p: &ModelParams) -> Result<FrameVector> {
    let (a, b) = (label(a)?, label(b)?);
    check_domain(q, p)?;
    let t = char_connection_generic(&q.to_array(), p);
    Ok(FrameVector(std::array::from_fn(|c| t[[a, b, c]])))
}

/// Full table of `D`, from the Koszul route and the coordinate route.
pub fn char_connection_tables(q: &CoordPoint, p: &ModelParams) -> Result<(Tensor3<f64>, Tensor3<f64>)> {
    check_domain(q, p)?;
    let x = q.to_array();
    Ok((char_connection_generic(&x, p), char_connection_coordinate(&x, p)))
}

/// `T^D(X_a, X_b)`; 1-based labels.
pub fn torsion_d(a: usize, b: usize, q: &CoordPoint, p: &ModelParams) -> Result<FrameVector> {
    let t = Torsion3::at(q, p)?;
    Ok(t.vector(label(a)?, label(b)?))
}

/// Components of `T^D` at a point.
#[derive(Clone, Debug)]
pub struct Torsion3(pub Tensor3<f64>);

impl Torsion3 {
    pub fn at(q: &CoordPoint, p: &ModelParams) -> Result<Self> {
        check_domain(q, p)?;
        Ok(Torsion3(torsion_generic(&q.to_array(), p)))
    }

    /// The same tensor from the `(P/2)(nabla P)` formula.
    pub fn at_via_p(q: &CoordPoint, p: &ModelParams) -> Result<Self> {
        check_domain(q, p)?;
        Ok(Torsion3(torsion_via_p(&q.to_array(), p)))
    }

    /// 0-based labels.
    pub fn vector(&self, a: usize, b: usize) -> FrameVector {
        FrameVector(std::array::from_fn(|c| self.0[[a, b, c]]))
    }

    pub fn component(&self, a: usize, b: usize, c: usize) -> f64 {
        self.0[[a, b, c]]
    }

    /// `c12(T)(X_c) = sum_r T[r][r][c]`.
    pub fn c12(&self) -> [f64; DIM] {
        std::array::from_fn(|c| (0..DIM).map(|r| self.0[[r, r, c]]).sum())
    }

    /// `T[a][b][c] + T[c][a][b] + T[b][c][a]`; 0-based labels.
    pub fn cyclic(&self, a: usize, b: usize, c: usize) -> f64 {
        self.0[[a, b, c]] + self.0[[c, a, b]] + self.0[[b, c, a]]
    }

    /// `max |T[a][b][c] + T[b][a][c]|`.
    pub fn first_pair_symmetric_part(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..DIM {
            for b in 0..DIM {
                for c in 0..DIM {
                    worst = worst.max((self.0[[a, b, c]] + self.0[[b, a, c]]).abs());
                }
            }
        }
        worst
    }
}

pub fn c12_trace(q: &CoordPoint, p: &ModelParams) -> Result<[f64; DIM]> {
    Ok(Torsion3::at(q, p)?.c12())
}

/// Cyclic sum of `T^D` components; 1-based labels.
pub fn cyclic_sum(a: usize, b: usize, c: usize, q: &CoordPoint, p: &ModelParams) -> Result<f64> {
    let (a, b, c) = (label(a)?, label(b)?, label(c)?);
    Ok(Torsion3::at(q, p)?.cyclic(a, b, c))
}

/// Tricerri-Vanhecke label assigned to the torsion of `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureClass {
    /// `T` vanishes identically (`l = 0`).
    Trivial,
    T3,
    T2PlusT3,
}

impl StructureClass {
    pub fn name(&self) -> &'static str {
        match self {
            StructureClass::Trivial => "trivial structure",
            StructureClass::T3 => "T3",
            StructureClass::T2PlusT3 => "T2+T3",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub point: CoordPoint,
    /// 1-based labels.
    pub triple: [usize; 3],
    pub cyclic_sum: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub class: StructureClass,
    pub witness: Option<Witness>,
    pub max_c12: f64,
    pub max_first_pair_symmetric: f64,
}

pub const CLASS_EXACT_TOL: f64 = 1e-12;
pub const WITNESS_THRESHOLD: f64 = 1e-6;

/// Classify `T^D` over the sample points. The cyclic-sum witness is the
/// first triple, in lexicographic order over points then labels, whose
/// cyclic sum exceeds [`WITNESS_THRESHOLD`].
pub fn classify_structure(p: &ModelParams, points: &[CoordPoint]) -> Result<Classification> {
    if points.is_empty() {
        return Err(Error::TooFewSamples { got: 0, need: 1 });
    }
    let mut max_c12: f64 = 0.0;
    let mut max_sym: f64 = 0.0;
    let mut max_abs: f64 = 0.0;
    let mut witness = None;
    for q in points {
        let t = Torsion3::at(q, p)?;
        max_c12 = t.c12().iter().fold(max_c12, |acc, v| acc.max(v.abs()));
        max_sym = max_sym.max(t.first_pair_symmetric_part());
        max_abs = t.0.as_slice().iter().fold(max_abs, |acc, v| acc.max(v.abs()));
        if witness.is_none() {
            'scan: for a in 0..DIM {
                for b in 0..DIM {
                    for c in 0..DIM {
                        let s = t.cyclic(a, b, c);
                        if s.abs() > WITNESS_THRESHOLD {
                            witness = Some(Witness { point: *q, triple: [a + 1, b + 1, c + 1], cyclic_sum: s });
                            break 'scan;
                        }
                    }
                }
            }
        }
    }

    if max_abs <= CLASS_EXACT_TOL {
        if witness.is_some() {
            return Err(Error::InconclusiveClassification("vanishing tensor with a nonzero cyclic sum".into()));
        }
        return Ok(Classification { class: StructureClass::Trivial, witness, max_c12, max_first_pair_symmetric: max_sym });
    }
    let class = if max_sym <= CLASS_EXACT_TOL && witness.is_some() {
        StructureClass::T3
    } else if max_c12 <= CLASS_EXACT_TOL {
        StructureClass::T2PlusT3
    } else {
        return Err(Error::InconclusiveClassification(format!(
            "c12 = {max_c12:e} and first-pair symmetric part = {max_sym:e}"
        )));
    };
    Ok(Classification { class, witness, max_c12, max_first_pair_symmetric: max_sym })
}

/// Candidate tensors for the Ambrose-Singer check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Candidate {
    /// `T_{X} Y = T^D(X, Y)`.
    TorsionD,
    /// `T = nabla - D`.
    Difference,
    /// `T_{X_a} X_b = nabla_{X_a} X_b`, so that `nabla - T` kills the frame.
    /// A homogeneous structure whenever the frame is left-invariant (`m = 0`).
    Frame,
}

impl Candidate {
    fn tensor<N: Scalar>(&self, q: &[N; DIM], p: &ModelParams) -> Tensor3<N> {
        match self {
            Candidate::TorsionD => torsion_generic(q, p),
            Candidate::Difference => structure_tensor_generic(q, p),
            Candidate::Frame => levi_civita_generic(q, p),
        }
    }
}

/// Maximum residuals of
/// (i) `<T_X Y, Z> + <Y, T_X Z> = 0`,
/// (ii) `(nabla_X R)_{YZ} = [T_X, R_{YZ}] - R_{T_X Y, Z} - R_{Y, T_X Z}`,
/// (iii) `(nabla_X T)_Y = [T_X, T_Y] - T_{T_X Y}`.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct AmbroseSingerResiduals {
    pub skew: f64,
    pub curvature: f64,
    pub torsion: f64,
}

/// Derivatives of frame components along frame directions:
/// `out[a][k] = X_a(component k)`.
fn frame_derivatives(q: &[f64; DIM], p: &ModelParams, partials: &[[f64; DIM]]) -> Vec<[f64; DIM]> {
    let f = frame_generic(q, p);
    partials
        .iter()
        .map(|row| std::array::from_fn(|a| (0..DIM).map(|nu| f[nu][a] * row[nu]).sum()))
        .collect()
}

fn riemann_with_derivative(q: &[f64; DIM], p: &ModelParams) -> (Tensor4<f64>, Vec<[f64; DIM]>) {
    let (vals, partials) = jet(q, |qd: &[Dual<f64>; DIM]| riemann_frame_generic(qd, p).as_slice().to_vec());
    let mut r = Tensor4::zeros();
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                for d in 0..DIM {
                    r[[a, b, c, d]] = vals[((a * DIM + b) * DIM + c) * DIM + d];
                }
            }
        }
    }
    (r, frame_derivatives(q, p, &partials))
}

/// Covariant derivative of a frame (0,3) tensor with respect to the
/// connection coefficients `conn[a][b][c] = <Nabla_a X_b, X_c>`:
/// `out[a][b][e][d] = (Nabla_a T)(X_b, X_e, X_d)`.
fn covariant_derivative3(t: &Tensor3<f64>, dt: &[[f64; DIM]], conn: &Tensor3<f64>) -> Vec<f64> {
    let mut out = vec![0.0; DIM.pow(4)];
    for a in 0..DIM {
        for b in 0..DIM {
            for e in 0..DIM {
                for d in 0..DIM {
                    let mut acc = dt[(b * DIM + e) * DIM + d][a];
                    for f in 0..DIM {
                        acc -= conn[[a, b, f]] * t[[f, e, d]]
                            + conn[[a, e, f]] * t[[b, f, d]]
                            + conn[[a, d, f]] * t[[b, e, f]];
                    }
                    out[((a * DIM + b) * DIM + e) * DIM + d] = acc;
                }
            }
        }
    }
    out
}

fn tensor3_with_derivative(
    q: &[f64; DIM],
    p: &ModelParams,
    f: impl Fn(&[Dual<f64>; DIM]) -> Tensor3<Dual<f64>>,
) -> (Tensor3<f64>, Vec<[f64; DIM]>) {
    let (vals, partials) = jet(q, |qd| f(qd).as_slice().to_vec());
    let t = Tensor3::from_fn(|a, b, c| vals[(a * DIM + b) * DIM + c]);
    (t, frame_derivatives(q, p, &partials))
}

pub fn ambrose_singer_check(q: &CoordPoint, p: &ModelParams, candidate: Candidate) -> Result<AmbroseSingerResiduals> {
    check_domain(q, p)?;
    let x = q.to_array();
    let gamma = levi_civita_generic(&x, p);
    let (t, dt) = tensor3_with_derivative(&x, p, |qd| candidate.tensor(qd, p));
    let (r, dr) = riemann_with_derivative(&x, p);
    let ri = |d: usize, e: usize, b: usize, c: usize| r[[d, e, b, c]];

    let mut res = AmbroseSingerResiduals::default();
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                res.skew = res.skew.max((t[[a, b, c]] + t[[a, c, b]]).abs());
            }
        }
    }

    // (ii)
    for a in 0..DIM {
        for d in 0..DIM {
            for e in 0..DIM {
                for b in 0..DIM {
                    for c in 0..DIM {
                        let mut lhs = dr[((d * DIM + e) * DIM + b) * DIM + c][a];
                        let mut rhs = 0.0;
                        for f in 0..DIM {
                            lhs -= gamma[[a, d, f]] * ri(f, e, b, c)
                                + gamma[[a, e, f]] * ri(d, f, b, c)
                                + gamma[[a, b, f]] * ri(d, e, f, c)
                                + gamma[[a, c, f]] * ri(d, e, b, f);
                            rhs += t[[a, f, d]] * ri(f, e, b, c) - ri(d, f, b, c) * t[[a, e, f]]
                                - t[[a, b, f]] * ri(d, e, f, c)
                                - t[[a, c, f]] * ri(d, e, b, f);
                        }
                        res.curvature = res.curvature.max((lhs - rhs).abs());
                    }
                }
            }
        }
    }

    // (iii)
    let nabla_t = covariant_derivative3(&t, &dt, &gamma);
    for a in 0..DIM {
        for b in 0..DIM {
            for e in 0..DIM {
                for d in 0..DIM {
                    let lhs = nabla_t[((a * DIM + b) * DIM + e) * DIM + d];
                    let mut rhs = 0.0;
                    for f in 0..DIM {
                        rhs += t[[a, f, d]] * t[[b, e, f]] - t[[b, f, d]] * t[[a, e, f]] - t[[a, b, f]] * t[[f, e, d]];
                    }
                    res.torsion = res.torsion.max((lhs - rhs).abs());
                }
            }
        }
    }
    Ok(res)
}

/// Residuals of `D`-parallelism: `max |D R|` for the Riemannian curvature and
/// `max |D T^D|`.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct ParallelResiduals {
    pub curvature: f64,
    pub torsion: f64,
}

pub fn d_parallel_check(q: &CoordPoint, p: &ModelParams) -> Result<ParallelResiduals> {
    check_domain(q, p)?;
    let x = q.to_array();
    let delta = char_connection_generic(&x, p);
    let (t, dt) = tensor3_with_derivative(&x, p, |qd| torsion_generic(qd, p));
    let (r, dr) = riemann_with_derivative(&x, p);

    let mut out = ParallelResiduals::default();
    for v in covariant_derivative3(&t, &dt, &delta) {
        out.torsion = out.torsion.max(v.abs());
    }
    for a in 0..DIM {
        for d in 0..DIM {
            for e in 0..DIM {
                for b in 0..DIM {
                    for c in 0..DIM {
                        let mut v = dr[((d * DIM + e) * DIM + b) * DIM + c][a];
                        for f in 0..DIM {
                            v -= delta[[a, d, f]] * r[[f, e, b, c]]
                                + delta[[a, e, f]] * r[[d, f, b, c]]
                                + delta[[a, b, f]] * r[[d, e, f, c]]
                                + delta[[a, c, f]] * r[[d, e, b, f]];
                        }
                        out.curvature = out.curvature.max(v.abs());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `max |<D_a X_b, X_c> + <X_b, D_a X_c>|`.
pub fn metric_compatibility_residual(q: &CoordPoint, p: &ModelParams) -> Result<f64> {
    check_domain(q, p)?;
    let d = char_connection_generic(&q.to_array(), p);
    let mut worst: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                worst = worst.max((d[[a, b, c]] + d[[a, c, b]]).abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: [f64; 7]) -> CoordPoint {
        CoordPoint::from_array(c)
    }

    #[test]
    fn projector_squares_to_identity() {
        let v = FrameVector([1., -2., 3., 0.5, 0.25, -1., 2.]);
        assert_eq!(SplitProjector::apply(&SplitProjector::apply(&v)), v);
        assert_eq!(SplitProjector::vertical(&v) + SplitProjector::horizontal(&v), v);
    }

    #[test]
    fn char_connection_examples() {
        let q = pt([0.1, 0.2, -0.1, 0.3, 0.2, -0.1, 0.15]);
        let p = ModelParams::new(0.0, 2.0);
        assert_eq!(char_connection(1, 2, &q, &ModelParams::new(0.7, 1.1)).unwrap().max_abs(), 0.0);
        assert!((char_connection(1, 4, &q, &p).unwrap() - FrameVector::basis(5)).max_abs() < 1e-14);
        assert!(char_connection(4, 5, &q, &p).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn both_routes_to_d_agree() {
        let q = pt([0.1, 0.2, -0.1, 0.3, -0.2, 0.4, 0.15]);
        let (a, b) = char_connection_tables(&q, &ModelParams::new(-0.8, 1.6)).unwrap();
        let diff = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn torsion_formulas_agree() {
        let q = pt([0.1, 0.2, -0.1, 0.3, -0.2, 0.4, 0.15]);
        let p = ModelParams::new(0.9, -1.3);
        let a = Torsion3::at(&q, &p).unwrap();
        let b = Torsion3::at_via_p(&q, &p).unwrap();
        let diff = a.0.as_slice().iter().zip(b.0.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn torsion_45_at_origin_and_y1() {
        let v = torsion_d(4, 5, &CoordPoint::ORIGIN, &ModelParams::new(0.4, 1.5)).unwrap();
        assert!((v - FrameVector([1.5, 0., 0., 0., 0., 0., 0.])).max_abs() < 1e-14);
        let v = torsion_d(4, 5, &pt([0., 0., 0., 0., 0., 1., 0.]), &ModelParams::new(1.0, 2.0)).unwrap();
        assert!((v - FrameVector([4., 0., 0., 0., 0., 0., 0.])).max_abs() < 1e-13, "{v:?}");
    }

    #[test]
    fn d_is_metric() {
        let q = pt([0.1, 0.2, -0.1, 0.3, -0.2, 0.4, 0.15]);
        assert!(metric_compatibility_residual(&q, &ModelParams::new(0.5, 1.0)).unwrap() < 1e-14);
    }

    #[test]
    fn flat_parameters_are_trivial() {
        let pts = [pt([0.1, 0.2, -0.1, 0.3, -0.2, 0.4, 0.15])];
        let c = classify_structure(&ModelParams::new(0.6, 0.0), &pts).unwrap();
        assert_eq!(c.class, StructureClass::Trivial);
        assert!(c.witness.is_none());
    }

    #[test]
    fn frame_structure_satisfies_ambrose_singer_when_left_invariant() {
        // validates the residual machinery on a known homogeneous structure
        let q = pt([0.1, 0.2, -0.3, 0.31, -0.22, 0.17, 0.41]);
        let r = ambrose_singer_check(&q, &ModelParams::new(0.0, 1.3), Candidate::Frame).unwrap();
        assert!(r.skew < 1e-14 && r.curvature < 1e-12 && r.torsion < 1e-12, "{r:?}");
    }

    #[test]
    fn mixed_torsion_is_the_connection_term() {
        // T^D(X_1, X_4) = H(nabla_1 X_4) - V(nabla_4 X_1) = nabla_1 X_4, nonzero for l != 0
        let q = pt([0.1, 0.2, -0.3, 0.31, -0.22, 0.17, 0.41]);
        let p = ModelParams::new(0.7, 1.1);
        let t = torsion_d(1, 4, &q, &p).unwrap();
        let nabla = crate::manifold::levi_civita_frame(1, 4, &q, &p).unwrap();
        assert!((t - nabla).max_abs() < 1e-14);
        assert!(t.max_abs() > 0.1);
    }

    #[test]
    fn difference_tensor_is_skew_and_its_curvature_residual_is_d_r() {
        let q = pt([0.1, 0.2, -0.3, 0.31, -0.22, 0.17, 0.41]);
        let p = ModelParams::new(1.0, 1.0);
        let r = ambrose_singer_check(&q, &p, Candidate::Difference).unwrap();
        let d = d_parallel_check(&q, &p).unwrap();
        assert_eq!(r.skew, 0.0);
        assert!((r.curvature - d.curvature).abs() < 1e-12);
    }
}
