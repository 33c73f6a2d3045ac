//! Normal (sub-)Riemannian geodesics as solutions of Hamilton's equations on
//! the cotangent bundle.
//!
//! Momentum functions are `P_a(q, p) = p(X_a(q))`; the Hamiltonian is half
//! the sum of squares of the horizontal momenta (sub-Riemannian) or of all
//! seven (Riemannian). Its gradient is taken by exact differentiation.

pub mod circle;
pub mod closed_form;
pub mod quaternion;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::connection::structure_constants_generic;
use crate::manifold::frame::{frame_generic, k_generic};
use crate::manifold::{check_domain, CoordPoint, ModelParams};
use crate::scalar::{jet, seed, Dual, Scalar};
use crate::tensor::DIM;

pub use circle::{circle_check, circle_check_samples, CircleVerdict};
pub use closed_form::{closed_form_geodesic, closed_form_horizontal, ClosedFormInput};
pub use quaternion::Quaternion;

pub const STATE_DIM: usize = 2 * DIM;

/// A point of `T*M` in canonical coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CotangentState {
    pub q: CoordPoint,
    /// `(p_r, p_s, p_t, p_w, p_x, p_y, p_z)`.
    pub p: [f64; DIM],
}

impl CotangentState {
    pub fn new(q: CoordPoint, p: [f64; DIM]) -> Self {
        CotangentState { q, p }
    }

    pub fn from_array(v: [f64; STATE_DIM]) -> Self {
        CotangentState {
            q: CoordPoint::from_array(std::array::from_fn(|i| v[i])),
            p: std::array::from_fn(|i| v[DIM + i]),
        }
    }

    pub fn to_array(&self) -> [f64; STATE_DIM] {
        let q = self.q.to_array();
        std::array::from_fn(|i| if i < DIM { q[i] } else { self.p[i - DIM] })
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeodesicMode {
    /// The quaternionic Heisenberg group, `(m, l) = (0, 1)` only.
    Heisenberg,
    /// Horizontal momenta `P_4..P_7`, any `(m, l)`.
    Subriemannian,
    /// All seven momenta.
    Riemannian,
}

impl GeodesicMode {
    pub fn name(&self) -> &'static str {
        match self {
            GeodesicMode::Heisenberg => "heisenberg",
            GeodesicMode::Subriemannian => "subriemannian",
            GeodesicMode::Riemannian => "riemannian",
        }
    }

    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        if *self == GeodesicMode::Heisenberg && (p.m != 0.0 || p.l != 1.0) {
            return Err(Error::ModeMismatch { m: p.m, l: p.l });
        }
        Ok(())
    }

    fn first_momentum(&self) -> usize {
        match self {
            GeodesicMode::Riemannian => 0,
            _ => 3,
        }
    }
}

impl std::str::FromStr for GeodesicMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg" => Ok(GeodesicMode::Heisenberg),
            "subriemannian" => Ok(GeodesicMode::Subriemannian),
            "riemannian" => Ok(GeodesicMode::Riemannian),
            _ => Err(Error::InvalidArgument(format!("unknown geodesic mode {s:?}"))),
        }
    }
}

/// All seven momentum functions `P_a = sum_mu X_a^mu p_mu`.
pub(crate) fn momenta_generic<N: Scalar>(x: &[N; STATE_DIM], p: &ModelParams) -> [N; DIM] {
    let q: [N; DIM] = std::array::from_fn(|i| x[i]);
    let f = frame_generic(&q, p);
    std::array::from_fn(|a| {
        let mut acc = N::zero();
        for mu in 0..DIM {
            acc += f[mu][a] * x[DIM + mu];
        }
        acc
    })
}

fn hamiltonian_generic<N: Scalar>(x: &[N; STATE_DIM], p: &ModelParams, mode: GeodesicMode) -> N {
    let pm = momenta_generic(x, p);
    let mut h = N::zero();
    for v in &pm[mode.first_momentum()..] {
        h += *v * *v;
    }
    h.scale(0.5)
}

/// Momentum functions `P_1..P_7` at a state.
pub fn momenta(s: &CotangentState, p: &ModelParams) -> [f64; DIM] {
    momenta_generic(&s.to_array(), p)
}

pub fn hamiltonian(s: &CotangentState, p: &ModelParams, mode: GeodesicMode) -> Result<f64> {
    mode.validate(p)?;
    check_domain(&s.q, p)?;
    Ok(hamiltonian_generic(&s.to_array(), p, mode))
}

/// Rescale the momentum so that `H = 1/2` (unit-speed parametrisation).
pub fn unit_speed(s: &CotangentState, p: &ModelParams, mode: GeodesicMode) -> Result<CotangentState> {
    let h = hamiltonian(s, p, mode)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("cannot normalise a state with H = {h}")));
    }
    let c = (2.0 * h).sqrt().recip();
    Ok(CotangentState { q: s.q, p: s.p.map(|v| v * c) })
}

fn rhs_unchecked(x: &[f64; STATE_DIM], p: &ModelParams, mode: GeodesicMode) -> [f64; STATE_DIM] {
    let (_, grad) = jet(x, |xd| vec![hamiltonian_generic(xd, p, mode)]);
    let g = grad[0];
    std::array::from_fn(|i| if i < DIM { g[DIM + i] } else { -g[i - DIM] })
}

/// `(q', p') = (dH/dp, -dH/dq)`.
pub fn hamilton_rhs(s: &CotangentState, p: &ModelParams, mode: GeodesicMode) -> Result<[f64; STATE_DIM]> {
    mode.validate(p)?;
    check_domain(&s.q, p)?;
    Ok(rhs_unchecked(&s.to_array(), p, mode))
}

/// The printed specialised Heisenberg system, in the order
/// `w', x', y', z', r', s', t', P_W', P_X', P_Y', P_Z', P_r', P_s', P_t'`.
/// Kept as a fixture: its `s'` line disagrees with `dH/dp_s`.
pub fn lemma_rhs(s: &CotangentState) -> [f64; STATE_DIM] {
    let q = &s.q;
    let [pr, ps, pt, ..] = s.p;
    let pm = momenta(s, &ModelParams::HEISENBERG);
    let (pw, px, py, pz) = (pm[3], pm[4], pm[5], pm[6]);
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    [
        pw,
        px,
        py,
        pz,
        0.5 * (x * pw - w * px + z * py - y * pz),
        0.5 * (y * pw - z * px + x * py - w * pz),
        0.5 * (z * pw + y * px - x * py - w * pz),
        pr * px + ps * py + pt * pz,
        -pr * pw - ps * pz + pt * py,
        pr * pz - ps * pw - pt * px,
        -pr * py + ps * px - pt * pw,
        0.0,
        0.0,
        0.0,
    ]
}

/// The generic flow expressed in the same variables as [`lemma_rhs`]: the
/// coordinate velocities and the chain-rule derivatives of the momentum
/// functions along the flow.
pub fn generic_in_lemma_variables(s: &CotangentState) -> Result<[f64; STATE_DIM]> {
    let p = ModelParams::HEISENBERG;
    let rhs = hamilton_rhs(s, &p, GeodesicMode::Heisenberg)?;
    let x = s.to_array();
    let moving: [Dual<f64>; STATE_DIM] = seed(&x, &rhs);
    let dp = momenta_generic(&moving, &p);
    use crate::manifold::{R, S, T, W, X, Y, Z};
    Ok([
        rhs[W],
        rhs[X],
        rhs[Y],
        rhs[Z],
        rhs[R],
        rhs[S],
        rhs[T],
        dp[3].d,
        dp[4].d,
        dp[5].d,
        dp[6].d,
        dp[0].d,
        dp[1].d,
        dp[2].d,
    ])
}

/// Index of the `s'` line in [`lemma_rhs`].
pub const LEMMA_S_LINE: usize = 5;

/// `{P_A, P_B}` for the six horizontal pairs at `(m, l) = (0, 1)`, together
/// with `|{P_A, P_B}| + P_{[A,B]}|`, the anti-homomorphism residual.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoissonEntry {
    /// 1-based frame labels.
    pub pair: [usize; 2],
    pub bracket: f64,
    pub residual: f64,
}

pub fn poisson_check(s: &CotangentState) -> Result<Vec<PoissonEntry>> {
    let p = ModelParams::HEISENBERG;
    check_domain(&s.q, &p)?;
    let x = s.to_array();
    let (pm, grad) = jet(&x, |xd| momenta_generic(xd, &p).to_vec());
    let cst = structure_constants_generic(&s.q.to_array(), &p);
    let mut out = Vec::with_capacity(6);
    for a in 3..DIM {
        for b in (a + 1)..DIM {
            let mut pb = 0.0;
            for i in 0..DIM {
                pb += grad[a][i] * grad[b][DIM + i] - grad[b][i] * grad[a][DIM + i];
            }
            let p_bracket: f64 = (0..DIM).map(|c| cst[[a, b, c]] * pm[c]).sum();
            out.push(PoissonEntry { pair: [a + 1, b + 1], bracket: pb, residual: (pb + p_bracket).abs() });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub u: f64,
    pub state: CotangentState,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub mode: GeodesicMode,
    pub params: ModelParams,
    pub step: f64,
    pub samples: Vec<Sample>,
}

pub const CSV_HEADER: [&str; 16] =
    ["u", "r", "s", "t", "w", "x", "y", "z", "pr", "ps", "pt", "pw", "px", "py", "pz", "H"];

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories hold at least the initial sample")
    }

    /// `max |H(u) - H(0)|`.
    pub fn energy_drift(&self) -> f64 {
        let h0 = self.samples[0].h;
        self.samples.iter().fold(0.0, |acc, s| acc.max((s.h - h0).abs()))
    }

    /// One row per sample in [`CSV_HEADER`] order.
    pub fn rows(&self) -> impl Iterator<Item = [f64; 16]> + '_ {
        self.samples.iter().map(|s| {
            let x = s.state.to_array();
            std::array::from_fn(|i| match i {
                0 => s.u,
                15 => s.h,
                _ => x[i - 1],
            })
        })
    }

    /// The horizontal projection `w + i x + j y + k z` of every sample.
    pub fn horizontal(&self) -> Vec<Quaternion> {
        self.samples.iter().map(|s| Quaternion::new(s.state.q.w, s.state.q.x, s.state.q.y, s.state.q.z)).collect()
    }
}

fn add_scaled(x: &[f64; STATE_DIM], k: &[f64; STATE_DIM], c: f64) -> [f64; STATE_DIM] {
    std::array::from_fn(|i| x[i] + c * k[i])
}

/// Classical fixed-step RK4 with `n` steps of size `h`, recording `H` at each
/// sample. Leaving the chart returns `DomainExit` carrying the samples so far.
pub fn integrate(s0: &CotangentState, p: &ModelParams, mode: GeodesicMode, h: f64, n: usize) -> Result<Trajectory> {
    mode.validate(p)?;
    if !(h > 0.0 && h.is_finite()) || n == 0 {
        return Err(Error::InvalidArgument(format!("need h > 0 and n >= 1 (h = {h}, n = {n})")));
    }
    check_domain(&s0.q, p)?;
    if !s0.is_finite() {
        return Err(Error::StepRejected { step: 0 });
    }
    let mut traj = Trajectory { mode, params: *p, step: h, samples: Vec::with_capacity(n + 1) };
    let mut x = s0.to_array();
    traj.samples.push(Sample { u: 0.0, state: *s0, h: hamiltonian_generic(&x, p, mode) });

    let in_chart = |x: &[f64; STATE_DIM]| {
        let q: [f64; DIM] = std::array::from_fn(|i| x[i]);
        k_generic(&q, p) > 0.0
    };
    for step in 1..=n {
        let mut stages = [[0.0; STATE_DIM]; 4];
        let offsets = [0.0, 0.5 * h, 0.5 * h, h];
        for i in 0..4 {
            let probe = if i == 0 { x } else { add_scaled(&x, &stages[i - 1], offsets[i]) };
            if !in_chart(&probe) {
                return Err(Error::DomainExit { step, partial: Box::new(traj) });
            }
            stages[i] = rhs_unchecked(&probe, p, mode);
        }
        for i in 0..STATE_DIM {
            x[i] += h / 6.0 * (stages[0][i] + 2.0 * stages[1][i] + 2.0 * stages[2][i] + stages[3][i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepRejected { step });
        }
        if !in_chart(&x) {
            return Err(Error::DomainExit { step, partial: Box::new(traj) });
        }
        traj.samples.push(Sample {
            u: step as f64 * h,
            state: CotangentState::from_array(x),
            h: hamiltonian_generic(&x, p, mode),
        });
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(q: [f64; 7], p: [f64; 7]) -> CotangentState {
        CotangentState::new(CoordPoint::from_array(q), p)
    }

    #[test]
    fn hamiltonian_examples() {
        let hz = ModelParams::HEISENBERG;
        let s = state([0.0; 7], [0., 0., 0., 3., 4., 0., 0.]);
        assert_eq!(hamiltonian(&s, &hz, GeodesicMode::Heisenberg).unwrap(), 12.5);
        let s = state([0., 0., 0., 0., 2., 0., 0.], [1., 0., 0., 1., 0., 0., 0.]);
        assert_eq!(hamiltonian(&s, &hz, GeodesicMode::Heisenberg).unwrap(), 2.0);
        assert_eq!(hamiltonian(&s, &hz, GeodesicMode::Riemannian).unwrap(), 2.5);
        assert!(matches!(
            hamiltonian(&s, &ModelParams::new(0.1, 1.0), GeodesicMode::Heisenberg),
            Err(Error::ModeMismatch { .. })
        ));
    }

    #[test]
    fn rhs_examples() {
        let hz = ModelParams::HEISENBERG;
        let rhs = hamilton_rhs(&state([0.0; 7], [0., 0., 0., 1., 0., 0., 0.]), &hz, GeodesicMode::Heisenberg).unwrap();
        let mut expected = [0.0; 14];
        expected[crate::manifold::W] = 1.0;
        assert_eq!(rhs, expected);
        let rhs = hamilton_rhs(&state([0., 0., 0., 0., 1., 0., 0.], [1., 0., 0., 1., 0., 0., 0.]), &hz, GeodesicMode::Heisenberg)
            .unwrap();
        assert!((rhs[crate::manifold::R] - 0.75).abs() < 1e-15);
        assert_eq!(&rhs[7..10], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn straight_line_for_pure_pw() {
        let t = integrate(&state([0.0; 7], [0., 0., 0., 1., 0., 0., 0.]), &ModelParams::HEISENBERG, GeodesicMode::Heisenberg, 0.01, 100)
            .unwrap();
        let last = t.last();
        assert!((last.state.q.w - 1.0).abs() < 1e-12);
        assert_eq!(t.samples.len(), 101);
    }

    #[test]
    fn leaving_the_chart_keeps_the_partial_trajectory() {
        // m < 0: K = 1 + m |h|^2 vanishes at |h| = 1; the exact flow only
        // approaches it, but a coarse step jumps over
        let s = state([0.0; 7], [0., 0., 0., 1., 0., 0., 0.]);
        match integrate(&s, &ModelParams::new(-1.0, 0.0), GeodesicMode::Subriemannian, 0.7, 10) {
            Err(Error::DomainExit { step, partial }) => {
                assert!(step >= 1);
                assert_eq!(partial.samples.len(), step);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poisson_examples() {
        let s = state([0.1, -0.2, 0.3, 0.4, -0.1, 0.2, 0.5], [0.7, -0.3, 0.2, 0.1, 0.4, -0.6, 0.9]);
        let entries = poisson_check(&s).unwrap();
        let wx = &entries[0];
        assert_eq!(wx.pair, [4, 5]);
        assert!((wx.bracket - 0.7).abs() < 1e-14);
        let xz = entries.iter().find(|e| e.pair == [5, 7]).unwrap();
        assert!((xz.bracket - 0.3).abs() < 1e-14); // -p_s
        let yz = entries.iter().find(|e| e.pair == [6, 7]).unwrap();
        assert!((yz.bracket - 0.7).abs() < 1e-14);
        assert!(entries.iter().all(|e| e.residual < 1e-14));
    }
}
