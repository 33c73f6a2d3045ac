//! Killing fields: the frame Killing operator, the 28 component equations,
//! and the closed-form 13-parameter family at `m = 0`.
//!
//! Candidate fields are `X = sum_a f_a X_a` with polynomial coefficients of
//! total degree at most two, so all derivatives are exact.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::connection::{levi_civita_generic, structure_constants_generic};
use crate::manifold::frame::frame_generic;
use crate::manifold::{check_domain, CoordPoint, ModelParams};
use crate::reference::{Env, Expr};
use crate::scalar::{jet, Dual, Scalar};
use crate::tensor::DIM;

pub const MAX_DEGREE: u32 = 2;

pub type Monomial = [u8; DIM];

/// A polynomial in `(r, s, t, w, x, y, z)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly(pub BTreeMap<Monomial, f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        let mut p = Poly::default();
        p.add_term([0; DIM], c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; DIM];
        e[i] = 1;
        let mut p = Poly::default();
        p.add_term(e, 1.0);
        p
    }

    pub fn add_term(&mut self, exps: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        let slot = self.0.entry(exps).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.0.remove(&exps);
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.keys().map(|e| e.iter().map(|&k| k as u32).sum()).max().unwrap_or(0)
    }

    pub fn eval<N: Scalar>(&self, q: &[N; DIM]) -> N {
        let mut acc = N::zero();
        for (exps, &c) in &self.0 {
            let mut term = N::cst(c);
            for (i, &k) in exps.iter().enumerate() {
                for _ in 0..k {
                    term = term * q[i];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn scale(mut self, c: f64) -> Self {
        for v in self.0.values_mut() {
            *v *= c;
        }
        self.0.retain(|_, v| *v != 0.0);
        self
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.0 {
            self.add_term(e, c);
        }
        self
    }
}

impl std::ops::Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + rhs.scale(-1.0)
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &rhs.0 {
                out.add_term(std::array::from_fn(|i| ea[i] + eb[i]), ca * cb);
            }
        }
        out
    }
}

/// Anything with frame coefficients that can be evaluated at dual points.
pub trait FrameField {
    fn coeffs<N: Scalar>(&self, q: &[N; DIM], p: &ModelParams) -> [N; DIM];
}

/// `X = sum_a f_a X_a` with polynomial `f_a` of degree at most two.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField", into = "RawField")]
pub struct PolyVectorField {
    pub f: [Poly; DIM],
}

impl PolyVectorField {
    pub fn new(f: [Poly; DIM]) -> Result<Self> {
        for (a, poly) in f.iter().enumerate() {
            if poly.degree() > MAX_DEGREE {
                return Err(Error::MalformedPolynomial(format!("f_{} has degree {}", a + 1, poly.degree())));
            }
            if poly.0.values().any(|c| !c.is_finite()) {
                return Err(Error::MalformedPolynomial(format!("f_{} has a non-finite coefficient", a + 1)));
            }
        }
        Ok(PolyVectorField { f })
    }

    /// The frame field `X_label` (1-based).
    pub fn frame(label: usize) -> Self {
        let mut f: [Poly; DIM] = Default::default();
        f[label - 1] = Poly::constant(1.0);
        PolyVectorField { f }
    }

    pub fn eval(&self, q: &CoordPoint) -> [f64; DIM] {
        let x = q.to_array();
        std::array::from_fn(|a| self.f[a].eval(&x))
    }
}

impl FrameField for PolyVectorField {
    fn coeffs<N: Scalar>(&self, q: &[N; DIM], _p: &ModelParams) -> [N; DIM] {
        std::array::from_fn(|a| self.f[a].eval(q))
    }
}

/// JSON form: seven maps from comma-joined exponent tuples to coefficients.
#[derive(Serialize, Deserialize)]
struct RawField {
    coefficients: Vec<BTreeMap<String, f64>>,
}

fn parse_monomial(key: &str) -> Result<Monomial> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != DIM {
        return Err(Error::MalformedPolynomial(format!("exponent key {key:?} needs {DIM} entries")));
    }
    let mut e = [0u8; DIM];
    for (slot, s) in e.iter_mut().zip(parts) {
        *slot = s
            .parse()
            .map_err(|_| Error::MalformedPolynomial(format!("bad exponent {s:?} in {key:?}")))?;
    }
    Ok(e)
}

impl TryFrom<RawField> for PolyVectorField {
    type Error = Error;
    fn try_from(raw: RawField) -> Result<Self> {
        if raw.coefficients.len() != DIM {
            return Err(Error::MalformedPolynomial(format!(
                "expected {DIM} coefficient maps, got {}",
                raw.coefficients.len()
            )));
        }
        let mut f: [Poly; DIM] = Default::default();
        for (slot, map) in f.iter_mut().zip(raw.coefficients) {
            for (key, c) in map {
                slot.add_term(parse_monomial(&key)?, c);
            }
        }
        PolyVectorField::new(f)
    }
}

impl From<PolyVectorField> for RawField {
    fn from(field: PolyVectorField) -> Self {
        let coefficients = field
            .f
            .iter()
            .map(|poly| {
                poly.0
                    .iter()
                    .map(|(e, &c)| (e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","), c))
                    .collect()
            })
            .collect();
        RawField { coefficients }
    }
}

/// The frame bracket `[U, V]` of two fields, itself evaluable at dual points.
pub struct BracketField<'a, A, B> {
    pub u: &'a A,
    pub v: &'a B,
}

impl<A: FrameField, B: FrameField> FrameField for BracketField<'_, A, B> {
    fn coeffs<N: Scalar>(&self, q: &[N; DIM], p: &ModelParams) -> [N; DIM] {
        // [U,V]^c = U(v_c) - V(u_c) + sum_ab u_a v_b c_ab^c
        let (u, du) = jet(q, |qd: &[Dual<N>; DIM]| self.u.coeffs(qd, p).to_vec());
        let (v, dv) = jet(q, |qd: &[Dual<N>; DIM]| self.v.coeffs(qd, p).to_vec());
        let f = frame_generic(q, p);
        let cst = structure_constants_generic(q, p);
        std::array::from_fn(|c| {
            let mut acc = N::zero();
            for a in 0..DIM {
                for mu in 0..DIM {
                    acc += u[a] * f[mu][a] * dv[c][mu] - v[a] * f[mu][a] * du[c][mu];
                }
                for b in 0..DIM {
                    acc += u[a] * v[b] * cst[[a, b, c]];
                }
            }
            acc
        })
    }
}

/// `K[a][b] = <nabla_{X_a} X, X_b> + <nabla_{X_b} X, X_a>`.
pub fn killing_residual<F: FrameField>(field: &F, q: &CoordPoint, p: &ModelParams) -> Result<[[f64; DIM]; DIM]> {
    check_domain(q, p)?;
    let x = q.to_array();
    let (f, df) = jet(&x, |qd: &[Dual<f64>; DIM]| field.coeffs(qd, p).to_vec());
    let frame = frame_generic(&x, p);
    let gamma = levi_civita_generic(&x, p);
    // <nabla_a X, X_b> = X_a(f_b) + sum_c f_c gamma[a][c][b]
    let nab = |a: usize, b: usize| {
        let mut acc: f64 = (0..DIM).map(|mu| frame[mu][a] * df[b][mu]).sum();
        for c in 0..DIM {
            acc += f[c] * gamma[[a, c, b]];
        }
        acc
    };
    let mut out = [[0.0; DIM]; DIM];
    for a in 0..DIM {
        for b in a..DIM {
            let v = nab(a, b) + nab(b, a);
            out[a][b] = v;
            out[b][a] = v;
        }
    }
    Ok(out)
}

pub fn max_abs_matrix(m: &[[f64; DIM]; DIM]) -> f64 {
    m.iter().flatten().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

// ---------------------------------------------------------------------------
// The 28 component equations

const SYSTEM_SOURCE: &str = include_str!("../data/killing_system.toml");

/// Which transcription of the 28 equations to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PdeVariant {
    /// General-m list with known typos corrected.
    #[default]
    Corrected,
    /// General-m list exactly as printed.
    Printed,
    /// The separately printed m = 0 list (valid only at m = 0).
    PrintedM0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Partial(usize),
    Value,
}

#[derive(Clone, Debug)]
pub struct PdeTerm {
    pub coeff: Expr,
    pub op: Operator,
    /// 0-based field index.
    pub field: usize,
}

#[derive(Clone, Debug)]
pub struct PdeEquation {
    /// 1-based frame pair whose Killing component this equation expresses.
    pub pair: [usize; 2],
    pub terms: Vec<PdeTerm>,
    pub erratum: Option<String>,
}

impl PdeEquation {
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for t in &self.terms {
            let core = match t.op {
                Operator::Partial(i) => format!("d_{}(f_{})", crate::manifold::COORD_NAMES[i], t.field + 1),
                Operator::Value => format!("f_{}", t.field + 1),
            };
            parts.push(if t.coeff.text() == "1" { core } else { format!("({})*{}", t.coeff.text(), core) });
        }
        format!("{} = 0", parts.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct PdeSystem {
    pub general: Vec<PdeEquation>,
    pub corrected: Vec<PdeEquation>,
    pub m0: Vec<PdeEquation>,
}

#[derive(Deserialize)]
struct RawEquation {
    pair: [usize; 2],
    terms: Vec<(String, String, usize)>,
    erratum: Option<String>,
}

#[derive(Deserialize)]
struct RawCorrection {
    equation: usize,
    term: usize,
    replacement: (String, String, usize),
}

#[derive(Deserialize)]
struct RawSystem {
    corrections: Vec<RawCorrection>,
    general: Vec<RawEquation>,
    m0: Vec<RawEquation>,
}

fn parse_term((c, op, field): &(String, String, usize)) -> Result<PdeTerm> {
    let op = match op.as_str() {
        "f" => Operator::Value,
        name => Operator::Partial(
            crate::manifold::COORD_NAMES
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::Table(format!("unknown operator {name:?}")))?,
        ),
    };
    if !(1..=DIM).contains(field) {
        return Err(Error::Table(format!("field index {field}")));
    }
    Ok(PdeTerm { coeff: Expr::parse(c)?, op, field: field - 1 })
}

fn parse_equations(raw: &[RawEquation]) -> Result<Vec<PdeEquation>> {
    raw.iter()
        .map(|e| {
            Ok(PdeEquation {
                pair: e.pair,
                terms: e.terms.iter().map(parse_term).collect::<Result<_>>()?,
                erratum: e.erratum.clone(),
            })
        })
        .collect()
}

impl PdeSystem {
    fn parse(source: &str) -> Result<Self> {
        let raw: RawSystem = toml::from_str(source).map_err(|e| Error::Table(e.to_string()))?;
        let general = parse_equations(&raw.general)?;
        let m0 = parse_equations(&raw.m0)?;
        if general.len() != 28 || m0.len() != 28 {
            return Err(Error::Table("expected 28 equations per list".into()));
        }
        let mut corrected = general.clone();
        for c in &raw.corrections {
            let eq = corrected
                .get_mut(c.equation.wrapping_sub(1))
                .ok_or_else(|| Error::Table(format!("no equation {}", c.equation)))?;
            let slot = eq
                .terms
                .get_mut(c.term)
                .ok_or_else(|| Error::Table(format!("no term {} in equation {}", c.term, c.equation)))?;
            *slot = parse_term(&c.replacement)?;
            eq.erratum = None;
        }
        Ok(PdeSystem { general, corrected, m0 })
    }

    pub fn equations(&self, variant: PdeVariant) -> &[PdeEquation] {
        match variant {
            PdeVariant::Corrected => &self.corrected,
            PdeVariant::Printed => &self.general,
            PdeVariant::PrintedM0 => &self.m0,
        }
    }
}

pub fn pde_system() -> &'static PdeSystem {
    static SYSTEM: OnceLock<PdeSystem> = OnceLock::new();
    SYSTEM.get_or_init(|| PdeSystem::parse(SYSTEM_SOURCE).expect("bundled Killing system parses"))
}

/// Residuals of the 28 equations at `q`.
pub fn pde_residuals_with<F: FrameField>(
    field: &F,
    q: &CoordPoint,
    p: &ModelParams,
    variant: PdeVariant,
) -> Result<[f64; 28]> {
    check_domain(q, p)?;
    let x = q.to_array();
    let (f, df) = jet(&x, |qd: &[Dual<f64>; DIM]| field.coeffs(qd, p).to_vec());
    let env = Env::new(q, p);
    let mut out = [0.0; 28];
    for (slot, eq) in out.iter_mut().zip(pde_system().equations(variant)) {
        let mut acc = 0.0;
        for t in &eq.terms {
            let v = match t.op {
                Operator::Partial(i) => df[t.field][i],
                Operator::Value => f[t.field],
            };
            acc += t.coeff.eval(&env)? * v;
        }
        *slot = acc;
    }
    Ok(out)
}

pub fn pde_residuals<F: FrameField>(field: &F, q: &CoordPoint, p: &ModelParams) -> Result<[f64; 28]> {
    pde_residuals_with(field, q, p, PdeVariant::Corrected)
}

/// `max_k |E_k - kappa K(a, b)|`, where equation `k` expresses the Killing
/// component `(a, b)` and `kappa` is 1/2 on the diagonal. The equations drop
/// `d_r f_1`, `d_s f_2`, `d_t f_3` from the diagonal entries, so the match is
/// entrywise only for fields whose vertical components do not depend on
/// `r, s, t` (see [`random_field`]).
pub fn pde_killing_gap<F: FrameField>(field: &F, q: &CoordPoint, p: &ModelParams, variant: PdeVariant) -> Result<f64> {
    let k = killing_residual(field, q, p)?;
    let r = pde_residuals_with(field, q, p, variant)?;
    let mut worst: f64 = 0.0;
    for (v, eq) in r.iter().zip(pde_system().equations(variant)) {
        let (a, b) = (eq.pair[0] - 1, eq.pair[1] - 1);
        let kappa = if a == b { 0.5 } else { 1.0 };
        worst = worst.max((v - kappa * k[a][b]).abs());
    }
    Ok(worst)
}

/// A random field of degree at most 2 with coefficients in `[-1, 1]`; the
/// vertical components `f_1..f_3` involve only `w, x, y, z`.
pub fn random_field(rng: &mut impl rand::Rng) -> PolyVectorField {
    let mut f: [Poly; DIM] = Default::default();
    for (a, poly) in f.iter_mut().enumerate() {
        let allowed = |i: usize| a >= 3 || i >= 3;
        poly.add_term([0; DIM], rng.random_range(-1.0..=1.0));
        for i in (0..DIM).filter(|&i| allowed(i)) {
            let mut e = [0u8; DIM];
            e[i] = 1;
            poly.add_term(e, rng.random_range(-1.0..=1.0));
            for j in (i..DIM).filter(|&j| allowed(j)) {
                let mut e2 = e;
                e2[j] += 1;
                poly.add_term(e2, rng.random_range(-1.0..=1.0));
            }
        }
    }
    PolyVectorField { f }
}

// ---------------------------------------------------------------------------
// The m = 0 family

pub const PARAM_NAMES: [&str; 13] = ["M", "N", "P", "Q", "R", "S", "T", "U", "V", "W", "C1", "C2", "C3"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct KillingParamsM0 {
    pub M: f64,
    pub N: f64,
    pub P: f64,
    pub Q: f64,
    pub R: f64,
    pub S: f64,
    pub T: f64,
    pub U: f64,
    pub V: f64,
    pub W: f64,
    pub C1: f64,
    pub C2: f64,
    pub C3: f64,
}

impl KillingParamsM0 {
    pub fn from_array(v: [f64; 13]) -> Self {
        KillingParamsM0 {
            M: v[0],
            N: v[1],
            P: v[2],
            Q: v[3],
            R: v[4],
            S: v[5],
            T: v[6],
            U: v[7],
            V: v[8],
            W: v[9],
            C1: v[10],
            C2: v[11],
            C3: v[12],
        }
    }

    /// The field with parameter `index` (in [`PARAM_NAMES`] order) set to one.
    pub fn unit(index: usize) -> Self {
        let mut v = [0.0; 13];
        v[index] = 1.0;
        Self::from_array(v)
    }

    /// The closed-form coefficient functions for twist `l`.
    pub fn field(&self, l: f64) -> PolyVectorField {
        use crate::manifold::{R as IR, S as IS, T as IT, W as IW, X as IX, Y as IY, Z as IZ};
        let v = Poly::var;
        let c = Poly::constant;
        let (r, s, t, w, x, y, z) = (v(IR), v(IS), v(IT), v(IW), v(IX), v(IY), v(IZ));
        let sq = |a: &Poly, b: &Poly| a.clone() * a.clone() + b.clone() * b.clone();
        let pr = |a: &Poly, b: &Poly| a.clone() * b.clone();
        let k = self;
        let h = 0.5 * l;

        let f1 = s.clone().scale(k.P + k.R)
            + t.clone().scale(k.S - k.N)
            + (sq(&w, &x).scale(-k.M)
                + sq(&y, &z).scale(-k.U)
                + (pr(&w, &y) + pr(&x, &z)).scale(k.R - k.P)
                + (pr(&w, &z) - pr(&x, &y)).scale(k.N + k.S)
                + w.clone().scale(2.0 * k.T)
                + x.clone().scale(-2.0 * k.Q)
                + y.clone().scale(2.0 * k.W)
                + z.clone().scale(-2.0 * k.V))
            .scale(h)
            + c(k.C1);
        let f2 = r.clone().scale(-(k.P + k.R))
            + t.clone().scale(k.M + k.U)
            - (sq(&w, &y).scale(k.N)
                - sq(&x, &z).scale(k.S)
                + (pr(&w, &x) - pr(&y, &z)).scale(k.R - k.P)
                + (pr(&w, &z) + pr(&x, &y)).scale(k.M - k.U)
                + w.clone().scale(-2.0 * k.V)
                + x.clone().scale(2.0 * k.W)
                + y.clone().scale(2.0 * k.Q)
                + z.clone().scale(-2.0 * k.T))
            .scale(h)
            + c(k.C2);
        let f3 = r.clone().scale(-(k.S - k.N))
            + s.clone().scale(-(k.M + k.U))
            - (sq(&w, &z).scale(k.P)
                + sq(&x, &y).scale(k.R)
                + (pr(&w, &x) + pr(&y, &z)).scale(k.N + k.S)
                + (pr(&w, &y) - pr(&x, &z)).scale(k.U - k.M)
                + w.clone().scale(-2.0 * k.W)
                + x.clone().scale(-2.0 * k.V)
                + y.clone().scale(2.0 * k.T)
                + z.clone().scale(2.0 * k.Q))
            .scale(h)
            + c(k.C3);
        let f4 = x.clone().scale(k.M) + y.clone().scale(k.N) + z.clone().scale(k.P) + c(k.Q);
        let f5 = w.clone().scale(-k.M) + y.clone().scale(k.R) + z.clone().scale(k.S) + c(k.T);
        let f6 = w.clone().scale(-k.N) + x.clone().scale(-k.R) + z.clone().scale(k.U) + c(k.V);
        let f7 = w.scale(-k.P) + x.scale(-k.S) + y.scale(-k.U) + c(k.W);
        PolyVectorField { f: [f1, f2, f3, f4, f5, f6, f7] }
    }
}

/// The 13 unit-parameter fields, in [`PARAM_NAMES`] order.
pub fn killing_basis_m0(l: f64) -> Vec<PolyVectorField> {
    (0..13).map(|i| KillingParamsM0::unit(i).field(l)).collect()
}

pub const RANK_REL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub rows: usize,
    pub fields: usize,
}

/// Numerical rank of the point-evaluation matrix (one column per field, seven
/// rows per point). Fails with `InsufficientSamples` when there are fewer
/// rows than fields, reporting the rank that was found.
pub fn basis_rank(basis: &[PolyVectorField], points: &[CoordPoint]) -> Result<RankReport> {
    let rows = DIM * points.len();
    let fields = basis.len();
    let mut m = DMatrix::<f64>::zeros(rows.max(1), fields.max(1));
    for (pi, q) in points.iter().enumerate() {
        for (j, field) in basis.iter().enumerate() {
            for (a, v) in field.eval(q).into_iter().enumerate() {
                m[(pi * DIM + a, j)] = v;
            }
        }
    }
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let rank = if top == 0.0 { 0 } else { sv.iter().filter(|&&s| s > RANK_REL_TOL * top).count() };
    if rows < fields {
        return Err(Error::InsufficientSamples { rows, fields, rank });
    }
    Ok(RankReport { rank, rows, fields })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: [f64; 7]) -> CoordPoint {
        CoordPoint::from_array(c)
    }

    const Q0: [f64; 7] = [0.2, -0.1, 0.35, 0.3, -0.25, 0.15, 0.4];

    #[test]
    fn vertical_frame_fields_are_killing() {
        let p = ModelParams::new(0.8, -1.3);
        for a in 1..=3 {
            let k = killing_residual(&PolyVectorField::frame(a), &pt(Q0), &p).unwrap();
            assert!(max_abs_matrix(&k) < 1e-14);
        }
    }

    #[test]
    fn x4_is_not_killing() {
        let k = killing_residual(&PolyVectorField::frame(4), &CoordPoint::ORIGIN, &ModelParams::HEISENBERG).unwrap();
        assert!((k[0][4] - 1.0).abs() < 1e-14);
        assert_eq!(k[0][4], k[4][0]);
    }

    #[test]
    fn x2_solves_all_equations() {
        let r = pde_residuals(&PolyVectorField::frame(2), &pt(Q0), &ModelParams::new(0.6, 1.4)).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn f5_equal_w_hits_equation_20() {
        let mut f: [Poly; DIM] = Default::default();
        f[4] = Poly::var(crate::manifold::W);
        let r = pde_residuals(&PolyVectorField { f }, &pt(Q0), &ModelParams::HEISENBERG).unwrap();
        assert!((r[19] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn basis_parameters_map_to_expected_terms() {
        let c1 = KillingParamsM0::unit(10).field(1.0);
        assert_eq!(c1, PolyVectorField::frame(1));
        let q = KillingParamsM0::unit(3).field(2.0);
        let mut ex = [0u8; DIM];
        ex[crate::manifold::X] = 1;
        assert_eq!(q.f[0].0.get(&ex), Some(&-2.0));
        assert_eq!(q.f[3], Poly::constant(1.0));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let field = KillingParamsM0::unit(0).field(1.0);
        let text = serde_json::to_string(&field).unwrap();
        assert!(text.contains("\"0,0,0,0,1,0,0\""));
        let back: PolyVectorField = serde_json::from_str(&text).unwrap();
        assert_eq!(back, field);
        let cubic = r#"{"coefficients":[{"0,0,0,3,0,0,0":1.0},{},{},{},{},{},{}]}"#;
        assert!(serde_json::from_str::<PolyVectorField>(cubic).is_err());
        let short = r#"{"coefficients":[{"0,0,1":1.0},{},{},{},{},{},{}]}"#;
        assert!(serde_json::from_str::<PolyVectorField>(short).is_err());
    }

    #[test]
    fn rank_of_single_point_is_flagged() {
        let basis = killing_basis_m0(1.0);
        match basis_rank(&basis, &[CoordPoint::ORIGIN]) {
            Err(Error::InsufficientSamples { rank, .. }) => assert!(rank <= 7),
            other => panic!("{other:?}"),
        }
    }
}
