//! Published closed-form tables, loaded from `data/reference_tables.toml`.
//!
//! Entries are stored verbatim as expression strings (typos included) and
//! evaluated with `evalexpr`, so that each one can be compared against the
//! exact-differentiation oracle rather than trusted.

use std::sync::OnceLock;

use evalexpr::{
    build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node,
    Value,
};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::manifold::{CoordPoint, FrameVector, ModelParams};
use crate::tensor::DIM;

const SOURCE: &str = include_str!("../data/reference_tables.toml");

/// A parsed expression in `w, x, y, z, m, l, K, A, B`.
#[derive(Clone, Debug)]
pub struct Expr {
    text: String,
    tree: Node<DefaultNumericTypes>,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self> {
        let tree = build_operator_tree::<DefaultNumericTypes>(&floatify(text))
            .map_err(|e| Error::Table(format!("{text:?}: {e}")))?;
        Ok(Expr { text: text.to_string(), tree })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn eval(&self, env: &Env) -> Result<f64> {
        self.tree
            .eval_number_with_context(&env.0)
            .map_err(|e| Error::Table(format!("{:?}: {e}", self.text)))
    }
}

/// Rewrite integer literals as floats so that `3/2` means 1.5.
fn floatify(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() + 8);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let starts_literal = c.is_ascii_digit()
            && (i == 0 || !(chars[i - 1].is_alphanumeric() || chars[i - 1] == '_' || chars[i - 1] == '.'));
        if !starts_literal {
            out.push(c);
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        out.extend(&chars[i..j]);
        if j >= chars.len() || !(chars[j] == '.' || chars[j] == 'e' || chars[j] == 'E') {
            out.push_str(".0");
        }
        i = j;
    }
    out
}

/// Variable bindings for one point and parameter pair.
pub struct Env(HashMapContext<DefaultNumericTypes>);

impl Env {
    pub fn new(q: &CoordPoint, p: &ModelParams) -> Self {
        let k = 1.0 + p.m * q.horizontal_norm2();
        let vars = [
            ("w", q.w),
            ("x", q.x),
            ("y", q.y),
            ("z", q.z),
            ("m", p.m),
            ("l", p.l),
            ("K", k),
            ("A", -p.l * p.l * (k + 1.0)),
            ("B", 12.0 * p.m - 1.5 * p.l * p.l),
        ];
        let mut ctx = HashMapContext::new();
        for (name, v) in vars {
            ctx.set_value(name.to_string(), Value::Float(v)).expect("fresh float binding");
        }
        Env(ctx)
    }
}

#[derive(Deserialize)]
struct RawFrame {
    pair: [usize; 2],
    components: [String; DIM],
    printed: String,
    erratum: Option<String>,
}

#[derive(Deserialize)]
struct RawScalar {
    #[serde(alias = "triple")]
    index: Vec<usize>,
    value: String,
    printed: String,
    erratum: Option<String>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: [[String; DIM]; DIM],
    printed: String,
}

#[derive(Deserialize)]
struct RawPlain {
    value: String,
    printed: String,
}

#[derive(Deserialize)]
struct RawTables {
    brackets_m0: Vec<RawFrame>,
    connection_m0: Vec<RawFrame>,
    curvature_m0: Vec<RawScalar>,
    ricci_m0: RawMatrix,
    brackets: Vec<RawFrame>,
    connection: Vec<RawFrame>,
    curvature: Vec<RawScalar>,
    ricci: RawMatrix,
    scalar: RawPlain,
    torsion: Vec<RawFrame>,
    cyclic_sums: Vec<RawScalar>,
}

/// A frame-valued entry such as a bracket `[X_a, X_b]`.
#[derive(Clone, Debug)]
pub struct FrameEntry {
    /// 1-based frame labels.
    pub pair: [usize; 2],
    pub components: [Expr; DIM],
    pub printed: String,
    pub erratum: Option<String>,
}

impl FrameEntry {
    pub fn eval(&self, env: &Env) -> Result<FrameVector> {
        let mut out = [0.0; DIM];
        for (slot, e) in out.iter_mut().zip(&self.components) {
            *slot = e.eval(env)?;
        }
        Ok(FrameVector(out))
    }
}

/// A scalar entry indexed by 1-based frame labels.
#[derive(Clone, Debug)]
pub struct ScalarEntry {
    pub index: Vec<usize>,
    pub value: Expr,
    pub printed: String,
    pub erratum: Option<String>,
}

#[derive(Clone, Debug)]
pub struct MatrixEntry {
    pub rows: [[Expr; DIM]; DIM],
    pub printed: String,
}

impl MatrixEntry {
    pub fn eval(&self, env: &Env) -> Result<[[f64; DIM]; DIM]> {
        let mut out = [[0.0; DIM]; DIM];
        for (row, exprs) in out.iter_mut().zip(&self.rows) {
            for (slot, e) in row.iter_mut().zip(exprs) {
                *slot = e.eval(env)?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ReferenceTables {
    pub brackets_m0: Vec<FrameEntry>,
    pub connection_m0: Vec<FrameEntry>,
    pub curvature_m0: Vec<ScalarEntry>,
    pub ricci_m0: MatrixEntry,
    pub brackets: Vec<FrameEntry>,
    pub connection: Vec<FrameEntry>,
    pub curvature: Vec<ScalarEntry>,
    pub ricci: MatrixEntry,
    pub scalar: ScalarEntry,
    pub torsion: Vec<FrameEntry>,
    pub cyclic_sums: Vec<ScalarEntry>,
}

fn array_of<T, const N: usize>(v: Vec<T>) -> [T; N] {
    v.try_into().unwrap_or_else(|_| unreachable!("length fixed by the source array"))
}

fn frames(raw: Vec<RawFrame>) -> Result<Vec<FrameEntry>> {
    raw.into_iter()
        .map(|r| {
            let comps = r.components.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>()?;
            Ok(FrameEntry { pair: r.pair, components: array_of(comps), printed: r.printed, erratum: r.erratum })
        })
        .collect()
}

fn scalars(raw: Vec<RawScalar>) -> Result<Vec<ScalarEntry>> {
    raw.into_iter()
        .map(|r| {
            Ok(ScalarEntry { index: r.index, value: Expr::parse(&r.value)?, printed: r.printed, erratum: r.erratum })
        })
        .collect()
}

fn matrix(raw: RawMatrix) -> Result<MatrixEntry> {
    let mut rows = Vec::with_capacity(DIM);
    for r in &raw.rows {
        let row = r.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>()?;
        rows.push(array_of(row));
    }
    Ok(MatrixEntry { rows: array_of(rows), printed: raw.printed })
}

impl ReferenceTables {
    pub fn parse(source: &str) -> Result<Self> {
        let raw: RawTables = toml::from_str(source).map_err(|e| Error::Table(e.to_string()))?;
        Ok(ReferenceTables {
            brackets_m0: frames(raw.brackets_m0)?,
            connection_m0: frames(raw.connection_m0)?,
            curvature_m0: scalars(raw.curvature_m0)?,
            ricci_m0: matrix(raw.ricci_m0)?,
            brackets: frames(raw.brackets)?,
            connection: frames(raw.connection)?,
            curvature: scalars(raw.curvature)?,
            ricci: matrix(raw.ricci)?,
            scalar: ScalarEntry {
                index: vec![],
                value: Expr::parse(&raw.scalar.value)?,
                printed: raw.scalar.printed,
                erratum: None,
            },
            torsion: frames(raw.torsion)?,
            cyclic_sums: scalars(raw.cyclic_sums)?,
        })
    }
}

/// The bundled tables, parsed once.
pub fn reference_tables() -> &'static ReferenceTables {
    static TABLES: OnceLock<ReferenceTables> = OnceLock::new();
    TABLES.get_or_init(|| ReferenceTables::parse(SOURCE).expect("bundled tables parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_literals_become_floats() {
        assert_eq!(floatify("-3/2*l^2"), "-3.0/2.0*l^2.0");
        assert_eq!(floatify("1.5*x2"), "1.5*x2");
        assert_eq!(floatify("2e3"), "2e3");
    }

    #[test]
    fn bundled_tables_have_expected_sizes() {
        let t = reference_tables();
        assert_eq!(t.brackets_m0.len(), 6);
        assert_eq!(t.connection_m0.len(), 28);
        assert_eq!(t.brackets.len(), 6);
        assert_eq!(t.connection.len(), 28);
        assert_eq!(t.curvature.len(), 18);
        assert_eq!(t.torsion.len(), 6);
    }

    #[test]
    fn expressions_evaluate() {
        let env = Env::new(&CoordPoint::from_array([0., 0., 0., 0., 0., 1., 0.]), &ModelParams::new(1.0, 2.0));
        let t = reference_tables();
        let v = t.torsion[0].eval(&env).unwrap();
        assert_eq!(v, FrameVector([4., 0., 0., 0., 0., 0., 0.]));
        let ric = t.ricci_m0.eval(&env).unwrap();
        assert_eq!(ric[3][3], -6.0);
        assert_eq!(t.scalar.value.eval(&env).unwrap(), 48.0);
    }
}
