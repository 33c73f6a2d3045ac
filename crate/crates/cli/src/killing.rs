use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use ebcv::killing::{killing_basis_m0, killing_residual, max_abs_matrix, PolyVectorField, PARAM_NAMES};
use ebcv::sampling::sample_points;
use ebcv::{CoordPoint, Error, ModelParams};
use serde::{Deserialize, Serialize};

use crate::{params, CliResult};

/// Residual below which a field is reported as Killing.
pub const KILLING_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Args)]
pub struct KillingArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub l: f64,
    /// Only used by `check`; the basis is the m = 0 family.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub m: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(subcommand)]
    pub action: KillingAction,
}

#[derive(Debug, Subcommand)]
pub enum KillingAction {
    /// The 13 basis fields of the m = 0 family.
    List,
    /// Check a field (or every field of a `list` document) for the Killing property.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedField {
    pub parameter: String,
    #[serde(flatten)]
    pub field: PolyVectorField,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisDocument {
    pub dimension: usize,
    pub m: f64,
    pub l: f64,
    pub fields: Vec<NamedField>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub parameter: Option<String>,
    pub max_residual: f64,
    pub witness: CoordPoint,
    pub verdict: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckDocument {
    pub m: f64,
    pub l: f64,
    pub points: usize,
    pub threshold: f64,
    pub results: Vec<CheckResult>,
}

pub fn basis_document(l: f64) -> BasisDocument {
    let fields = killing_basis_m0(l)
        .into_iter()
        .zip(PARAM_NAMES)
        .map(|(field, name)| NamedField { parameter: name.to_string(), field })
        .collect::<Vec<_>>();
    BasisDocument { dimension: fields.len(), m: 0.0, l, fields }
}

/// The origin followed by `samples` seeded points.
pub fn standard_sample(p: &ModelParams, samples: usize, seed: u64) -> CliResult<Vec<CoordPoint>> {
    let mut pts = vec![CoordPoint::ORIGIN];
    pts.extend(sample_points(p, samples, seed)?);
    Ok(pts)
}

pub fn check_field(field: &PolyVectorField, p: &ModelParams, points: &[CoordPoint]) -> CliResult<(f64, CoordPoint)> {
    let mut worst = (0.0, points[0]);
    for q in points {
        let v = max_abs_matrix(&killing_residual(field, q, p)?);
        if v > worst.0 {
            worst = (v, *q);
        }
    }
    Ok(worst)
}

/// A single field, or every field of a basis document.
pub fn parse_fields(text: &str) -> CliResult<Vec<(Option<String>, PolyVectorField)>> {
    let malformed = |e: serde_json::Error| Error::MalformedPolynomial(e.to_string());
    let value: serde_json::Value = serde_json::from_str(text).map_err(malformed)?;
    if value.get("fields").is_some() {
        let doc: BasisDocument = serde_json::from_value(value).map_err(malformed)?;
        Ok(doc.fields.into_iter().map(|f| (Some(f.parameter), f.field)).collect())
    } else {
        Ok(vec![(None, serde_json::from_value(value).map_err(malformed)?)])
    }
}

pub fn check_document(text: &str, p: &ModelParams, samples: usize, seed: u64) -> CliResult<CheckDocument> {
    let fields = parse_fields(text)?;
    let points = standard_sample(p, samples, seed)?;
    let mut results = Vec::with_capacity(fields.len());
    for (parameter, field) in fields {
        let (max_residual, witness) = check_field(&field, p, &points)?;
        let verdict = if max_residual < KILLING_THRESHOLD { "killing" } else { "not-killing" };
        results.push(CheckResult { parameter, max_residual, witness, verdict });
    }
    Ok(CheckDocument { m: p.m, l: p.l, points: points.len(), threshold: KILLING_THRESHOLD, results })
}

pub fn run(args: &KillingArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match &args.action {
        KillingAction::List => serde_json::to_string_pretty(&basis_document(args.l))?,
        KillingAction::Check { input } => {
            let source = std::fs::read_to_string(input)?;
            let doc = check_document(&source, &params(args.m, args.l)?, args.samples, args.seed)?;
            serde_json::to_string_pretty(&doc)?
        }
    };
    writeln!(stdout, "{text}")?;
    Ok(())
}
