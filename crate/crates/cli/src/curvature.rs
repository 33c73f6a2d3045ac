use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use ebcv::manifold::{
    connection_table, frame_matrix, k_factor, ricci_frame, riemann_frame, scalar_curvature,
    structure_constants_table,
};
use ebcv::tensor::DIM;
use ebcv::CoordPoint;
use serde::Serialize;

use crate::{emit, params, CliError, CliResult};

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub m: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub l: f64,
    /// `r,s,t,w,x,y,z`; the origin by default.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub point: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Frame data at one point. Matrices are row-major with 0-based storage;
/// labels in the keys are 1-based.
#[derive(Debug, Serialize)]
pub struct CurvatureDocument {
    pub m: f64,
    pub l: f64,
    pub point: CoordPoint,
    #[serde(rename = "K")]
    pub k: f64,
    /// `frame[mu][a]`: coordinate `mu` of `X_a`.
    pub frame: Vec<[f64; DIM]>,
    /// `brackets[a][b][c]`: `X_c` coefficient of `[X_a, X_b]`.
    pub brackets: Vec<Vec<[f64; DIM]>>,
    /// `connection[a][b][c]`: `X_c` coefficient of `nabla_{X_a} X_b`.
    pub connection: Vec<Vec<[f64; DIM]>>,
    /// `sectional[a][b] = R(X_a, X_b, X_a, X_b)`.
    pub sectional: Vec<[f64; DIM]>,
    pub ricci: Vec<[f64; DIM]>,
    pub scalar: f64,
}

pub fn document(m: f64, l: f64, point: &CoordPoint) -> CliResult<CurvatureDocument> {
    let p = params(m, l)?;
    let k = k_factor(point, &p)?;
    let f = frame_matrix(point, &p)?;
    let c = structure_constants_table(point, &p)?;
    let g = connection_table(point, &p)?;
    let r = riemann_frame(point, &p)?;
    let ric = ricci_frame(point, &p)?;
    let cube = |t: &ebcv::tensor::Tensor3<f64>| -> Vec<Vec<[f64; DIM]>> {
        (0..DIM).map(|a| (0..DIM).map(|b| std::array::from_fn(|e| t[[a, b, e]])).collect()).collect()
    };
    Ok(CurvatureDocument {
        m,
        l,
        point: *point,
        k,
        frame: (0..DIM).map(|mu| std::array::from_fn(|a| f[(mu, a)])).collect(),
        brackets: cube(&c),
        connection: cube(&g),
        sectional: (0..DIM).map(|a| std::array::from_fn(|b| r[[a, b, a, b]])).collect(),
        ricci: (0..DIM).map(|a| std::array::from_fn(|b| ric[(a, b)])).collect(),
        scalar: scalar_curvature(point, &p)?,
    })
}

pub fn run(args: &CurvatureArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let point = match &args.point {
        None => CoordPoint::ORIGIN,
        Some(v) => CoordPoint::from_array(v.as_slice().try_into().map_err(|_| CliError::Usage("--point needs 7 values".into()))?),
    };
    let doc = document(args.m, args.l, &point)?;
    emit(&(serde_json::to_string_pretty(&doc)? + "\n"), args.out.as_ref(), stdout)
}
