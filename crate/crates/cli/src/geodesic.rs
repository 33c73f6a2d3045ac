use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use ebcv::geodesic::{
    circle_check, closed_form_geodesic, integrate, unit_speed, ClosedFormInput, CotangentState, GeodesicMode,
    Trajectory, CSV_HEADER, STATE_DIM,
};
use ebcv::sampling::{self, sample_points};
use ebcv::Error;
use rand::Rng;
use serde::Serialize;

use crate::{params, CliError, CliResult, TrajectoryFormat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Heisenberg,
    Subriemannian,
    Riemannian,
}

impl From<ModeArg> for GeodesicMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Heisenberg => GeodesicMode::Heisenberg,
            ModeArg::Subriemannian => GeodesicMode::Subriemannian,
            ModeArg::Riemannian => GeodesicMode::Riemannian,
        }
    }
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Heisenberg)]
    pub mode: ModeArg,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub m: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub l: f64,
    /// Initial state `r,s,t,w,x,y,z,pr,ps,pt,pw,px,py,pz`; zeros by default.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub init: Option<Vec<f64>>,
    /// Override one initial component, e.g. `--set pw=1`.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    pub set: Vec<String>,
    /// Draw a unit-speed initial state from this seed instead.
    #[arg(long, conflicts_with_all = ["init", "set"])]
    pub random_seed: Option<u64>,
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TrajectoryFormat::Csv)]
    pub format: TrajectoryFormat,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicSummary {
    pub mode: &'static str,
    pub steps: usize,
    pub h: f64,
    pub energy_drift: f64,
    pub verdict: String,
    /// Max coordinate deviation of the last sample from the closed form
    /// (Heisenberg mode only).
    pub closed_form_deviation: Option<f64>,
}

impl std::fmt::Display for GeodesicSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} steps={} h={}: H drift {:.3e}; {}", self.mode, self.steps, self.h, self.energy_drift, self.verdict)?;
        if let Some(d) = self.closed_form_deviation {
            write!(f, "; closed-form endpoint deviation {d:.3e}")?;
        }
        Ok(())
    }
}

fn initial_state(args: &GeodesicArgs) -> CliResult<CotangentState> {
    let p = params(args.m, args.l)?;
    let mode: GeodesicMode = args.mode.into();
    if let Some(seed) = args.random_seed {
        let q = sample_points(&p, 1, seed)?[0];
        let mut rng = sampling::rng(seed.wrapping_add(1));
        let s = CotangentState::new(q, std::array::from_fn(|_| rng.random_range(-1.0..=1.0)));
        return Ok(unit_speed(&s, &p, mode)?);
    }
    let mut x = [0.0; STATE_DIM];
    if let Some(v) = &args.init {
        if v.len() != STATE_DIM {
            return Err(CliError::Usage(format!("--init needs {STATE_DIM} values, got {}", v.len())));
        }
        x.copy_from_slice(v);
    }
    for item in &args.set {
        let (name, value) = item.split_once('=').ok_or_else(|| CliError::Usage(format!("expected NAME=VALUE, got {item:?}")))?;
        let slot = CSV_HEADER[1..=STATE_DIM]
            .iter()
            .position(|h| *h == name.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown component {name:?}")))?;
        x[slot] = value.trim().parse().map_err(|_| CliError::Usage(format!("bad value in {item:?}")))?;
    }
    Ok(CotangentState::from_array(x))
}

pub fn summarize(traj: &Trajectory, init: &CotangentState) -> CliResult<GeodesicSummary> {
    let verdict = match circle_check(traj) {
        Ok(v) => v.to_string(),
        Err(Error::TooFewSamples { got, need }) => format!("no verdict ({got} samples, need {need})"),
        Err(e) => return Err(e.into()),
    };
    let closed_form_deviation = if traj.mode == GeodesicMode::Heisenberg {
        let last = traj.last();
        let exact = closed_form_geodesic(&ClosedFormInput::from_state(init), last.u)?;
        Some(last.state.q.to_array().iter().zip(exact.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    } else {
        None
    };
    Ok(GeodesicSummary {
        mode: traj.mode.name(),
        steps: traj.samples.len() - 1,
        h: traj.step,
        energy_drift: traj.energy_drift(),
        verdict,
        closed_form_deviation,
    })
}

pub fn to_csv(traj: &Trajectory) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in traj.rows() {
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("formatted floats are ASCII"))
}

#[derive(Serialize)]
struct JsonTrajectory<'a> {
    mode: &'static str,
    m: f64,
    l: f64,
    h: f64,
    columns: [&'static str; 16],
    rows: Vec<[f64; 16]>,
    summary: Option<&'a GeodesicSummary>,
}

pub fn to_json(traj: &Trajectory, summary: Option<&GeodesicSummary>) -> CliResult<String> {
    let doc = JsonTrajectory {
        mode: traj.mode.name(),
        m: traj.params.m,
        l: traj.params.l,
        h: traj.step,
        columns: CSV_HEADER,
        rows: traj.rows().collect(),
        summary,
    };
    Ok(serde_json::to_string(&doc)? + "\n")
}

fn write_trajectory(args: &GeodesicArgs, traj: &Trajectory, summary: Option<&GeodesicSummary>) -> CliResult<()> {
    if let Some(path) = &args.out {
        let text = match args.format {
            TrajectoryFormat::Csv => to_csv(traj)?,
            TrajectoryFormat::Json => to_json(traj, summary)?,
        };
        std::fs::write(path, text)?;
    }
    Ok(())
}

/// Integrate, write the trajectory if requested, and print the summary line.
pub fn run(args: &GeodesicArgs, stdout: &mut dyn Write) -> CliResult<GeodesicSummary> {
    let p = params(args.m, args.l)?;
    let init = initial_state(args)?;
    let traj = match integrate(&init, &p, args.mode.into(), args.h, args.n) {
        Ok(t) => t,
        Err(Error::DomainExit { step, partial }) => {
            write_trajectory(args, &partial, None)?;
            return Err(Error::DomainExit { step, partial }.into());
        }
        Err(e) => return Err(e.into()),
    };
    let summary = summarize(&traj, &init)?;
    write_trajectory(args, &traj, Some(&summary))?;
    writeln!(stdout, "{summary}")?;
    Ok(summary)
}
