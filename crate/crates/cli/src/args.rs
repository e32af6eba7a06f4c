use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "secst",
    version,
    about = "Photon-added coherent states in thermal noise: density matrix, statistics, capacity and Wigner data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fock-basis density matrix, one row per element.
    Matrix(MatrixArgs),
    /// Photon-number distribution.
    Pnd(MatrixArgs),
    /// Mandel Q over an (n̄_t, |α|) grid.
    QSurface(QSurfaceArgs),
    /// Actual entropy, maximum entropy and information over an (n̄_t, |α|) grid.
    Capacity(CapacityArgs),
    /// Wigner function on a rectangular phase-space grid.
    Wigner(WignerArgs),
    /// Quadrature marginal distribution along one axis.
    Marginal(MarginalArgs),
    /// Cross-check closed forms against the quadrature oracle on random draws.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exit with status 2 if any truncation or convergence warning is raised.
    #[arg(long)]
    #[serde(skip)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_im: f64,
    /// Number of added photons.
    #[arg(long = "m", default_value_t = 0)]
    pub m: usize,
    /// Mean thermal photon number.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nbar: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Largest Fock index; chosen from the trace tail when omitted.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QSurfaceArgs {
    #[arg(long = "m", default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub nbar_max: f64,
    /// Points per axis, both ends included.
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CapacityArgs {
    /// Comma-separated photon-addition numbers.
    #[arg(long = "m", value_delimiter = ',', default_value = "0,1,2")]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub alpha_max: f64,
    /// Sweep n̄_t only, at this fixed |α|.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub nbar_max: f64,
    /// Points per axis; the n̄_t axis starts one step above zero.
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, default_value_t = 70)]
    pub nmax: usize,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WignerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub y_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub y_max: f64,
    #[arg(long, default_value_t = 101)]
    pub nx: usize,
    #[arg(long, default_value_t = 101)]
    pub ny: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MarginalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value_t = Axis::X)]
    pub axis: Axis,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub max: f64,
    #[arg(long, default_value_t = 81)]
    pub points: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 25)]
    pub cases: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Fock cutoff for the matrix-versus-quadrature comparison.
    #[arg(long, default_value_t = 30)]
    pub nmax: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Matrix(_) => "matrix",
            Command::Pnd(_) => "pnd",
            Command::QSurface(_) => "q-surface",
            Command::Capacity(_) => "capacity",
            Command::Wigner(_) => "wigner",
            Command::Marginal(_) => "marginal",
            Command::Verify(_) => "verify",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Matrix(a) | Command::Pnd(a) => &a.out,
            Command::QSurface(a) => &a.out,
            Command::Capacity(a) => &a.out,
            Command::Wigner(a) => &a.out,
            Command::Marginal(a) => &a.out,
            Command::Verify(a) => &a.out,
        }
    }

    /// Command arguments as echoed into output metadata.
    pub fn config(&self) -> serde_json::Value {
        let value = match self {
            Command::Matrix(a) | Command::Pnd(a) => serde_json::to_value(a),
            Command::QSurface(a) => serde_json::to_value(a),
            Command::Capacity(a) => serde_json::to_value(a),
            Command::Wigner(a) => serde_json::to_value(a),
            Command::Marginal(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        };
        value.expect("argument structs serialize")
    }
}
