use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
#[cfg(test)]
use clap::CommandFactory;
use serde::Serialize;

use simplex_volume::simplex_geometry::{OrthocentricParams, RegularSimplexSpec, SideLength};
use simplex_volume::volume_engine::{volume, Branch, FMethod, Precision, VolumeRequest, VolumeResult, DEFAULT_TOLERANCE};
use simplex_volume::Error;

mod sweep;
mod verify;

const THREADS_ENV: &str = "SIMPLEX_VOLUME_THREADS";

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_TOLERANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "simplex-volume", version, about = "Volumes of hyperbolic and spherical simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one volume.
    Volume(VolumeArgs),
    /// Tabulate regular simplex volumes over side lengths or dimensions.
    Sweep(sweep::SweepArgs),
    /// Run an invariant or oracle suite.
    Verify(verify::VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    /// Rotated split terms, with double-double fallback.
    Split,
    /// Head quadrature plus integration-by-parts tail.
    Rays,
}

impl From<Method> for FMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Split => FMethod::Split,
            Method::Rays => FMethod::RayQuadrature,
        }
    }
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("geometry").required(true).args(["regular", "ideal", "orthocentric"]))]
struct VolumeArgs {
    /// Regular simplex of this dimension; needs --ell.
    #[arg(long, value_name = "D", requires = "ell")]
    regular: Option<usize>,
    /// Side length of the regular simplex, or `inf`.
    #[arg(long, value_name = "L")]
    ell: Option<String>,
    /// Ideal regular simplex of this dimension.
    #[arg(long, value_name = "D")]
    ideal: Option<usize>,
    /// Orthocentric parameters tau_0,...,tau_d.
    #[arg(long, value_name = "TAUS", value_delimiter = ',', allow_negative_numbers = true)]
    orthocentric: Option<Vec<f64>>,
    /// Sectional curvature.
    #[arg(long, allow_negative_numbers = true)]
    kappa: f64,
    /// Relative tolerance on the volume.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Use F_- and the (1+i) ray for hyperbolic cases.
    #[arg(long)]
    lower_branch: bool,
    #[arg(long, value_enum, default_value = "split")]
    method: Method,
}

/// Provenance block written with every result.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub tolerances: BTreeMap<String, f64>,
    /// Omitted from data files so that they are byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.parameters.insert(k.to_string(), v.to_string());
        self
    }

    pub fn tolerance(mut self, k: &str, v: f64) -> Self {
        self.tolerances.insert(k.to_string(), v);
        self
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ToleranceNotMet { .. } | Error::Divergent(_) | Error::CostLimit(_) => EXIT_TOLERANCE,
        _ => EXIT_DOMAIN,
    }
}

pub fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::UpperRay => "upper",
        Branch::LowerRay => "lower",
        Branch::RealAxis => "real",
    }
}

pub fn precision_name(p: Precision) -> &'static str {
    match p {
        Precision::Double => "double",
        Precision::DoubleDouble => "double-double",
        Precision::Exact => "exact",
    }
}

fn build_request(a: &VolumeArgs) -> Result<VolumeRequest, Error> {
    let req = if let Some(d) = a.regular {
        let ell = SideLength::parse(a.ell.as_deref().unwrap_or_default())?;
        VolumeRequest::regular(RegularSimplexSpec::new(d, ell, a.kappa)?)
    } else if let Some(d) = a.ideal {
        if a.kappa >= 0.0 {
            return Err(if a.kappa == 0.0 {
                Error::ZeroCurvature
            } else {
                Error::InvalidParameter(format!("ideal simplices need kappa < 0, got {}", a.kappa))
            });
        }
        VolumeRequest::ideal(d, a.kappa)
    } else {
        let taus = a.orthocentric.clone().unwrap_or_default();
        VolumeRequest::orthocentric(OrthocentricParams::new(taus)?, a.kappa)
    };
    Ok(req.tolerance(a.tol).lower_branch(a.lower_branch).method(a.method.into()))
}

fn volume_manifest(a: &VolumeArgs) -> RunManifest {
    let mut m = RunManifest::new("volume").param("kappa", a.kappa).param("method", format!("{:?}", a.method).to_lowercase());
    if let Some(d) = a.regular {
        m = m.param("regular", d).param("ell", a.ell.as_deref().unwrap_or(""));
    }
    if let Some(d) = a.ideal {
        m = m.param("ideal", d);
    }
    if let Some(t) = &a.orthocentric {
        m = m.param("orthocentric", t.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
    }
    if a.lower_branch {
        m = m.param("lower_branch", true);
    }
    m.tolerance("volume_rel", a.tol)
}

#[derive(Serialize)]
struct VolumeOutput<'a> {
    manifest: &'a RunManifest,
    volume: f64,
    abs_error: f64,
    residual_imag: f64,
    branch: &'static str,
    precision: &'static str,
    condition: f64,
}

fn print_volume(m: &RunManifest, r: &VolumeResult, format: Format) {
    match format {
        Format::Json => {
            let out = VolumeOutput {
                manifest: m,
                volume: r.volume,
                abs_error: r.abs_error,
                residual_imag: r.residual_imag,
                branch: branch_name(r.branch),
                precision: precision_name(r.precision),
                condition: r.condition,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        Format::Csv => {
            println!("# {}", serde_json::to_string(m).expect("serializable"));
            println!("volume,abs_error,residual_imag,branch,precision,condition");
            println!(
                "{:e},{:e},{:e},{},{},{:e}",
                r.volume,
                r.abs_error,
                r.residual_imag,
                branch_name(r.branch),
                precision_name(r.precision),
                r.condition
            );
        }
        Format::Text => {
            println!("volume        {:.15e} +- {:.2e}", r.volume, r.abs_error);
            println!("residual_imag {:.2e}", r.residual_imag);
            println!("branch        {}", branch_name(r.branch));
            println!("precision     {}", precision_name(r.precision));
            println!("condition     {:.3e}", r.condition);
        }
    }
}

fn cmd_volume(a: VolumeArgs) -> ExitCode {
    let start = Instant::now();
    let m = volume_manifest(&a);
    let res = build_request(&a).and_then(|req| volume(&req));
    eprintln!("wall_time_ms {}", start.elapsed().as_millis());
    match res {
        Ok(r) => {
            print_volume(&m, &r, a.format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn configure_threads() {
    let Ok(v) = std::env::var(THREADS_ENV) else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not set thread count: {e}");
            }
        }
        _ => eprintln!("warning: ignoring {THREADS_ENV}={v}, expected a positive integer"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match cli.command {
        Command::Volume(a) => cmd_volume(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Verify(a) => verify::run(a),
    }
}
