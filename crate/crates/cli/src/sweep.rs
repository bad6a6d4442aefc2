//! Parameter sweeps over regular simplices.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use simplex_volume::simplex_geometry::{RegularSimplexSpec, SideLength};
use simplex_volume::volume_engine::{volume, VolumeRequest, DEFAULT_TOLERANCE};
use simplex_volume::Error;

use crate::{Method, RunManifest, EXIT_DOMAIN, EXIT_TOLERANCE};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SweepFormat {
    Csv,
    Json,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("grid").required(true).args(["ells", "ell_from", "dims"]))]
pub struct SweepArgs {
    /// Dimension for side-length sweeps.
    #[arg(long, value_name = "D")]
    d: Option<usize>,
    /// Sectional curvature (negative).
    #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
    kappa: f64,
    /// Comma separated side lengths; `inf` for the ideal simplex. May be empty.
    #[arg(long, value_name = "LIST", requires = "d")]
    ells: Option<String>,
    /// First side length of a generated grid.
    #[arg(long, requires_all = ["ell_to", "points", "d"])]
    ell_from: Option<f64>,
    /// Last side length of a generated grid.
    #[arg(long)]
    ell_to: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value = "lin")]
    spacing: Spacing,
    /// Comma separated dimensions, sweeping d at fixed --ell.
    #[arg(long, value_name = "LIST")]
    dims: Option<String>,
    /// Side length for dimension sweeps.
    #[arg(long, default_value = "inf")]
    ell: String,
    /// Relative tolerance on each volume.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, value_enum, default_value = "split")]
    method: Method,
    #[arg(long, value_enum, default_value = "csv")]
    format: SweepFormat,
    /// Write the table here instead of stdout.
    #[arg(long, short)]
    output: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy)]
enum Axis {
    SideLength,
    Dimension,
}

#[derive(Serialize)]
struct Row {
    param: String,
    volume: Option<f64>,
    abs_error: Option<f64>,
    residual_imag: Option<f64>,
    status: String,
    monotone: &'static str,
}

/// Printed parameter, its numeric key, and the simplex to evaluate.
type Case = (String, f64, Result<RegularSimplexSpec, Error>);

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect()
}

fn side_grid(a: &SweepArgs) -> Result<Vec<SideLength>, Error> {
    if let Some(list) = &a.ells {
        return split_list(list).into_iter().map(SideLength::parse).collect();
    }
    let (lo, hi, n) = (a.ell_from.unwrap_or_default(), a.ell_to.unwrap_or_default(), a.points.unwrap_or_default());
    if n == 0 {
        return Ok(Vec::new());
    }
    if !(lo > 0.0 && hi > 0.0 && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid ends must be positive and finite, got {lo} and {hi}")));
    }
    let t = |i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
    Ok((0..n)
        .map(|i| match a.spacing {
            Spacing::Lin => lo + (hi - lo) * t(i),
            Spacing::Log => lo * (hi / lo).powf(t(i)),
        })
        .map(SideLength::Finite)
        .collect())
}

fn status_of(e: &Error) -> String {
    let kind = match e {
        Error::ToleranceNotMet { .. } => "tolerance_not_met",
        Error::Divergent(_) => "divergent",
        Error::CostLimit(_) => "cost_limit",
        _ => "domain_error",
    };
    kind.to_string()
}

/// `yes` when the volume moves the expected way relative to the previous row.
fn monotone_flags(rows: &mut [Row], keys: &[f64], increasing: bool) {
    for i in 0..rows.len() {
        if i == 0 {
            rows[i].monotone = "na";
            continue;
        }
        let (Some(v0), Some(v1)) = (rows[i - 1].volume, rows[i].volume) else {
            rows[i].monotone = "na";
            continue;
        };
        let e = rows[i - 1].abs_error.unwrap_or(0.0) + rows[i].abs_error.unwrap_or(0.0);
        let dk = keys[i] - keys[i - 1];
        let dv = v1 - v0;
        let ok = if dk == 0.0 || keys[i].is_infinite() && keys[i - 1].is_infinite() {
            dv.abs() <= e
        } else {
            let want = if (dk > 0.0) == increasing { 1.0 } else { -1.0 };
            dv * want >= -e
        };
        rows[i].monotone = if ok { "yes" } else { "no" };
    }
}

fn render_csv(m: &RunManifest, rows: &[Row]) -> String {
    let mut out = String::new();
    writeln!(out, "# {}", serde_json::to_string(m).expect("serializable")).unwrap();
    writeln!(out, "param,volume,abs_error,residual_imag,status,monotone").unwrap();
    let f = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.param,
            f(r.volume),
            f(r.abs_error),
            f(r.residual_imag),
            r.status,
            r.monotone
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct JsonTable<'a> {
    manifest: &'a RunManifest,
    rows: &'a [Row],
}

pub fn run(a: SweepArgs) -> ExitCode {
    let start = Instant::now();
    let (axis, cases): (Axis, Result<Vec<Case>, Error>) =
        if let Some(list) = &a.dims {
            let ell = SideLength::parse(&a.ell);
            let cases = ell.and_then(|ell| {
                split_list(list)
                    .into_iter()
                    .map(|t| {
                        let d: usize = t
                            .parse()
                            .map_err(|_| Error::InvalidParameter(format!("cannot parse dimension '{t}'")))?;
                        Ok((d.to_string(), d as f64, RegularSimplexSpec::new(d, ell, a.kappa)))
                    })
                    .collect()
            });
            (Axis::Dimension, cases)
        } else {
            let d = a.d.unwrap_or_default();
            let cases = side_grid(&a).map(|g| {
                g.into_iter()
                    .map(|l| {
                        let key = match l {
                            SideLength::Finite(x) => x,
                            SideLength::Ideal => f64::INFINITY,
                        };
                        (l.to_string(), key, RegularSimplexSpec::new(d, l, a.kappa))
                    })
                    .collect()
            });
            (Axis::SideLength, cases)
        };
    let cases = match cases {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_DOMAIN);
        }
    };

    let mut m = RunManifest::new("sweep")
        .param("kappa", a.kappa)
        .param("method", format!("{:?}", a.method).to_lowercase())
        .tolerance("volume_rel", a.tol);
    m = match axis {
        Axis::SideLength => m.param("axis", "ell").param("d", a.d.unwrap_or_default()),
        Axis::Dimension => m.param("axis", "d").param("ell", &a.ell),
    };
    m = m.param("grid", cases.iter().map(|c| c.0.as_str()).collect::<Vec<_>>().join(","));

    let tol = a.tol;
    let method = a.method.into();
    let mut rows: Vec<Row> = cases
        .par_iter()
        .map(|(param, _, spec)| {
            let r = spec.clone().and_then(|s| volume(&VolumeRequest::regular(s).tolerance(tol).method(method)));
            match r {
                Ok(v) => Row {
                    param: param.clone(),
                    volume: Some(v.volume),
                    abs_error: Some(v.abs_error),
                    residual_imag: Some(v.residual_imag),
                    status: "ok".into(),
                    monotone: "na",
                },
                Err(e) => Row {
                    param: param.clone(),
                    volume: None,
                    abs_error: None,
                    residual_imag: None,
                    status: status_of(&e),
                    monotone: "na",
                },
            }
        })
        .collect();
    let keys: Vec<f64> = cases.iter().map(|c| c.1).collect();
    // Hyperbolic volumes grow with the side length and shrink with the dimension.
    monotone_flags(&mut rows, &keys, matches!(axis, Axis::SideLength));

    let text = match a.format {
        SweepFormat::Csv => render_csv(&m, &rows),
        SweepFormat::Json => {
            serde_json::to_string_pretty(&JsonTable { manifest: &m, rows: &rows }).expect("serializable") + "\n"
        }
    };
    if let Some(path) = &a.output {
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_DOMAIN);
        }
    } else {
        print!("{text}");
    }
    eprintln!("wall_time_ms {}", start.elapsed().as_millis());

    let failed: Vec<&Row> = rows.iter().filter(|r| r.status != "ok").collect();
    if let Some(first) = failed.first() {
        eprintln!("{} of {} rows failed, first at {} ({})", failed.len(), rows.len(), first.param, first.status);
        return ExitCode::from(EXIT_TOLERANCE);
    }
    ExitCode::SUCCESS
}
