//! The `phi-bessel` command-line front end.
//!
//! Exit codes: 0 success, 2 domain error, 3 configuration or usage error,
//! 4 convergence failure. A `check` run whose properties fail exits 1.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bessel::Order;
use crate::bounds::{phi_lower, phi_upper};
use crate::error::{Error, Result};
use crate::harness::{
    self, check, default_grid_for, default_tol_for, explore_open_problem, property_ids, Candidate,
    CheckKind, CheckReport, GridSpec, Scale,
};
use crate::phi::{phi_log_deriv, phi_with, psi_upper, MethodChoice, PhiOptions};
use crate::quadrature::max_order;

const EXIT_CHECK_FAILED: i32 = 1;
const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Parser, Debug)]
#[command(
    name = "phi-bessel",
    version,
    about = "Evaluate and verify e^{-x} x^{-nu} [I_nu(x) + I_{nu+1}(x)]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate Phi, Psi, the log-derivative and the envelope at one point.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Tabulate over a (nu, x) grid as CSV or JSON.
    #[command(allow_negative_numbers = true)]
    Tabulate {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Run registered property checks.
    #[command(allow_negative_numbers = true)]
    Check {
        /// Run every registered property.
        #[arg(long, conflicts_with = "only")]
        all: bool,
        /// Comma-separated property ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Margin tolerance for every selected property.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        radii: RadiusArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Sweep a candidate generalisation of the nu = 0 Kanter inequality (CSV).
    #[command(allow_negative_numbers = true)]
    Explore {
        #[arg(long, value_enum, default_value_t = CandidateArg::ScaledKanter)]
        candidate: CandidateArg,
        /// Comma-separated orders.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu_list: Option<Vec<f64>>,
        #[command(flatten)]
        radii: RadiusArgs,
    },
}

#[derive(Args, Debug, Default)]
struct GridArgs {
    /// A single order.
    #[arg(long, conflicts_with = "nu_list")]
    nu: Option<f64>,
    /// Comma-separated, strictly increasing orders.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nu_list: Option<Vec<f64>>,
    /// A single argument.
    #[arg(long, conflicts_with_all = ["x_list", "x_geom", "x_lin"])]
    x: Option<f64>,
    /// Comma-separated, strictly increasing arguments.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["x_geom", "x_lin"])]
    x_list: Option<Vec<f64>>,
    /// Geometric grid: first, last, count.
    #[arg(long, num_args = 3, value_names = ["A", "B", "N"], conflicts_with = "x_lin")]
    x_geom: Option<Vec<f64>>,
    /// Linear grid: first, last, count.
    #[arg(long, num_args = 3, value_names = ["A", "B", "N"])]
    x_lin: Option<Vec<f64>>,
}

#[derive(Args, Debug, Default)]
struct RadiusArgs {
    /// Largest radius r.
    #[arg(long)]
    r_max: Option<f64>,
    /// Radius spacing.
    #[arg(long)]
    r_step: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Auto,
    Series,
    Integral,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CandidateArg {
    ScaledKanter,
}

/// Formats with 12 significant digits, switching to scientific notation
/// outside [1e-4, 1e6) and stripping trailing zeros.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let a = v.abs();
    if (1e-4..1e6).contains(&a) {
        let magnitude = a.log10().floor() as i64;
        let decimals = (SIGNIFICANT_DIGITS as i64 - 1 - magnitude).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.*e}", SIGNIFICANT_DIGITS - 1);
        let (mantissa, exponent) = s
            .split_once('e')
            .expect("scientific format has an exponent");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exponent}")
    }
}

fn format_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), format_number)
}

/// Parses `args` (program name first) and runs the command, writing to the
/// given streams. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs with the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn io_error(e: std::io::Error) -> Error {
    Error::Config(format!("write failed: {e}"))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval { nu, x, method } => cmd_eval(nu, x, method, out),
        Command::Tabulate { grid, format } => cmd_tabulate(&grid, format, out),
        Command::Check {
            all,
            only,
            tol,
            grid,
            radii,
            format,
        } => cmd_check(all, &only, tol, &grid, &radii, format, out),
        Command::Explore {
            candidate,
            nu_list,
            radii,
        } => cmd_explore(candidate, nu_list, &radii, out),
    }
}

/// One evaluated row. Quantities undefined at the given order are `None`.
#[derive(Debug, Clone, Copy, Serialize)]
struct Row {
    nu: f64,
    x: f64,
    phi: f64,
    psi: Option<f64>,
    lower: Option<f64>,
    upper: Option<f64>,
    logderiv: Option<f64>,
}

fn evaluate_row(nu: f64, x: f64, method: MethodChoice) -> Result<(Row, crate::phi::PhiEval)> {
    let order = Order::new(nu)?;
    let options = PhiOptions {
        method,
        extended_range: true,
    };
    let e = phi_with(order, x, options)?;
    let above_half = nu > -0.5;
    let row = Row {
        nu,
        x,
        phi: e.value,
        psi: if above_half {
            Some(psi_upper(order, x)?)
        } else {
            None
        },
        lower: if above_half {
            Some(phi_lower(order, x)?)
        } else {
            None
        },
        upper: if above_half {
            Some(phi_upper(order, x)?)
        } else {
            None
        },
        logderiv: if nu >= -0.5 {
            Some(phi_log_deriv(order, x)?)
        } else {
            None
        },
    };
    Ok((row, e))
}

fn cmd_eval(nu: f64, x: f64, method: MethodArg, out: &mut dyn Write) -> Result<i32> {
    let method = match method {
        MethodArg::Auto => MethodChoice::Auto,
        MethodArg::Series => MethodChoice::Series,
        MethodArg::Integral => MethodChoice::Integral,
    };
    let (row, e) = evaluate_row(nu, x, method)?;
    let method_name = match e.method {
        crate::phi::Method::Series => "series",
        crate::phi::Method::Integral => "integral",
        crate::phi::Method::HalfIntegerClosedForm => "closed-form",
    };
    writeln!(
        out,
        "nu={} x={} phi={} psi={} logderiv={} lower={} upper={} method={} err={}",
        format_number(nu),
        format_number(x),
        format_number(row.phi),
        format_opt(row.psi),
        format_opt(row.logderiv),
        format_opt(row.lower),
        format_opt(row.upper),
        method_name,
        format_number(e.err_estimate),
    )
    .map_err(io_error)?;
    Ok(0)
}

fn count_arg(v: f64) -> Result<usize> {
    if v >= 2.0 && v.fract() == 0.0 && v <= 1e6 {
        Ok(v as usize)
    } else {
        Err(Error::Config(
            "grid point count must be an integer >= 2".into(),
        ))
    }
}

impl GridArgs {
    fn nu_values(&self) -> Option<Vec<f64>> {
        self.nu.map(|v| vec![v]).or_else(|| self.nu_list.clone())
    }

    /// The x values and their spacing, if any x flag was given.
    fn x_values(&self) -> Result<Option<(Vec<f64>, Scale)>> {
        if let Some(x) = self.x {
            return Ok(Some((vec![x], Scale::Explicit)));
        }
        if let Some(xs) = &self.x_list {
            return Ok(Some((xs.clone(), Scale::Explicit)));
        }
        if let Some(g) = &self.x_geom {
            let grid = GridSpec::geometric(vec![0.0], g[0], g[1], count_arg(g[2])?)?;
            return Ok(Some((grid.x_values, Scale::Geometric)));
        }
        if let Some(g) = &self.x_lin {
            let grid = GridSpec::linear(vec![0.0], g[0], g[1], count_arg(g[2])?)?;
            return Ok(Some((grid.x_values, Scale::Linear)));
        }
        Ok(None)
    }

    /// Overrides the parts of `base` given on the command line.
    fn apply(&self, base: GridSpec) -> Result<GridSpec> {
        let nus = self.nu_values().unwrap_or(base.nu_values);
        let (xs, scale) = self.x_values()?.unwrap_or((base.x_values, base.scale));
        GridSpec::new(nus, xs, scale)
    }

    fn is_empty(&self) -> bool {
        self.nu.is_none()
            && self.nu_list.is_none()
            && self.x.is_none()
            && self.x_list.is_none()
            && self.x_geom.is_none()
            && self.x_lin.is_none()
    }
}

fn require_positive_grid(grid: &GridSpec) -> Result<()> {
    if grid.x_values[0] > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("x must be positive"))
    }
}

#[derive(Serialize)]
struct TableMetadata<'a> {
    command: &'static str,
    version: &'static str,
    columns: [&'static str; 7],
    grid: &'a GridSpec,
    number_format: &'static str,
    max_quadrature_order: usize,
}

#[derive(Serialize)]
struct Table<'a> {
    metadata: TableMetadata<'a>,
    rows: Vec<Row>,
}

const COLUMNS: [&str; 7] = ["nu", "x", "phi", "psi", "lower", "upper", "logderiv"];

fn cmd_tabulate(args: &GridArgs, format: TableFormat, out: &mut dyn Write) -> Result<i32> {
    let grid = args.apply(GridSpec::default_grid())?;
    require_positive_grid(&grid)?;
    // ν-major, x-minor; evaluation order does not affect the output order
    let rows = grid
        .nu_values
        .iter()
        .flat_map(|&nu| grid.x_values.iter().map(move |&x| (nu, x)))
        .map(|(nu, x)| evaluate_row(nu, x, MethodChoice::Auto).map(|(row, _)| row))
        .collect::<Result<Vec<_>>>()?;
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Error::Config(format!("write failed: {e}"));
            w.write_record(COLUMNS).map_err(csv_err)?;
            for r in &rows {
                let cell = |v: Option<f64>| v.map(format_number).unwrap_or_default();
                w.write_record([
                    format_number(r.nu),
                    format_number(r.x),
                    format_number(r.phi),
                    cell(r.psi),
                    cell(r.lower),
                    cell(r.upper),
                    cell(r.logderiv),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_error)?;
        }
        TableFormat::Json => {
            let table = Table {
                metadata: TableMetadata {
                    command: "tabulate",
                    version: env!("CARGO_PKG_VERSION"),
                    columns: COLUMNS,
                    grid: &grid,
                    number_format: "binary64 shortest round-trip",
                    max_quadrature_order: max_order(),
                },
                rows,
            };
            serde_json::to_writer_pretty(&mut *out, &table)
                .map_err(|e| Error::Config(e.to_string()))?;
            writeln!(out).map_err(io_error)?;
        }
    }
    Ok(0)
}

/// The r grid from the radius flags, if any were given.
fn radius_grid(args: &RadiusArgs, default_max: f64, default_step: f64) -> Result<Option<GridSpec>> {
    if args.r_max.is_none() && args.r_step.is_none() {
        return Ok(None);
    }
    let r_max = args.r_max.unwrap_or(default_max);
    let step = args.r_step.unwrap_or(default_step);
    GridSpec::radii(r_max, step).map(Some)
}

fn is_radius_property(id: &str) -> bool {
    matches!(id, "kanter_conj2" | "kanter_integer" | "kanter_A_nonneg") || id == harness::PROBE_ID
}

fn grid_for(id: &str, grid: &GridArgs, radii: &RadiusArgs) -> Result<GridSpec> {
    let base = default_grid_for(id)?;
    if is_radius_property(id) {
        let default_step = if id == "kanter_conj2" || id == "kanter_A_nonneg" {
            0.1
        } else {
            1.0
        };
        let Some(mut r) = radius_grid(radii, 30.0, default_step)? else {
            return Ok(base);
        };
        if id == "kanter_A_nonneg" {
            // A(r) is defined for r > 0 only
            r = GridSpec::new(
                r.nu_values,
                r.x_values.into_iter().filter(|&v| v > 0.0).collect(),
                Scale::Linear,
            )?;
        }
        Ok(r)
    } else if grid.is_empty() {
        Ok(base)
    } else {
        grid.apply(base)
    }
}

#[derive(Serialize)]
struct ReportMetadata {
    command: &'static str,
    version: &'static str,
    max_quadrature_order: usize,
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    metadata: ReportMetadata,
    reports: &'a [CheckReport],
}

fn report_line(r: &CheckReport) -> String {
    let status = match (r.kind, r.passed) {
        (CheckKind::Probe, _) => "PROBE",
        (CheckKind::Assertion, true) => "PASS",
        (CheckKind::Assertion, false) => "FAIL",
    };
    let worst = r
        .worst_point
        .map_or_else(|| "n/a".to_string(), |p| p.to_string());
    let mut line = format!(
        "{} {} min_margin={} worst={} points={} violations={} unasserted={} tol={}",
        r.property_id,
        status,
        format_opt(r.min_margin),
        worst,
        r.points_evaluated,
        r.violations.len(),
        r.unasserted.len(),
        format_number(r.tolerance_used),
    );
    if let Some(note) = &r.note {
        line.push_str(" note=\"");
        line.push_str(note);
        line.push('"');
    }
    line
}

fn cmd_check(
    all: bool,
    only: &[String],
    tol: Option<f64>,
    grid: &GridArgs,
    radii: &RadiusArgs,
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let ids: Vec<String> = if all {
        property_ids().into_iter().map(String::from).collect()
    } else if only.is_empty() {
        return Err(Error::Config(format!(
            "select --all or --only <ids>; valid ids: {}",
            property_ids().join(", ")
        )));
    } else {
        only.to_vec()
    };
    let valid = property_ids();
    if let Some(bad) = ids.iter().find(|id| !valid.contains(&id.as_str())) {
        return Err(Error::Config(format!(
            "unknown property '{bad}'; valid ids: {}",
            valid.join(", ")
        )));
    }
    let mut reports = Vec::with_capacity(ids.len());
    for id in &ids {
        let g = grid_for(id, grid, radii)?;
        let t = match tol {
            Some(t) => t,
            None => default_tol_for(id)?,
        };
        reports.push(check(id, &g, t)?);
    }
    match format {
        ReportFormat::Text => {
            for r in &reports {
                writeln!(out, "{}", report_line(r)).map_err(io_error)?;
            }
        }
        ReportFormat::Json => {
            let doc = ReportDocument {
                metadata: ReportMetadata {
                    command: "check",
                    version: env!("CARGO_PKG_VERSION"),
                    max_quadrature_order: max_order(),
                },
                reports: &reports,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)
                .map_err(|e| Error::Config(e.to_string()))?;
            writeln!(out).map_err(io_error)?;
        }
    }
    Ok(if reports.iter().all(|r| r.passed) {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_explore(
    candidate: CandidateArg,
    nu_list: Option<Vec<f64>>,
    radii: &RadiusArgs,
    out: &mut dyn Write,
) -> Result<i32> {
    let nus = nu_list.unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.0]);
    let step = radii.r_step.unwrap_or(0.1);
    let r_max = radii.r_max.unwrap_or(30.0);
    let r = GridSpec::radii(r_max, step)?;
    let grid = GridSpec::new(
        nus,
        r.x_values.into_iter().filter(|&v| v > 0.0).collect(),
        Scale::Linear,
    )?;
    let candidate = match candidate {
        CandidateArg::ScaledKanter => Candidate::ScaledKanter,
    };
    let rows = explore_open_problem(&grid, candidate)?;
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Config(format!("write failed: {e}"));
    w.write_record(["nu", "r", "phi", "candidate", "difference"])
        .map_err(csv_err)?;
    for row in rows {
        w.write_record([
            format_number(row.nu),
            format_number(row.r),
            format_number(row.phi),
            format_number(row.candidate),
            format_number(row.difference),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_error)?;
    Ok(0)
}
