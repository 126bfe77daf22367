//! Grid-based verification of the properties of Φ_ν and Ψ_ν.
//!
//! Each registered property evaluates a margin at every grid point (or
//! adjacent triple for convexity-type properties). A positive margin means
//! the property holds there; a margin below `-tol` is a violation.
//! Inequalities between positive quantities use differences of logarithms so
//! margins are scale-free; identities use minus the relative residual.
//! Signed derivatives are divided by Ψ_ν(x) for the same reason.
//!
//! Some properties are evaluated on a wider range than the one on which
//! they are asserted. Points outside the asserted range are collected under
//! [`CheckReport::unasserted`] instead of producing violations.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{scaled_i, Order};
use crate::bounds::{phi_lower, phi_upper, turan_gap, weighted_phi, Shift};
use crate::error::{Error, Result};
use crate::phi::{
    phi, phi_at_zero, phi_integral, phi_log_deriv, phi_series, phi_with, psi_nu_derivative,
    psi_upper, psi_x_derivative, PhiOptions,
};
use crate::quadrature::{delta_nu, kanter_a, neumann_product, theta_nu};
use crate::scalar::kanter_p;

/// Default margin tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Geometric,
    /// Hand-picked values with no regular spacing.
    Explicit,
}

/// A rectangular sampling grid. For the Kanter properties `x_values` holds
/// the radii r, and r = 0 is admitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu_values: Vec<f64>,
    pub x_values: Vec<f64>,
    pub scale: Scale,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl GridSpec {
    pub fn new(nu_values: Vec<f64>, x_values: Vec<f64>, scale: Scale) -> Result<Self> {
        if nu_values.is_empty() || x_values.is_empty() {
            return Err(Error::Config("grid sequences must be nonempty".into()));
        }
        if nu_values.iter().chain(&x_values).any(|v| !v.is_finite()) {
            return Err(Error::Config("grid values must be finite".into()));
        }
        if !strictly_increasing(&nu_values) || !strictly_increasing(&x_values) {
            return Err(Error::Config(
                "grid sequences must be strictly increasing".into(),
            ));
        }
        if x_values[0] < 0.0 {
            return Err(Error::Config("x values must be nonnegative".into()));
        }
        Ok(GridSpec {
            nu_values,
            x_values,
            scale,
        })
    }

    /// `n` points from `a` to `b` spaced evenly in log x.
    pub fn geometric(nu_values: Vec<f64>, a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && b > a && n >= 2) {
            return Err(Error::Config(
                "geometric grid needs 0 < a < b and n >= 2".into(),
            ));
        }
        let ratio = (b / a).ln() / (n - 1) as f64;
        let mut xs: Vec<f64> = (0..n).map(|k| a * (ratio * k as f64).exp()).collect();
        xs[n - 1] = b;
        GridSpec::new(nu_values, xs, Scale::Geometric)
    }

    /// `n` evenly spaced points from `a` to `b`.
    pub fn linear(nu_values: Vec<f64>, a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a && n >= 2) {
            return Err(Error::Config("linear grid needs a < b and n >= 2".into()));
        }
        let step = (b - a) / (n - 1) as f64;
        let xs = (0..n).map(|k| a + step * k as f64).collect();
        GridSpec::new(nu_values, xs, Scale::Linear)
    }

    /// r = 0, step, 2·step, … ≤ r_max, with ν fixed at 0.
    pub fn radii(r_max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && r_max >= step) {
            return Err(Error::Config("radius grid needs 0 < step <= r-max".into()));
        }
        let n = (r_max / step + 1e-9).floor() as usize;
        let xs = (0..=n).map(|k| k as f64 * step).collect();
        GridSpec::new(vec![0.0], xs, Scale::Linear)
    }

    /// ν ∈ {−0.49, −0.25, 0, 0.25, 0.5, 1, 2, 3.5, 5}, 40 geometric x from 1e-3 to 50.
    pub fn default_grid() -> Self {
        GridSpec::geometric(
            vec![-0.49, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0],
            1e-3,
            50.0,
            40,
        )
        .expect("default grid is valid")
    }

    pub fn len(&self) -> usize {
        self.nu_values.len() * self.x_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Where a margin was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    At {
        nu: f64,
        x: f64,
    },
    /// Two x values at fixed ν, compared through their midpoint.
    XPair {
        nu: f64,
        x1: f64,
        x2: f64,
    },
    /// Two orders at fixed x.
    NuPair {
        x: f64,
        nu1: f64,
        nu2: f64,
    },
    /// An m-th derivative at (ν, x).
    Derivative {
        nu: f64,
        x: f64,
        m: u32,
    },
    /// A product of orders α, β at x.
    Orders {
        alpha: f64,
        beta: f64,
        x: f64,
    },
    Radius {
        r: f64,
    },
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Point::At { nu, x } => write!(f, "(nu={nu}, x={x})"),
            Point::XPair { nu, x1, x2 } => write!(f, "(nu={nu}, x1={x1}, x2={x2})"),
            Point::NuPair { x, nu1, nu2 } => write!(f, "(x={x}, nu1={nu1}, nu2={nu2})"),
            Point::Derivative { nu, x, m } => write!(f, "(nu={nu}, x={x}, m={m})"),
            Point::Orders { alpha, beta, x } => write!(f, "(alpha={alpha}, beta={beta}, x={x})"),
            Point::Radius { r } => write!(f, "(r={r})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub point: Point,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Assertion,
    /// Reports data only; never fails.
    Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequencePoint {
    pub r: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property_id: String,
    pub kind: CheckKind,
    pub grid: GridSpec,
    pub passed: bool,
    /// Smallest margin over the asserted points.
    pub min_margin: Option<f64>,
    pub worst_point: Option<Point>,
    pub violations: Vec<Sample>,
    /// Points evaluated outside the asserted range, with their margins.
    pub unasserted: Vec<Sample>,
    pub tolerance_used: f64,
    pub points_evaluated: usize,
    /// The q-sequence of the ratio probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<SequencePoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A margin together with whether it counts toward pass/fail.
struct Eval {
    sample: Sample,
    asserted: bool,
}

fn eval(point: Point, margin: f64, asserted: bool) -> Eval {
    Eval {
        sample: Sample { point, margin },
        asserted,
    }
}

type Runner = fn(&GridSpec) -> Result<Vec<Eval>>;

struct Property {
    id: &'static str,
    tol: f64,
    grid: fn() -> GridSpec,
    run: Runner,
}

const PROPERTIES: &[Property] = &[
    Property {
        id: "complete_monotone_x",
        tol: DEFAULT_TOL,
        grid: GridSpec::default_grid,
        run: complete_monotone_x,
    },
    Property {
        id: "log_convex_x",
        tol: DEFAULT_TOL,
        grid: GridSpec::default_grid,
        run: log_convex_x,
    },
    Property {
        id: "geom_concave_x",
        tol: DEFAULT_TOL,
        grid: GridSpec::default_grid,
        run: geom_concave_x,
    },
    Property {
        id: "nu_decreasing",
        tol: DEFAULT_TOL,
        grid: GridSpec::default_grid,
        run: nu_decreasing,
    },
    Property {
        id: "weighted_increasing_d",
        tol: DEFAULT_TOL,
        grid: weighted_grid,
        run: weighted_d,
    },
    Property {
        id: "weighted_increasing_e",
        tol: DEFAULT_TOL,
        grid: weighted_grid,
        run: weighted_e,
    },
    Property {
        id: "weighted_increasing_f",
        tol: DEFAULT_TOL,
        grid: weighted_grid,
        run: weighted_f,
    },
    Property {
        id: "bound_sandwich",
        tol: DEFAULT_TOL,
        grid: GridSpec::default_grid,
        run: bound_sandwich,
    },
    Property {
        id: "turan_lower",
        tol: DEFAULT_TOL,
        grid: turan_lower_grid,
        run: turan_lower,
    },
    Property {
        id: "turan_upper",
        tol: DEFAULT_TOL,
        grid: turan_upper_grid,
        run: turan_upper,
    },
    Property {
        id: "nu_complete_monotone",
        tol: DEFAULT_TOL,
        grid: GridSpec::default_grid,
        run: nu_complete_monotone,
    },
    Property {
        id: "psi_nu_log_convex",
        tol: DEFAULT_TOL,
        grid: GridSpec::default_grid,
        run: psi_nu_log_convex,
    },
    Property {
        id: "phi_nu_log_concave",
        tol: DEFAULT_TOL,
        grid: nu_concave_grid,
        run: phi_nu_log_concave,
    },
    Property {
        id: "neumann_identity",
        tol: DEFAULT_TOL,
        grid: neumann_grid,
        run: neumann_identity,
    },
    Property {
        id: "delta_positive",
        tol: DEFAULT_TOL,
        grid: low_order_grid,
        run: delta_positive,
    },
    Property {
        id: "theta_positive",
        tol: DEFAULT_TOL,
        grid: low_order_grid,
        run: theta_positive,
    },
    Property {
        id: "kanter_conj2",
        tol: 1e-10,
        grid: kanter_grid,
        run: kanter_conj2,
    },
    Property {
        id: "kanter_integer",
        tol: 1e-12,
        grid: kanter_integer_grid,
        run: kanter_integer,
    },
    Property {
        id: "kanter_A_nonneg",
        tol: 1e-10,
        grid: kanter_a_grid,
        run: kanter_a_nonneg,
    },
    Property {
        id: "cross_method",
        tol: 1e-10,
        grid: cross_method_grid,
        run: cross_method,
    },
    Property {
        id: "log_deriv_identity",
        tol: 1e-6,
        grid: GridSpec::default_grid,
        run: log_deriv_identity,
    },
];

pub const PROBE_ID: &str = "probe_mono_ratio";
const PROBE_R_MAX: f64 = 30.0;
const PROBE_STEP: f64 = 1.0;

/// Every registered id, assertions first, the probe last.
pub fn property_ids() -> Vec<&'static str> {
    PROPERTIES
        .iter()
        .map(|p| p.id)
        .chain(std::iter::once(PROBE_ID))
        .collect()
}

fn unknown(id: &str) -> Error {
    Error::Config(format!(
        "unknown property '{id}'; valid ids: {}",
        property_ids().join(", ")
    ))
}

/// The grid a property runs on when none is given.
pub fn default_grid_for(id: &str) -> Result<GridSpec> {
    if id == PROBE_ID {
        return GridSpec::radii(PROBE_R_MAX, PROBE_STEP);
    }
    PROPERTIES
        .iter()
        .find(|p| p.id == id)
        .map(|p| (p.grid)())
        .ok_or_else(|| unknown(id))
}

/// The tolerance a property uses when none is given.
pub fn default_tol_for(id: &str) -> Result<f64> {
    if id == PROBE_ID {
        return Ok(0.0);
    }
    PROPERTIES
        .iter()
        .find(|p| p.id == id)
        .map(|p| p.tol)
        .ok_or_else(|| unknown(id))
}

/// Runs one property over `grid` with margin tolerance `tol`.
pub fn check(property_id: &str, grid: &GridSpec, tol: f64) -> Result<CheckReport> {
    if !(tol >= 0.0) {
        return Err(Error::Config("tolerance must be nonnegative".into()));
    }
    if property_id == PROBE_ID {
        return probe_on(grid);
    }
    let property = PROPERTIES
        .iter()
        .find(|p| p.id == property_id)
        .ok_or_else(|| unknown(property_id))?;
    let evals = (property.run)(grid)?;
    Ok(assemble(property_id, grid, tol, evals))
}

/// Runs one property on its default grid and tolerance.
pub fn check_default(property_id: &str) -> Result<CheckReport> {
    check(
        property_id,
        &default_grid_for(property_id)?,
        default_tol_for(property_id)?,
    )
}

fn assemble(id: &str, grid: &GridSpec, tol: f64, evals: Vec<Eval>) -> CheckReport {
    let points_evaluated = evals.len();
    let mut min: Option<Sample> = None;
    let mut violations = Vec::new();
    let mut unasserted = Vec::new();
    for Eval { sample, asserted } in evals {
        if !asserted {
            unasserted.push(sample);
            continue;
        }
        // NaN margins count as violations
        if !(sample.margin >= -tol) {
            violations.push(sample);
        }
        if min.is_none_or(|m| !(sample.margin >= m.margin)) {
            min = Some(sample);
        }
    }
    CheckReport {
        property_id: id.to_string(),
        kind: CheckKind::Assertion,
        grid: grid.clone(),
        passed: violations.is_empty(),
        min_margin: min.map(|s| s.margin),
        worst_point: min.map(|s| s.point),
        violations,
        unasserted,
        tolerance_used: tol,
        points_evaluated,
        sequence: None,
        note: None,
    }
}

fn require_nu(grid: &GridSpec, id: &str, ok: impl Fn(f64) -> bool, bound: &str) -> Result<()> {
    match grid.nu_values.iter().find(|&&nu| !ok(nu)) {
        Some(nu) => Err(Error::domain(format!("{id}: nu = {nu} violates {bound}"))),
        None => Ok(()),
    }
}

fn require_positive_x(grid: &GridSpec, id: &str) -> Result<()> {
    if grid.x_values[0] > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{id}: x values must be positive")))
    }
}

fn order(nu: f64) -> Result<Order> {
    Order::new(nu)
}

fn ln_phi(nu: f64, x: f64) -> Result<f64> {
    Ok(phi(order(nu)?, x)?.value.ln())
}

/// Runs `f` for each ν in parallel and concatenates the results in grid order.
fn per_nu(
    grid: &GridSpec,
    f: impl Fn(f64, &[f64]) -> Result<Vec<Eval>> + Sync,
) -> Result<Vec<Eval>> {
    let rows: Vec<Vec<Eval>> = grid
        .nu_values
        .par_iter()
        .map(|&nu| f(nu, &grid.x_values))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Runs `f` for each x in parallel.
fn per_x(
    grid: &GridSpec,
    f: impl Fn(f64, &[f64]) -> Result<Vec<Eval>> + Sync,
) -> Result<Vec<Eval>> {
    let cols: Vec<Vec<Eval>> = grid
        .x_values
        .par_iter()
        .map(|&x| f(x, &grid.nu_values))
        .collect::<Result<_>>()?;
    Ok(cols.into_iter().flatten().collect())
}

fn complete_monotone_x(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "complete_monotone_x";
    require_nu(grid, ID, |nu| nu > -0.5, "nu > -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        let mut out = Vec::new();
        for &x in xs {
            let scale = psi_upper(order(nu)?, x)?;
            for m in 0..=4u32 {
                let d = psi_x_derivative(order(nu)?, x, m)?;
                let signed = if m % 2 == 0 { d } else { -d };
                out.push(eval(Point::Derivative { nu, x, m }, signed / scale, true));
            }
        }
        Ok(out)
    })
}

fn nu_complete_monotone(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "nu_complete_monotone";
    require_nu(grid, ID, |nu| nu > -0.5, "nu > -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        let mut out = Vec::new();
        for &x in xs {
            let scale = psi_upper(order(nu)?, x)?;
            for m in 0..=2u32 {
                let d = psi_nu_derivative(order(nu)?, x, m)?;
                let signed = if m % 2 == 0 { d } else { -d };
                out.push(eval(Point::Derivative { nu, x, m }, signed / scale, true));
            }
        }
        Ok(out)
    })
}

fn log_convex_x(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "log_convex_x";
    require_nu(grid, ID, |nu| nu >= -0.5, "nu >= -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        xs.windows(3)
            .map(|w| {
                let (x1, x2) = (w[0], w[2]);
                let margin =
                    0.5 * (ln_phi(nu, x1)? + ln_phi(nu, x2)?) - ln_phi(nu, 0.5 * (x1 + x2))?;
                Ok(eval(Point::XPair { nu, x1, x2 }, margin, true))
            })
            .collect()
    })
}

fn geom_concave_x(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "geom_concave_x";
    require_nu(grid, ID, |nu| nu >= -0.5, "nu >= -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        let mut out = Vec::new();
        for w in xs.windows(3) {
            let (x1, x2) = (w[0], w[2]);
            let margin = ln_phi(nu, (x1 * x2).sqrt())? - 0.5 * (ln_phi(nu, x1)? + ln_phi(nu, x2)?);
            out.push(eval(Point::XPair { nu, x1, x2 }, margin, true));
        }
        // the same property as a decreasing x Φ'/Φ
        for w in xs.windows(2) {
            let margin = phi_log_deriv(order(nu)?, w[0])? - phi_log_deriv(order(nu)?, w[1])?;
            out.push(eval(
                Point::XPair {
                    nu,
                    x1: w[0],
                    x2: w[1],
                },
                margin,
                true,
            ));
        }
        Ok(out)
    })
}

fn nu_decreasing(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "nu_decreasing";
    require_nu(grid, ID, |nu| nu >= -0.5, "nu >= -1/2")?;
    require_positive_x(grid, ID)?;
    per_x(grid, |x, nus| {
        nus.windows(2)
            .map(|w| {
                let margin = ln_phi(w[0], x)? - ln_phi(w[1], x)?;
                Ok(eval(
                    Point::NuPair {
                        x,
                        nu1: w[0],
                        nu2: w[1],
                    },
                    margin,
                    w[0] >= 0.0,
                ))
            })
            .collect()
    })
}

fn weighted_grid() -> GridSpec {
    GridSpec::geometric(vec![-0.5, -0.25, 0.0, 0.5, 1.0, 2.0, 5.0], 1e-3, 1e3, 60)
        .expect("valid grid")
}

fn weighted(grid: &GridSpec, id: &str, shift: Shift) -> Result<Vec<Eval>> {
    require_nu(grid, id, |nu| nu >= -0.5, "nu >= -1/2")?;
    require_positive_x(grid, id)?;
    per_nu(grid, |nu, xs| {
        // the HalfNu base x + ν/2 is positive only for x > −ν/2
        let xs: Vec<f64> = xs
            .iter()
            .copied()
            .filter(|&x| shift.weight_base(nu, x) > 0.0)
            .collect();
        xs.windows(2)
            .map(|w| {
                let a = weighted_phi(order(nu)?, w[0], shift)?;
                let b = weighted_phi(order(nu)?, w[1], shift)?;
                Ok(eval(
                    Point::XPair {
                        nu,
                        x1: w[0],
                        x2: w[1],
                    },
                    b.ln() - a.ln(),
                    true,
                ))
            })
            .collect()
    })
}

fn weighted_d(grid: &GridSpec) -> Result<Vec<Eval>> {
    weighted(grid, "weighted_increasing_d", Shift::None)
}

fn weighted_e(grid: &GridSpec) -> Result<Vec<Eval>> {
    weighted(grid, "weighted_increasing_e", Shift::HalfNu)
}

fn weighted_f(grid: &GridSpec) -> Result<Vec<Eval>> {
    weighted(grid, "weighted_increasing_f", Shift::HalfNuPlusQuarter)
}

fn bound_sandwich(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "bound_sandwich";
    require_nu(grid, ID, |nu| nu > -0.5, "nu > -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        let o = order(nu)?;
        let mut out = Vec::new();
        for &x in xs {
            let p = phi(o, x)?.value.ln();
            let point = Point::At { nu, x };
            out.push(eval(point, p - phi_lower(o, x)?.ln(), nu > -0.49));
            out.push(eval(point, phi_upper(o, x)?.ln() - p, nu > -0.49));
        }
        Ok(out)
    })
}

fn turan_lower_grid() -> GridSpec {
    GridSpec::geometric(
        vec![
            -0.9, -0.6, -0.3, 0.0, 1e-3, 0.25, 0.5, 0.75, 1.0, 2.0, 3.5, 5.0,
        ],
        1e-3,
        50.0,
        40,
    )
    .expect("valid grid")
}

fn turan_upper_grid() -> GridSpec {
    GridSpec::geometric(
        vec![0.0, 0.25, 0.5, 0.500_001, 0.75, 1.0, 2.0, 3.5, 5.0],
        1e-3,
        50.0,
        40,
    )
    .expect("valid grid")
}

fn turan_lower(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "turan_lower";
    require_nu(grid, ID, |nu| nu > -1.0, "nu > -1")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        xs.iter()
            .map(|&x| {
                let t = turan_gap(order(nu)?, x)?;
                Ok(eval(Point::At { nu, x }, t.gap / t.phi_sq, nu > 0.0))
            })
            .collect()
    })
}

fn turan_upper(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "turan_upper";
    require_nu(grid, ID, |nu| nu > -0.5, "nu > -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        xs.iter()
            .map(|&x| {
                let t = turan_gap(order(nu)?, x)?;
                let margin = 1.0 / (nu + 0.5) - t.gap / t.phi_sq;
                Ok(eval(Point::At { nu, x }, margin, nu > 0.5))
            })
            .collect()
    })
}

fn psi_nu_log_convex(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "psi_nu_log_convex";
    require_nu(grid, ID, |nu| nu > -0.5, "nu > -1/2")?;
    require_positive_x(grid, ID)?;
    per_x(grid, |x, nus| {
        let ln_psi = |nu: f64| -> Result<f64> { Ok(psi_upper(order(nu)?, x)?.ln()) };
        nus.windows(3)
            .map(|w| {
                let (n1, n2) = (w[0], w[2]);
                let margin = 0.5 * (ln_psi(n1)? + ln_psi(n2)?) - ln_psi(0.5 * (n1 + n2))?;
                Ok(eval(
                    Point::NuPair {
                        x,
                        nu1: n1,
                        nu2: n2,
                    },
                    margin,
                    true,
                ))
            })
            .collect()
    })
}

fn nu_concave_grid() -> GridSpec {
    GridSpec::geometric(
        vec![
            -0.999, -0.9, -0.75, -0.6, -0.49, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.5, 5.0,
        ],
        1e-3,
        50.0,
        40,
    )
    .expect("valid grid")
}

fn phi_nu_log_concave(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "phi_nu_log_concave";
    require_nu(grid, ID, |nu| nu > -1.0, "nu > -1")?;
    require_positive_x(grid, ID)?;
    let options = PhiOptions {
        extended_range: true,
        ..PhiOptions::default()
    };
    per_x(grid, |x, nus| {
        let ln_p = |nu: f64| -> Result<f64> { Ok(phi_with(order(nu)?, x, options)?.value.ln()) };
        nus.windows(3)
            .map(|w| {
                let (n1, n2) = (w[0], w[2]);
                let margin = ln_p(0.5 * (n1 + n2))? - 0.5 * (ln_p(n1)? + ln_p(n2)?);
                Ok(eval(
                    Point::NuPair {
                        x,
                        nu1: n1,
                        nu2: n2,
                    },
                    margin,
                    true,
                ))
            })
            .collect()
    })
}

fn neumann_grid() -> GridSpec {
    GridSpec::new(
        vec![-0.4, 0.0, 0.5, 1.0, 2.0],
        vec![0.5, 1.0, 5.0, 20.0],
        Scale::Explicit,
    )
    .expect("valid grid")
}

/// Pairs α ≤ β from the ν values with α + β > −1; x from the x values.
fn neumann_identity(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "neumann_identity";
    require_nu(grid, ID, |nu| nu > -1.0, "nu > -1")?;
    require_positive_x(grid, ID)?;
    let mut pairs = Vec::new();
    for (i, &a) in grid.nu_values.iter().enumerate() {
        for &b in &grid.nu_values[i..] {
            if a + b > -1.0 {
                for &x in &grid.x_values {
                    pairs.push((a, b, x));
                }
            }
        }
    }
    pairs
        .par_iter()
        .map(|&(alpha, beta, x)| {
            let integral = neumann_product(order(alpha)?, order(beta)?, x)?.value;
            let product = scaled_i(alpha, x)? * scaled_i(beta, x)?;
            let margin = -((integral - product) / product).abs();
            Ok(eval(Point::Orders { alpha, beta, x }, margin, true))
        })
        .collect()
}

fn low_order_grid() -> GridSpec {
    GridSpec::geometric(
        vec![-0.999, -0.75, -0.49, -0.25, 0.0, 0.5, 1.0, 2.0, 3.5, 5.0],
        1e-3,
        50.0,
        40,
    )
    .expect("valid grid")
}

fn delta_positive(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "delta_positive";
    require_nu(grid, ID, |nu| nu > -1.0, "nu > -1")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        xs.iter()
            .map(|&x| {
                let centre = scaled_i(nu, x)?;
                let margin = delta_nu(order(nu)?, x)? / (centre * centre);
                Ok(eval(Point::At { nu, x }, margin, true))
            })
            .collect()
    })
}

fn theta_positive(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "theta_positive";
    require_nu(grid, ID, |nu| nu > -1.0, "nu > -1")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        xs.iter()
            .map(|&x| {
                let scale = scaled_i(nu, x)? * scaled_i(nu + 1.0, x)?;
                let margin = theta_nu(order(nu)?, x)?.value / scale;
                Ok(eval(Point::At { nu, x }, margin, true))
            })
            .collect()
    })
}

fn kanter_grid() -> GridSpec {
    GridSpec::radii(30.0, 0.1).expect("valid grid")
}

fn kanter_integer_grid() -> GridSpec {
    GridSpec::radii(30.0, 1.0).expect("valid grid")
}

fn kanter_a_grid() -> GridSpec {
    let mut rs = vec![0.1];
    rs.extend((1..=120).map(|k| 0.25 * k as f64));
    GridSpec::new(vec![0.0], rs, Scale::Explicit).expect("valid grid")
}

fn require_radii(grid: &GridSpec, id: &str, allow_zero: bool) -> Result<()> {
    let r0 = grid.x_values[0];
    if r0 > 0.0 || (allow_zero && r0 == 0.0) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{id}: r must be {}",
            if allow_zero {
                "nonnegative"
            } else {
                "positive"
            }
        )))
    }
}

/// Φ_0(2r), with the r = 0 limit taken exactly.
fn phi0_at_2r(r: f64) -> Result<f64> {
    let o = order(0.0)?;
    if r == 0.0 {
        Ok(phi_at_zero(o))
    } else {
        Ok(phi(o, 2.0 * r)?.value)
    }
}

fn kanter_conj2(grid: &GridSpec) -> Result<Vec<Eval>> {
    require_radii(grid, "kanter_conj2", true)?;
    grid.x_values
        .par_iter()
        .map(|&r| {
            let margin = phi0_at_2r(r)?.ln() - kanter_p(r)?.ln();
            Ok(eval(Point::Radius { r }, margin, true))
        })
        .collect()
}

/// C(2r, r) 4^{−r} by exact integer arithmetic.
pub fn central_binomial_probability(r: u32) -> Result<f64> {
    if r > 30 {
        return Err(Error::domain("integer radius above 30 is not supported"));
    }
    let mut c: u128 = 1;
    for k in 1..=r as u128 {
        c = c * (r as u128 + k) / k;
    }
    Ok(c as f64 / 4f64.powi(r as i32))
}

fn kanter_integer(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "kanter_integer";
    require_radii(grid, ID, true)?;
    let mut out = Vec::new();
    for &r in grid.x_values.iter().filter(|r| r.fract() == 0.0) {
        let binom = central_binomial_probability(r as u32)?;
        let p = kanter_p(r)?;
        out.push(eval(
            Point::Radius { r },
            -((p - binom) / binom).abs(),
            true,
        ));
        out.push(eval(
            Point::Radius { r },
            phi0_at_2r(r)?.ln() - binom.ln(),
            true,
        ));
    }
    if out.is_empty() {
        return Err(Error::domain(format!(
            "{ID}: grid contains no integer radius"
        )));
    }
    Ok(out)
}

fn kanter_a_nonneg(grid: &GridSpec) -> Result<Vec<Eval>> {
    require_radii(grid, "kanter_A_nonneg", false)?;
    grid.x_values
        .par_iter()
        .map(|&r| Ok(eval(Point::Radius { r }, kanter_a(r)?.value, true)))
        .collect()
}

fn cross_method_grid() -> GridSpec {
    GridSpec::geometric(
        vec![-0.4, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0],
        1e-3,
        50.0,
        40,
    )
    .expect("valid grid")
}

fn cross_method(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "cross_method";
    require_nu(grid, ID, |nu| nu > -0.5, "nu > -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        let o = order(nu)?;
        xs.iter()
            .map(|&x| {
                let s = phi_series(o, x)?;
                let q = phi_integral(o, x)?.value;
                Ok(eval(Point::At { nu, x }, -((s - q) / s).abs(), true))
            })
            .collect()
    })
}

/// Central difference of ln Φ against the closed log-derivative at interior
/// grid points, with step 1e-5·max(1, x).
fn log_deriv_identity(grid: &GridSpec) -> Result<Vec<Eval>> {
    const ID: &str = "log_deriv_identity";
    require_nu(grid, ID, |nu| nu >= -0.5, "nu >= -1/2")?;
    require_positive_x(grid, ID)?;
    per_nu(grid, |nu, xs| {
        let interior = if xs.len() > 2 {
            &xs[1..xs.len() - 1]
        } else {
            xs
        };
        interior
            .iter()
            .map(|&x| {
                let h = 1e-5 * x.max(1.0);
                let fd = if x > h {
                    x * (ln_phi(nu, x + h)? - ln_phi(nu, x - h)?) / (2.0 * h)
                } else {
                    f64::NAN
                };
                let margin = -(fd - phi_log_deriv(order(nu)?, x)?).abs();
                Ok(eval(Point::At { nu, x }, margin, true))
            })
            .collect()
    })
}

/// q(r) = Φ_0(2r)/p(r) at r = 0, step, 2·step, … ≤ r_max, reporting whether
/// q was nondecreasing along the samples. Never fails.
pub fn probe_mono_ratio(r_max: f64, step: f64) -> Result<CheckReport> {
    if !(r_max > 0.0 && r_max <= 100.0) {
        return Err(Error::domain("r_max must lie in (0, 100]"));
    }
    if !(step > 0.0) {
        return Err(Error::domain("step must be positive"));
    }
    probe_on(&GridSpec::radii(r_max, step).map_err(|e| Error::domain(e.to_string()))?)
}

fn probe_on(grid: &GridSpec) -> Result<CheckReport> {
    require_radii(grid, PROBE_ID, true)?;
    let sequence: Vec<SequencePoint> = grid
        .x_values
        .iter()
        .map(|&r| {
            Ok(SequencePoint {
                r,
                q: phi0_at_2r(r)? / kanter_p(r)?,
            })
        })
        .collect::<Result<_>>()?;
    let steps: Vec<Sample> = sequence
        .windows(2)
        .map(|w| Sample {
            point: Point::Radius { r: w[0].r },
            margin: w[1].q - w[0].q,
        })
        .collect();
    let decreases = steps.iter().filter(|s| s.margin < 0.0).count();
    let note = if decreases == 0 {
        "probe (non-assertive): q(r) <= q(r + step) at every sample".to_string()
    } else {
        format!(
            "probe (non-assertive): q decreased at {decreases} of {} steps",
            steps.len()
        )
    };
    let worst = steps
        .iter()
        .copied()
        .min_by(|a, b| a.margin.total_cmp(&b.margin));
    Ok(CheckReport {
        property_id: PROBE_ID.to_string(),
        kind: CheckKind::Probe,
        grid: grid.clone(),
        passed: true,
        min_margin: worst.map(|s| s.margin),
        worst_point: worst.map(|s| s.point),
        violations: Vec::new(),
        unasserted: steps,
        tolerance_used: 0.0,
        points_evaluated: sequence.len(),
        sequence: Some(sequence),
        note: Some(note),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Candidate {
    /// p(r) Φ_ν(0⁺), which reduces to the ν = 0 inequality.
    ScaledKanter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExploreRow {
    pub nu: f64,
    pub r: f64,
    pub phi: f64,
    pub candidate: f64,
    pub difference: f64,
}

/// Φ_ν(2r) against a candidate right-hand side over ν ∈ [−1/2, 10] and
/// r ∈ (0, 30]. Rows run ν-major in grid order.
pub fn explore_open_problem(grid: &GridSpec, candidate: Candidate) -> Result<Vec<ExploreRow>> {
    require_nu(
        grid,
        "explore",
        |nu| (-0.5..=10.0).contains(&nu),
        "-1/2 <= nu <= 10",
    )?;
    if !(grid.x_values[0] > 0.0 && grid.x_values[grid.x_values.len() - 1] <= 30.0) {
        return Err(Error::domain("explore: r must lie in (0, 30]"));
    }
    let rows: Vec<Vec<ExploreRow>> = grid
        .nu_values
        .par_iter()
        .map(|&nu| {
            let o = order(nu)?;
            grid.x_values
                .iter()
                .map(|&r| {
                    let value = phi(o, 2.0 * r)?.value;
                    let rhs = match candidate {
                        Candidate::ScaledKanter => kanter_p(r)? * phi_at_zero(o),
                    };
                    Ok(ExploreRow {
                        nu,
                        r,
                        phi: value,
                        candidate: rhs,
                        difference: value - rhs,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}
