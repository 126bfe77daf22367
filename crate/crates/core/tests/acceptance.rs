//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::Command;

use phi_bessel::bounds::{phi_lower, phi_upper, turan_gap};
use phi_bessel::harness::{
    central_binomial_probability, check, default_grid_for, CheckReport, GridSpec,
};
use phi_bessel::phi::{phi, phi_series, psi_nu_derivative, psi_x_derivative};
use phi_bessel::quadrature::kanter_a;
use phi_bessel::scalar::kanter_p;
use phi_bessel::Order;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

// reference values from independent 40-digit evaluation
const PHI_0_2: f64 = 0.523_777_611_802_608_7;
const PHI_UPPER_0_2: f64 = 0.531_923_040_535_243_5;
const TURAN_GAP_1_1: f64 = 0.027_349_962_590_331_967;
const TURAN_CAP_1_1: f64 = 0.044_324_137_293_898_797;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn o(nu: f64) -> Order {
    Order::new(nu).expect("valid order")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_check(id: &str, grid: &GridSpec, tol: f64) -> Result<CheckReport, String> {
    let report = check(id, grid, tol).map_err(|e| format!("{id}: {e}"))?;
    ensure(report.passed, || {
        format!(
            "{id}: {} violations, first {:?}",
            report.violations.len(),
            report.violations.first()
        )
    })?;
    Ok(report)
}

fn strictly_positive(report: &CheckReport) -> Result<(), String> {
    let m = report.min_margin.unwrap_or(f64::NAN);
    ensure(m > 0.0, || {
        format!(
            "{}: min margin {m:e} at {:?} is not positive",
            report.property_id, report.worst_point
        )
    })
}

fn default_x() -> Vec<f64> {
    GridSpec::default_grid().x_values
}

fn closed_form_anchor() -> Outcome {
    let mut worst: f64 = 0.0;
    for x in [1e-3, 1.0, 10.0, 100.0, 1000.0] {
        let dispatched = phi(o(-0.5), x).map_err(|e| e.to_string())?.value;
        let summed = phi_series(o(-0.5), x).map_err(|e| e.to_string())?;
        worst = worst
            .max((dispatched - SQRT_2_OVER_PI).abs())
            .max((summed - SQRT_2_OVER_PI).abs());
    }
    ensure(worst <= 1e-13, || {
        format!("max deviation {worst:e} > 1e-13")
    })?;
    Ok(format!(
        "max |phi - sqrt(2/pi)| = {worst:e} (dispatch and series)"
    ))
}

fn cross_method() -> Outcome {
    let grid = GridSpec::new(
        vec![-0.4, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0],
        default_x(),
        phi_bessel::harness::Scale::Geometric,
    )
    .map_err(|e| e.to_string())?;
    let r = run_check("cross_method", &grid, 1e-10)?;
    Ok(format!(
        "max relative difference {:e} over {} points",
        -r.min_margin.unwrap(),
        r.points_evaluated
    ))
}

fn bound_sandwich() -> Outcome {
    let r = run_check("bound_sandwich", &GridSpec::default_grid(), 0.0)?;
    strictly_positive(&r)?;
    let lower = phi_lower(o(0.0), 2.0).map_err(|e| e.to_string())?;
    let mid = phi(o(0.0), 2.0).map_err(|e| e.to_string())?.value;
    let upper = phi_upper(o(0.0), 2.0).map_err(|e| e.to_string())?;
    ensure((lower - 1.0 / 3.0).abs() < 1e-15, || {
        format!("lower(0,2) = {lower}")
    })?;
    ensure(((mid - PHI_0_2) / PHI_0_2).abs() < 1e-12, || {
        format!("phi(0,2) = {mid}")
    })?;
    ensure(
        ((upper - PHI_UPPER_0_2) / PHI_UPPER_0_2).abs() < 1e-14,
        || format!("upper(0,2) = {upper}"),
    )?;
    let (ml, mu) = (mid.ln() - lower.ln(), upper.ln() - mid.ln());
    ensure(ml > 1e-3 && mu > 1e-3, || {
        format!("log margins at (0,2): {ml:e}, {mu:e}")
    })?;
    Ok(format!(
        "grid min log margin {:e}; at (0,2): {lower:.7} < {mid:.7} < {upper:.7}, log margins {ml:.4}, {mu:.4}",
        r.min_margin.unwrap()
    ))
}

fn turan() -> Outcome {
    let nus = vec![1e-3, 0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 3.5, 5.0];
    let lower_grid = GridSpec::new(nus, default_x(), phi_bessel::harness::Scale::Geometric)
        .map_err(|e| e.to_string())?;
    let lower = run_check("turan_lower", &lower_grid, 1e-9)?;
    strictly_positive(&lower)?;
    let upper_grid = GridSpec::new(
        vec![0.500_001, 0.6, 0.75, 1.0, 2.0, 3.5, 5.0],
        default_x(),
        phi_bessel::harness::Scale::Geometric,
    )
    .map_err(|e| e.to_string())?;
    let upper = run_check("turan_upper", &upper_grid, 1e-9)?;
    let t = turan_gap(o(1.0), 1.0).map_err(|e| e.to_string())?;
    let cap = t.cap.ok_or("cap missing at nu = 1")?;
    ensure(
        ((t.gap - TURAN_GAP_1_1) / TURAN_GAP_1_1).abs() <= 2e-6,
        || format!("gap(1,1) = {}", t.gap),
    )?;
    ensure(
        ((cap - TURAN_CAP_1_1) / TURAN_CAP_1_1).abs() <= 2e-6,
        || format!("cap(1,1) = {cap}"),
    )?;
    ensure(0.0 < t.gap && t.gap <= cap, || {
        "0 < gap <= cap fails at (1,1)".into()
    })?;
    Ok(format!(
        "min gap/phi^2 {:e}, min upper margin {:e}; at (1,1) gap {:.7}, cap {:.7}",
        lower.min_margin.unwrap(),
        upper.min_margin.unwrap(),
        t.gap,
        cap
    ))
}

fn kanter() -> Outcome {
    let grid = GridSpec::radii(30.0, 0.1).map_err(|e| e.to_string())?;
    ensure(grid.x_values.len() == 301, || {
        "r grid must have 301 points".into()
    })?;
    let r = run_check("kanter_conj2", &grid, 1e-10)?;
    let mut worst: f64 = 0.0;
    for k in 0..=30u32 {
        let binom = central_binomial_probability(k).map_err(|e| e.to_string())?;
        let p = kanter_p(k as f64).map_err(|e| e.to_string())?;
        worst = worst.max(((p - binom) / binom).abs());
    }
    ensure(worst <= 1e-12, || {
        format!("binomial vs gamma form: {worst:e}")
    })?;
    Ok(format!(
        "min log margin {:e}; integer-r relative difference {worst:e}",
        r.min_margin.unwrap()
    ))
}

fn kanter_a_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let a = kanter_a(r).map_err(|e| e.to_string())?.value;
        let direct = phi(o(0.0), 2.0 * r).map_err(|e| e.to_string())?.value
            - kanter_p(r).map_err(|e| e.to_string())?;
        worst = worst.max((a - direct).abs());
    }
    ensure(worst <= 1e-8, || format!("|A - (phi - p)| = {worst:e}"))?;
    let grid = default_grid_for("kanter_A_nonneg").map_err(|e| e.to_string())?;
    let r = run_check("kanter_A_nonneg", &grid, 1e-10)?;
    Ok(format!(
        "max |A - (phi - p)| {worst:e}; min A {:e} over {} radii",
        r.min_margin.unwrap(),
        r.points_evaluated
    ))
}

fn sign_patterns() -> Outcome {
    let grid = GridSpec::default_grid();
    let mut worst = f64::INFINITY;
    for &nu in &grid.nu_values {
        for &x in &grid.x_values {
            for m in 0..=4u32 {
                let d = psi_x_derivative(o(nu), x, m).map_err(|e| e.to_string())?;
                let signed = if m % 2 == 0 { d } else { -d };
                ensure(signed >= -1e-9, || {
                    format!("x-derivative m={m} at ({nu}, {x}): {d:e}")
                })?;
                worst = worst.min(signed);
            }
            for m in 0..=2u32 {
                let d = psi_nu_derivative(o(nu), x, m).map_err(|e| e.to_string())?;
                let signed = if m % 2 == 0 { d } else { -d };
                ensure(signed >= -1e-9, || {
                    format!("nu-derivative m={m} at ({nu}, {x}): {d:e}")
                })?;
                worst = worst.min(signed);
            }
        }
    }
    let cx = run_check("complete_monotone_x", &grid, 1e-9)?;
    let cn = run_check("nu_complete_monotone", &grid, 1e-9)?;
    Ok(format!(
        "min signed derivative {worst:e}; normalised minima {:e} (x), {:e} (nu)",
        cx.min_margin.unwrap(),
        cn.min_margin.unwrap()
    ))
}

fn log_derivative_identity() -> Outcome {
    let r = run_check("log_deriv_identity", &GridSpec::default_grid(), 1e-6)?;
    Ok(format!(
        "max |fd - closed| {:e} over {} interior points",
        -r.min_margin.unwrap(),
        r.points_evaluated
    ))
}

fn neumann_theta_delta() -> Outcome {
    let n = run_check(
        "neumann_identity",
        &default_grid_for("neumann_identity").map_err(|e| e.to_string())?,
        1e-9,
    )?;
    let grid = default_grid_for("theta_positive").map_err(|e| e.to_string())?;
    let t = run_check("theta_positive", &grid, 0.0)?;
    strictly_positive(&t)?;
    let d = run_check("delta_positive", &grid, 0.0)?;
    strictly_positive(&d)?;
    Ok(format!(
        "max product residual {:e}; min relative theta {:e}, delta {:e}",
        -n.min_margin.unwrap(),
        t.min_margin.unwrap(),
        d.min_margin.unwrap()
    ))
}

fn monotonicity_suite() -> Outcome {
    let ids = [
        "nu_decreasing",
        "weighted_increasing_d",
        "weighted_increasing_e",
        "weighted_increasing_f",
        "log_convex_x",
        "geom_concave_x",
    ];
    let mut parts = Vec::new();
    for id in ids {
        let on_default = run_check(id, &GridSpec::default_grid(), 1e-9)?;
        let on_own = run_check(id, &default_grid_for(id).map_err(|e| e.to_string())?, 1e-9)?;
        let m = on_default
            .min_margin
            .unwrap()
            .min(on_own.min_margin.unwrap());
        parts.push(format!("{id} {m:.1e}"));
    }
    Ok(parts.join(", "))
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_phi-bessel");
    let tabulate = || {
        Command::new(bin)
            .args([
                "tabulate",
                "--nu-list",
                "-0.25,0,1",
                "--x-geom",
                "0.001",
                "50",
                "40",
                "--format",
                "csv",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = tabulate()?;
    let b = tabulate()?;
    ensure(a.status.success(), || {
        format!("tabulate exited {:?}", a.status.code())
    })?;
    ensure(a.stdout == b.stdout, || {
        "tabulate output differs between runs".into()
    })?;
    ensure(
        String::from_utf8_lossy(&a.stdout).lines().count() == 121,
        || "expected header plus 120 rows".into(),
    )?;
    let all = Command::new(bin)
        .args(["check", "--all"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(all.status.code() == Some(0), || {
        format!(
            "check --all exited {:?}:\n{}",
            all.status.code(),
            String::from_utf8_lossy(&all.stdout)
        )
    })?;
    Ok(format!(
        "{} identical bytes; check --all exit 0",
        a.stdout.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("closed-form anchor at nu = -1/2", closed_form_anchor),
        ("series and integral agree", cross_method),
        ("two-sided envelope", bound_sandwich),
        ("Turan-type inequality", turan),
        ("Kanter inequality", kanter),
        ("A(r) consistency and sign", kanter_a_consistency),
        ("complete monotonicity sign patterns", sign_patterns),
        ("log-derivative identity", log_derivative_identity),
        ("Neumann product, Theta and Delta", neumann_theta_delta),
        ("monotonicity and convexity suite", monotonicity_suite),
        ("CLI determinism and full check", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
