//! Φ_ν, Ψ_ν and their derivatives.
//!
//! Two independent evaluation routes are kept:
//!
//! * the ascending series
//!   `x^{-ν}[I_ν(x) + I_{ν+1}(x)] = Σ_n a_n (x/2)^{2n} + b_n (x/2)^{2n+1}`,
//!   with `a_n = 1/(2^ν n! Γ(n+ν+1))` and `b_n = 1/(2^ν n! Γ(n+ν+2))`,
//!   summed in scaled form;
//! * quadrature of
//!   `Ψ_ν(x) = ∫_0^π (1 − cos θ)(sin θ)^{2ν} e^{−x(1+cos θ)} dθ`,
//!   valid for ν > −1/2.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::bessel::{
    bessel_ratio, scaled_i, scaled_i_extended, series_cap, sum_positive_series, Order,
};
use crate::error::{require_positive, Error, Result};
use crate::quadrature::{integrate_endpoint_power, sinc, Estimate};
use crate::scalar::ln_gamma_unchecked;

/// Relative tolerance for the Ψ quadrature.
const PSI_TOL: f64 = 1e-12;
pub const MAX_X_DERIVATIVE: u32 = 8;
pub const MAX_NU_DERIVATIVE: u32 = 4;

/// How a value of Φ_ν was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    Integral,
    HalfIntegerClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEval {
    pub value: f64,
    pub method: Method,
    /// Absolute error estimate.
    pub err_estimate: f64,
}

/// Which evaluation route [`phi_with`] should take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    /// Closed form at ν = −1/2, the series otherwise, quadrature if the
    /// series fails to converge.
    #[default]
    Auto,
    Series,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhiOptions {
    pub method: MethodChoice,
    /// Admit ν ∈ (−1, −1/2), evaluated by the series alone.
    pub extended_range: bool,
}

/// Φ_ν(x) for ν ≥ −1/2 and x > 0.
pub fn phi(nu: Order, x: f64) -> Result<PhiEval> {
    phi_with(nu, x, PhiOptions::default())
}

pub fn phi_with(nu: Order, x: f64, options: PhiOptions) -> Result<PhiEval> {
    require_positive("x", x)?;
    let v = nu.value();
    if v < -0.5 {
        if !options.extended_range {
            return Err(Error::domain(
                "nu below -1/2 requires the extended-range option",
            ));
        }
        if options.method == MethodChoice::Integral {
            return Err(Error::domain(
                "the integral representation requires nu > -1/2",
            ));
        }
        return series_eval(v, x);
    }
    match options.method {
        MethodChoice::Series => series_eval(v, x),
        MethodChoice::Integral => integral_eval(nu, x),
        MethodChoice::Auto if v == -0.5 => Ok(PhiEval {
            value: FRAC_2_PI.sqrt(),
            method: Method::HalfIntegerClosedForm,
            err_estimate: 0.0,
        }),
        MethodChoice::Auto => match series_eval(v, x) {
            Err(Error::Convergence { .. }) if v > -0.5 => integral_eval(nu, x),
            other => other,
        },
    }
}

/// Φ_ν(0⁺) = 1/(2^ν Γ(ν+1)).
pub fn phi_at_zero(nu: Order) -> f64 {
    let v = nu.value();
    (-v * LN_2 - ln_gamma_unchecked(v + 1.0)).exp()
}

fn series_eval(nu: f64, x: f64) -> Result<PhiEval> {
    let y = 0.5 * x;
    // t_{2n+1}/t_{2n} = y/(n+ν+1), t_{2n+2}/t_{2n+1} = y/(n+1)
    let ratio = |k: usize| {
        let n = (k / 2) as f64;
        if k.is_multiple_of(2) {
            y / (n + nu + 1.0)
        } else {
            y / (n + 1.0)
        }
    };
    let ln_prefactor = -nu * LN_2 - ln_gamma_unchecked(nu + 1.0) - x;
    let sum =
        sum_positive_series(ratio, 2 * series_cap(x)).map_err(|partial| Error::Convergence {
            what: "Phi power series",
            estimate: partial.value_times_exp(ln_prefactor),
        })?;
    let value = sum.value_times_exp(ln_prefactor);
    let exponent = (sum.ln_scale + ln_prefactor).abs();
    Ok(PhiEval {
        value,
        method: Method::Series,
        err_estimate: value * f64::EPSILON * (sum.terms as f64 + exponent + 1.0),
    })
}

/// Φ_ν(x) from the ascending double series, for ν > −1.
pub fn phi_series(nu: Order, x: f64) -> Result<f64> {
    require_positive("x", x)?;
    Ok(series_eval(nu.value(), x)?.value)
}

/// x^{−μ} e^{−x}[I_μ(x) + I_{μ+1}(x)] for μ > −2, where the Bessel values
/// of order below −1 come from the downward recurrence. Used for Φ_{ν−1}.
pub(crate) fn phi_extended(mu: f64, x: f64) -> Result<f64> {
    if mu > -1.0 {
        return series_eval(mu, x).map(|e| e.value);
    }
    Ok((-mu * x.ln()).exp() * (scaled_i_extended(mu, x)? + scaled_i(mu + 1.0, x)?))
}

/// √π 2^ν Γ(ν+1/2), the factor relating Ψ_ν to Φ_ν.
pub(crate) fn psi_normaliser(nu: f64) -> f64 {
    (0.5 * PI.ln() + nu * LN_2 + ln_gamma_unchecked(nu + 0.5)).exp()
}

/// ∫_0^π (1−cos θ)(1+cos θ)^{mx} (sin θ)^{2ν} (−2 ln sin θ)^{mnu} e^{−x(1+cos θ)} dθ.
///
/// The range is split at π/2 and each half is written in its distance φ to
/// the nearer endpoint, where the integrand is a known power of φ times a
/// smooth factor.
fn psi_moment(nu: f64, x: f64, mx: u32, mnu: u32) -> Result<Estimate> {
    let two_nu = 2.0 * nu;
    let log_factor = |phi: f64, ln_phi: f64| {
        if mnu == 0 {
            1.0
        } else {
            (-2.0 * (ln_phi + sinc(phi).ln())).powi(mnu as i32)
        }
    };
    // θ = φ near 0: 1 − cos θ = (φ²/2) sinc²(φ/2)
    let near_zero = |phi: f64, ln_phi: f64| {
        let s = sinc(0.5 * phi);
        let c = (0.5 * phi).cos();
        0.5 * s
            * s
            * (2.0 * c * c).powi(mx as i32)
            * (two_nu * sinc(phi).ln() - 2.0 * x * c * c).exp()
            * log_factor(phi, ln_phi)
    };
    // θ = π − φ: 1 + cos θ = (φ²/2) sinc²(φ/2)
    let near_pi = |phi: f64, ln_phi: f64| {
        let s = sinc(0.5 * phi);
        let c = (0.5 * phi).cos();
        let h = (0.5 * phi).sin();
        2.0 * c
            * c
            * (0.5 * s * s).powi(mx as i32)
            * (two_nu * sinc(phi).ln() - 2.0 * x * h * h).exp()
            * log_factor(phi, ln_phi)
    };
    let a = integrate_endpoint_power(near_zero, 2.0 + two_nu, FRAC_PI_2, PSI_TOL)?;
    let b = integrate_endpoint_power(near_pi, two_nu + 2.0 * mx as f64, FRAC_PI_2, PSI_TOL)?;
    Ok(Estimate {
        value: a.value + b.value,
        error: a.error + b.error,
        validated: true,
    })
}

fn require_integral_domain(nu: Order, x: f64) -> Result<()> {
    require_positive("x", x)?;
    if nu.value() > -0.5 {
        Ok(())
    } else {
        Err(Error::domain(
            "the integral representation requires nu > -1/2",
        ))
    }
}

fn integral_eval(nu: Order, x: f64) -> Result<PhiEval> {
    require_integral_domain(nu, x)?;
    let est = psi_moment(nu.value(), x, 0, 0)?;
    let norm = psi_normaliser(nu.value());
    Ok(PhiEval {
        value: est.value / norm,
        method: Method::Integral,
        err_estimate: est.error / norm,
    })
}

/// Φ_ν(x) as Ψ_ν(x)/(√π 2^ν Γ(ν+1/2)) with Ψ_ν by quadrature, for ν > −1/2.
/// Returns the value with its absolute error estimate.
pub fn phi_integral(nu: Order, x: f64) -> Result<Estimate> {
    let e = integral_eval(nu, x)?;
    Ok(Estimate {
        value: e.value,
        error: e.err_estimate,
        validated: true,
    })
}

/// Ψ_ν(x) = ∫_{−1}^{1} (1−t)(1−t²)^{ν−1/2} e^{−x(1+t)} dt by quadrature.
pub fn psi_upper(nu: Order, x: f64) -> Result<f64> {
    psi_x_derivative(nu, x, 0)
}

/// The m-th x-derivative of Ψ_ν, for 0 ≤ m ≤ 8:
/// `(−1)^m ∫ (1−t)(1+t)^m (1−t²)^{ν−1/2} e^{−x(1+t)} dt`.
pub fn psi_x_derivative(nu: Order, x: f64, m: u32) -> Result<f64> {
    require_integral_domain(nu, x)?;
    if m > MAX_X_DERIVATIVE {
        return Err(Error::domain(format!(
            "x-derivative order above {MAX_X_DERIVATIVE} is unsupported"
        )));
    }
    let v = psi_moment(nu.value(), x, m, 0)?.value;
    Ok(if m.is_multiple_of(2) { v } else { -v })
}

/// The m-th ν-derivative of Ψ_ν, for 0 ≤ m ≤ 4:
/// `(−1)^m ∫ (1−t)(1−t²)^{ν−1/2} (ln 1/(1−t²))^m e^{−x(1+t)} dt`.
pub fn psi_nu_derivative(nu: Order, x: f64, m: u32) -> Result<f64> {
    require_integral_domain(nu, x)?;
    if m > MAX_NU_DERIVATIVE {
        return Err(Error::domain(format!(
            "nu-derivative order above {MAX_NU_DERIVATIVE} is unsupported"
        )));
    }
    let v = psi_moment(nu.value(), x, 0, m)?.value;
    Ok(if m.is_multiple_of(2) { v } else { -v })
}

/// x Φ′_ν(x) / Φ_ν(x) = −(2ν+1) r / (1 + r) with r = I_{ν+1}(x)/I_ν(x).
pub fn phi_log_deriv(nu: Order, x: f64) -> Result<f64> {
    require_positive("x", x)?;
    if nu.value() < -0.5 {
        return Err(Error::domain("nu must be at least -1/2"));
    }
    if nu.value() == -0.5 {
        return Ok(0.0);
    }
    let r = bessel_ratio(nu, x)?;
    Ok(-(2.0 * nu.value() + 1.0) * r / (1.0 + r))
}
