//! Exponentially scaled modified Bessel functions of the first kind.
//!
//! Everything here works with `e^{-x} I_ν(x)` so that no intermediate
//! overflows; the raw `I_ν(x)` exceeds binary64 near x = 709.

use std::f64::consts::{FRAC_2_PI, LN_2};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::scalar::{ln_gamma_unchecked, recip_gamma};

/// Stop summing once a term falls below this fraction of the partial sum.
const SERIES_REL_TOL: f64 = 1e-17;
const CF_TOL: f64 = 1e-15;
const CF_MAX_ITER: usize = 10_000;
/// Rescale the running series by 2^-RESCALE_BITS whenever a term exceeds 2^RESCALE_BITS.
const RESCALE_BITS: i32 = 600;

/// A Bessel order ν. Construction enforces ν > −1, where the power series of
/// `I_ν` has a positive leading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu > -1.0 {
            Ok(Order(nu))
        } else {
            Err(Error::domain("nu must exceed -1"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        Order::new(nu)
    }
}

/// A positive series kept as `mantissa · e^{ln_scale}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledSum {
    pub mantissa: f64,
    pub ln_scale: f64,
    pub terms: usize,
}

impl ScaledSum {
    pub fn value_times_exp(self, ln_factor: f64) -> f64 {
        self.mantissa * (self.ln_scale + ln_factor).exp()
    }
}

/// Sums `Σ t_k` with `t_0 = 1`, `t_{k+1} = t_k · ratio(k)` and all terms
/// positive. Terms are rescaled by powers of two as they grow so the sum can
/// represent values far beyond `f64::MAX`.
pub(crate) fn sum_positive_series(
    ratio: impl Fn(usize) -> f64,
    cap: usize,
) -> std::result::Result<ScaledSum, ScaledSum> {
    let scale_up = 2f64.powi(RESCALE_BITS);
    let scale_down = 2f64.powi(-RESCALE_BITS);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut shifts = 0i64;
    for k in 0..cap {
        let rho = ratio(k);
        term *= rho;
        sum += term;
        if term > scale_up {
            term *= scale_down;
            sum *= scale_down;
            shifts += 1;
        }
        if rho < 1.0 && term <= SERIES_REL_TOL * sum {
            return Ok(ScaledSum {
                mantissa: sum,
                ln_scale: shifts as f64 * RESCALE_BITS as f64 * LN_2,
                terms: k + 2,
            });
        }
    }
    Err(ScaledSum {
        mantissa: sum,
        ln_scale: shifts as f64 * RESCALE_BITS as f64 * LN_2,
        terms: cap + 1,
    })
}

pub(crate) fn series_cap(x: f64) -> usize {
    500 + 2 * x.ceil().min(1e8) as usize
}

/// `e^{-x} I_ν(x)` for ν > −1 and x > 0.
///
/// Half-integer orders ±1/2 use the elementary closed forms; everything else
/// sums the ascending series in scaled form.
pub fn bessel_i_scaled(nu: Order, x: f64) -> Result<f64> {
    require_positive("x", x)?;
    scaled_i(nu.0, x)
}

pub(crate) fn scaled_i(nu: f64, x: f64) -> Result<f64> {
    if nu == -0.5 {
        return Ok((FRAC_2_PI / x).sqrt() * 0.5 * (1.0 + (-2.0 * x).exp()));
    }
    if nu == 0.5 {
        return Ok((FRAC_2_PI / x).sqrt() * 0.5 * -(-2.0 * x).exp_m1());
    }
    let y = 0.5 * x;
    let y2 = y * y;
    let sum = sum_positive_series(
        |n| y2 / ((n as f64 + 1.0) * (n as f64 + nu + 1.0)),
        series_cap(x),
    )
    .map_err(|partial| Error::Convergence {
        what: "scaled Bessel series",
        estimate: partial.value_times_exp(nu * y.ln() - ln_gamma_unchecked(nu + 1.0) - x),
    })?;
    Ok(sum.value_times_exp(nu * y.ln() - ln_gamma_unchecked(nu + 1.0) - x))
}

/// `e^{-z} (z/2)^{-μ} I_μ(z)` for μ > −1 and z ≥ 0: the scaled Bessel value
/// with its algebraic endpoint behaviour divided out. Smooth in z, equal to
/// 1/Γ(μ+1) at z = 0.
pub(crate) fn reduced_i(mu: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(recip_gamma(mu + 1.0));
    }
    let y = 0.5 * z;
    let y2 = y * y;
    let sum = sum_positive_series(
        |n| y2 / ((n as f64 + 1.0) * (n as f64 + mu + 1.0)),
        series_cap(z),
    )
    .map_err(|partial| Error::Convergence {
        what: "reduced Bessel series",
        estimate: partial.value_times_exp(-ln_gamma_unchecked(mu + 1.0) - z),
    })?;
    Ok(sum.value_times_exp(-ln_gamma_unchecked(mu + 1.0) - z))
}

/// `e^{-x} I_μ(x)` for any μ > −2, extending below −1 through
/// `I_μ = I_{μ+2} + 2(μ+1)/x · I_{μ+1}`. The value may be negative for
/// μ ∈ (−2, −1).
pub(crate) fn scaled_i_extended(mu: f64, x: f64) -> Result<f64> {
    if mu > -1.0 {
        scaled_i(mu, x)
    } else if mu > -2.0 {
        Ok(scaled_i(mu + 2.0, x)? + 2.0 * (mu + 1.0) / x * scaled_i(mu + 1.0, x)?)
    } else {
        Err(Error::domain("order must exceed -2"))
    }
}

/// The ratio `I_{ν+1}(x) / I_ν(x)` for ν ≥ −1/2, x > 0.
///
/// Evaluated from the continued fraction
/// `1 / (2(ν+1)/x + 1 / (2(ν+2)/x + …))` by the modified Lentz method. If the
/// fraction has not settled within its iteration budget (very large x) the
/// quotient of scaled series values is returned instead.
pub fn bessel_ratio(nu: Order, x: f64) -> Result<f64> {
    require_positive("x", x)?;
    if nu.0 < -0.5 {
        return Err(Error::domain("nu must be at least -1/2"));
    }
    if nu.0 == -0.5 {
        return Ok(x.tanh());
    }
    match ratio_continued_fraction(nu.0, x) {
        Some(r) => Ok(r),
        None => Ok(scaled_i(nu.0 + 1.0, x)? / scaled_i(nu.0, x)?),
    }
}

pub(crate) fn ratio_continued_fraction(nu: f64, x: f64) -> Option<f64> {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..=CF_MAX_ITER {
        let b = 2.0 * (nu + k as f64) / x;
        d += b;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < CF_TOL {
            return Some(f);
        }
    }
    None
}
