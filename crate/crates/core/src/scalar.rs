//! Scalar gamma-family kernels.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

// Lanczos approximation, g = 10.900511, n = 11 (Godfrey's coefficients).
const LANCZOS_G: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];
// ln(2 √(e/π))
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

// B_{2k}/(2k) for k = 1..7, asymptotic digamma expansion.
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Natural logarithm of the gamma function for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("log_gamma argument must be positive"));
    }
    Ok(ln_gamma_unchecked(z))
}

pub(crate) fn ln_gamma_unchecked(z: f64) -> f64 {
    if z == 1.0 || z == 2.0 {
        return 0.0;
    }
    if z < 0.5 {
        return ln_gamma_unchecked(z + 1.0) - z.ln();
    }
    let s = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (z + i as f64 - 1.0));
    s.ln() + LN_2_SQRT_E_OVER_PI + (z - 0.5) * ((z - 0.5 + LANCZOS_G) / std::f64::consts::E).ln()
}

/// Digamma ψ(z) = Γ′(z)/Γ(z) for `z > 0`.
///
/// Shifts the argument to `z ≥ 6` with ψ(z+1) = ψ(z) + 1/z, then sums the
/// asymptotic expansion in 1/z².
pub fn digamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("digamma argument must be positive"));
    }
    let mut acc = 0.0;
    let mut z = z;
    while z < 6.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    acc += z.ln() - 0.5 / z;
    let inv2 = 1.0 / (z * z);
    let mut term = inv2;
    for c in DIGAMMA_ASYMP {
        acc -= c * term;
        term *= inv2;
    }
    Ok(acc)
}

/// 1/Γ(z) for `z > -1`. Zero at `z = 0`, negative on `(-1, 0)`.
pub(crate) fn recip_gamma(z: f64) -> f64 {
    if z > 0.0 {
        (-ln_gamma_unchecked(z)).exp()
    } else if z == 0.0 {
        0.0
    } else {
        z * recip_gamma(z + 1.0)
    }
}

/// Kanter's comparison term Γ(2r+1) / Γ(r+1)² · 2^{-2r}.
///
/// For integer `r` this is the central binomial probability C(2r, r) 2^{-2r}.
/// Evaluated in log space; Γ(2r+1) alone overflows near r = 85.
pub fn kanter_p(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain("r must be nonnegative"));
    }
    if r == 0.0 {
        return Ok(1.0);
    }
    let log_p =
        ln_gamma_unchecked(2.0 * r + 1.0) - 2.0 * ln_gamma_unchecked(r + 1.0) - 2.0 * r * LN_2;
    Ok(log_p.exp())
}

/// Γ(r+1/2) / (√π Γ(r+1)), the Beta-function form of [`kanter_p`].
pub(crate) fn wallis_ratio(r: f64) -> f64 {
    (ln_gamma_unchecked(r + 0.5) - ln_gamma_unchecked(r + 1.0) - 0.5 * PI.ln()).exp()
}
