//! Closed-form envelopes of Φ_ν, weighted forms, and the Turán gap.

use std::f64::consts::{FRAC_2_PI, LN_2};

use serde::{Deserialize, Serialize};

use crate::bessel::Order;
use crate::error::{require_positive, Error, Result};
use crate::phi::{phi, phi_extended, phi_series};
use crate::scalar::ln_gamma_unchecked;

fn require_above_half(nu: Order) -> Result<f64> {
    let v = nu.value();
    if v > -0.5 {
        Ok(v)
    } else {
        Err(Error::domain("nu must exceed -1/2"))
    }
}

/// (ν+1/2)^{ν+1/2} / (2^{2ν+1/2} Γ(ν+1) (x+ν/2+1/4)^{ν+1/2}).
pub fn phi_lower(nu: Order, x: f64) -> Result<f64> {
    require_positive("x", x)?;
    let v = require_above_half(nu)?;
    let a = v + 0.5;
    let ln = a * a.ln()
        - (2.0 * v + 0.5) * LN_2
        - ln_gamma_unchecked(v + 1.0)
        - a * (x + 0.5 * v + 0.25).ln();
    Ok(ln.exp())
}

/// √(2/π) (x+ν/2+1/4)^{−(ν+1/2)}.
pub fn phi_upper(nu: Order, x: f64) -> Result<f64> {
    require_positive("x", x)?;
    let v = require_above_half(nu)?;
    Ok((0.5 * FRAC_2_PI.ln() - (v + 0.5) * (x + 0.5 * v + 0.25).ln()).exp())
}

/// Offset added to x in the weight of [`weighted_phi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shift {
    /// w(x) = x
    None,
    /// w(x) = x + ν/2
    HalfNu,
    /// w(x) = x + ν/2 + 1/4
    HalfNuPlusQuarter,
}

impl Shift {
    pub const ALL: [Shift; 3] = [Shift::None, Shift::HalfNu, Shift::HalfNuPlusQuarter];

    pub fn weight_base(self, nu: f64, x: f64) -> f64 {
        match self {
            Shift::None => x,
            Shift::HalfNu => x + 0.5 * nu,
            Shift::HalfNuPlusQuarter => x + 0.5 * nu + 0.25,
        }
    }
}

/// w(x)^{ν+1/2} Φ_ν(x) for ν ≥ −1/2. The weight base must be positive; for
/// ν < 0 the `HalfNu` base vanishes at x = −ν/2.
pub fn weighted_phi(nu: Order, x: f64, shift: Shift) -> Result<f64> {
    require_positive("x", x)?;
    let v = nu.value();
    if v < -0.5 {
        return Err(Error::domain("nu must be at least -1/2"));
    }
    let p = phi(nu, x)?.value;
    let a = v + 0.5;
    if a == 0.0 {
        return Ok(p);
    }
    let base = shift.weight_base(v, x);
    if !(base > 0.0) {
        return Err(Error::domain("weight base x + shift must be positive"));
    }
    Ok((a * base.ln()).exp() * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuranGap {
    /// Φ_ν² − Φ_{ν−1} Φ_{ν+1}
    pub gap: f64,
    /// Φ_ν²/(ν+1/2); absent for ν ≤ −1/2 where it is not positive.
    pub cap: Option<f64>,
    /// Φ_ν², the scale of both sides.
    pub phi_sq: f64,
}

/// The Turán-type gap at (ν, x) for ν > −1. Φ_{ν−1} with ν − 1 ≤ −1 uses the
/// recurrence-extended Bessel values.
pub fn turan_gap(nu: Order, x: f64) -> Result<TuranGap> {
    require_positive("x", x)?;
    let v = nu.value();
    let centre = phi_series(nu, x)?;
    let below = phi_extended(v - 1.0, x)?;
    let above = phi_series(Order::new(v + 1.0)?, x)?;
    let phi_sq = centre * centre;
    Ok(TuranGap {
        gap: phi_sq - below * above,
        cap: (v > -0.5).then(|| phi_sq / (v + 0.5)),
        phi_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::kanter_p;
    use approx::assert_relative_eq;

    fn o(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn envelope_values() {
        assert_relative_eq!(
            phi_lower(o(0.0), 2.0).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            phi_upper(o(0.0), 2.0).unwrap(),
            0.531_923_040_535_243_5,
            max_relative = 1e-14
        );
        let p = phi(o(0.0), 2.0).unwrap().value;
        assert!(phi_lower(o(0.0), 2.0).unwrap() < p && p < phi_upper(o(0.0), 2.0).unwrap());
        let near = -0.5 + 1e-9;
        assert!(phi_lower(o(near), 3.0).unwrap().is_finite());
        assert!((phi_upper(o(near), 3.0).unwrap() - FRAC_2_PI.sqrt()).abs() < 1e-8);
        assert!(matches!(phi_lower(o(-0.5), 1.0), Err(Error::Domain(_))));
        assert!(matches!(phi_upper(o(0.0), 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn sandwich_on_grid() {
        for nu in [-0.49, -0.25, 0.0, 0.5, 1.0, 2.0, 5.0] {
            for k in 0..=40 {
                let x = 1e-3 * 1e5f64.powf(k as f64 / 40.0);
                let p = phi(o(nu), x).unwrap().value;
                assert!(phi_lower(o(nu), x).unwrap() < p, "lower nu {nu} x {x}");
                assert!(p < phi_upper(o(nu), x).unwrap(), "upper nu {nu} x {x}");
            }
        }
    }

    #[test]
    fn weighted_examples() {
        for shift in Shift::ALL {
            for x in [0.01, 1.0, 50.0] {
                assert_eq!(weighted_phi(o(-0.5), x, shift).unwrap(), FRAC_2_PI.sqrt());
            }
        }
        let v1 = weighted_phi(o(0.0), 1.0, Shift::HalfNuPlusQuarter).unwrap();
        let v2 = weighted_phi(o(0.0), 2.0, Shift::HalfNuPlusQuarter).unwrap();
        assert!(v1 <= v2);
        assert_relative_eq!(
            weighted_phi(o(0.0), 1e-12, Shift::HalfNuPlusQuarter).unwrap(),
            0.5,
            max_relative = 1e-10
        );
        assert!(matches!(
            weighted_phi(o(-0.25), 0.1, Shift::HalfNu),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn weighted_monotone_and_ordered() {
        for nu in [-0.5, -0.25, 0.0, 0.5, 1.0, 2.0, 5.0] {
            for shift in Shift::ALL {
                let mut prev: Option<f64> = None;
                for k in 0..=60 {
                    let x = 1e-3 * 1e6f64.powf(k as f64 / 60.0);
                    let Ok(w) = weighted_phi(o(nu), x, shift) else {
                        continue;
                    };
                    if let Some(p) = prev {
                        assert!(w >= p * (1.0 - 1e-12), "nu {nu} {shift:?} x {x}");
                    }
                    prev = Some(w);
                }
            }
            if nu > 0.0 {
                for x in [0.01, 1.0, 30.0] {
                    let a = weighted_phi(o(nu), x, Shift::None).unwrap();
                    let b = weighted_phi(o(nu), x, Shift::HalfNu).unwrap();
                    let c = weighted_phi(o(nu), x, Shift::HalfNuPlusQuarter).unwrap();
                    assert!(a <= b && b <= c);
                }
            }
        }
    }

    #[test]
    fn turan_reference_values() {
        let t = turan_gap(o(1.0), 1.0).unwrap();
        assert_relative_eq!(t.gap, 0.027_349_962_590_331_967, max_relative = 1e-12);
        assert_relative_eq!(
            t.cap.unwrap(),
            0.044_324_137_293_898_797,
            max_relative = 1e-12
        );
        let t = turan_gap(o(2.0), 5.0).unwrap();
        assert_relative_eq!(t.gap, 9.361_989_878_608_485e-6, max_relative = 1e-10);
        assert_relative_eq!(
            t.cap.unwrap(),
            2.251_503_805_846_562e-5,
            max_relative = 1e-12
        );
        assert!(turan_gap(o(-0.5 + 1e-3), 2.0).unwrap().gap > 0.0);
        assert!(turan_gap(o(-0.75), 2.0).unwrap().cap.is_none());
    }

    #[test]
    fn turan_on_grid() {
        for nu in [0.01, 0.5, 1.0, 2.0, 5.0] {
            for x in [0.01, 0.3, 1.0, 5.0, 20.0, 50.0] {
                let t = turan_gap(o(nu), x).unwrap();
                assert!(t.gap > 0.0, "nu {nu} x {x}");
                if nu > 0.5 {
                    assert!(t.gap <= t.cap.unwrap(), "nu {nu} x {x}");
                }
            }
        }
    }

    #[test]
    fn kanter_inequality() {
        for k in 1..=300 {
            let r = 0.1 * k as f64;
            assert!(
                phi(o(0.0), 2.0 * r).unwrap().value >= kanter_p(r).unwrap(),
                "r {r}"
            );
        }
    }
}
