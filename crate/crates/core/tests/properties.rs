use phi_bessel::bessel::{bessel_i_scaled, bessel_ratio};
use phi_bessel::bounds::{phi_lower, phi_upper};
use phi_bessel::phi::{phi, phi_integral, phi_log_deriv, phi_series};
use phi_bessel::Order;
use proptest::prelude::*;

fn o(nu: f64) -> Order {
    Order::new(nu).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_positive_and_decreasing(nu in -0.499f64..6.0, x in 1e-3f64..200.0, f in 1.01f64..3.0) {
        let a = phi(o(nu), x).unwrap().value;
        let b = phi(o(nu), x * f).unwrap().value;
        prop_assert!(a > 0.0 && a.is_finite());
        prop_assert!(b < a);
    }

    #[test]
    fn envelope_holds(nu in -0.45f64..6.0, x in 1e-3f64..100.0) {
        let p = phi(o(nu), x).unwrap().value;
        prop_assert!(phi_lower(o(nu), x).unwrap() < p);
        prop_assert!(p < phi_upper(o(nu), x).unwrap());
    }

    #[test]
    fn series_matches_quadrature(nu in -0.4f64..5.0, x in 1e-3f64..50.0) {
        let s = phi_series(o(nu), x).unwrap();
        let q = phi_integral(o(nu), x).unwrap().value;
        prop_assert!(((s - q) / s).abs() <= 1e-10);
    }

    #[test]
    fn log_derivative_in_range(nu in -0.499f64..8.0, x in 1e-3f64..500.0) {
        let l = phi_log_deriv(o(nu), x).unwrap();
        prop_assert!(l < 0.0 && l > -(2.0 * nu + 1.0));
    }

    #[test]
    fn ratio_between_classical_bounds(nu in 0.0f64..8.0, x in 1e-2f64..100.0) {
        // x / (ν + 1 + sqrt(x² + (ν + 1)²)) <= r <= x / (ν + 1/2 + sqrt(x² + (ν + 1/2)²))
        let r = bessel_ratio(o(nu), x).unwrap();
        let lo = x / (nu + 1.0 + (x * x + (nu + 1.0).powi(2)).sqrt());
        let hi = x / (nu + 0.5 + (x * x + (nu + 0.5).powi(2)).sqrt());
        prop_assert!(lo <= r * (1.0 + 1e-14) && r <= hi * (1.0 + 1e-14));
    }

    #[test]
    fn scaled_bessel_decreases_in_order(nu in -0.5f64..6.0, x in 1e-2f64..100.0) {
        prop_assert!(bessel_i_scaled(o(nu + 1.0), x).unwrap() < bessel_i_scaled(o(nu), x).unwrap());
    }
}
