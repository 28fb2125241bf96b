use frack::special::{gamma, ln_gamma, mittag_leffler, ml1, ml2, pochhammer, reciprocal_gamma, MLParams};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn exponential_and_cosh_reductions() {
    for z in [-4.0f64, -1.0, 0.0, 0.5, 3.0] {
        // summing the series for negative z cancels terms as large as e^{|z|}
        let cancellation = f64::exp(z.abs() - z);
        assert!(rel(ml1(1.0, z).unwrap(), f64::exp(z)) < 1e-14 * cancellation);
        assert!(rel(ml1(2.0, z * z).unwrap(), f64::cosh(z)) < 1e-13);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(MLParams::new(0.0, 1.0, 1.0).is_err());
    assert!(MLParams::new(1.0, 0.0, 1.0).is_err());
    assert!(MLParams::new(1.0, 1.0, -1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..20.0) {
        prop_assert!(rel(gamma(x + 1.0), x * gamma(x)) < 1e-13);
        prop_assert!((ln_gamma(x) - gamma(x).ln()).abs() < 1e-12 * ln_gamma(x).abs().max(1.0));
        prop_assert!(rel(reciprocal_gamma(x), 1.0 / gamma(x)) < 1e-14);
    }

    #[test]
    fn pochhammer_is_gamma_ratio(g in 0.1f64..5.0, k in 0u32..12) {
        prop_assert!(rel(pochhammer(g, k), gamma(g + k as f64) / gamma(g)) < 1e-12);
    }

    // E_{α,β}(z) = 1/Γ(β) + z E_{α,α+β}(z)
    #[test]
    fn ml_shift_recurrence(a in 0.3f64..1.5, b in 0.2f64..2.5, z in -5.0f64..3.0) {
        let lhs = ml2(a, b, z).unwrap();
        let rhs = reciprocal_gamma(b) + z * ml2(a, a + b, z).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gamma_one_is_two_parameter(a in 0.3f64..1.5, b in 0.2f64..3.0, z in -5.0f64..5.0) {
        let three = mittag_leffler(MLParams::new(a, b, 1.0).unwrap(), z).unwrap();
        prop_assert!(rel(three, ml2(a, b, z).unwrap()) < 1e-9);
    }

    // completely monotone on the negative axis for 0 < α ≤ 1
    #[test]
    fn relaxation_is_decreasing(a in 0.1f64..1.0, x in 0.0f64..50.0, dx in 0.01f64..5.0) {
        let e1 = ml1(a, -x).unwrap();
        let e2 = ml1(a, -x - dx).unwrap();
        prop_assert!(e1 > 0.0 && e1 <= 1.0);
        prop_assert!(e2 < e1 + 1e-14);
    }
}
