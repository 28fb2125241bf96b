use frack::hfunction::{self, instances, DEFAULT_MAX_TERMS};
use frack::special::{ml1, ml2};
use frack::FrackError;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn exponential_instance() {
    for z in [0.1, 1.0, 4.0] {
        let v = hfunction::evaluate(&instances::exponential(), z).unwrap();
        assert!(rel(v, (-z).exp()) < 1e-12);
    }
}

#[test]
fn relaxation_instances_match_mittag_leffler() {
    let nu = 0.6;
    for x in [0.2, 1.0, 3.0] {
        let v = hfunction::evaluate(&instances::mittag_leffler_one(nu), x).unwrap();
        assert!(rel(v, ml1(nu, -x).unwrap()) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residue_and_contour_agree(a in 0.4f64..1.4, b in 0.5f64..2.5, z in 0.05f64..4.0) {
        let spec = instances::mittag_leffler_two(a, b);
        let c = hfunction::evaluate_contour(&spec, z).unwrap().value;
        prop_assert!(rel(c, ml2(a, b, -z).unwrap()) < 1e-9);
        // the truncated series may decline, but only by reporting non-convergence
        match hfunction::evaluate_residue_series(&spec, z, DEFAULT_MAX_TERMS) {
            // max_term / |value| bounds the digits lost to cancellation
            Ok(r) if r.max_term <= 1e4 * r.value.abs() => {
                prop_assert!(rel(c, r.value) < 1e-8, "residue {} contour {}", r.value, c)
            }
            Ok(_) => {}
            Err(e) => prop_assert!(matches!(e, FrackError::NonConvergence { .. }), "{e}"),
        }
    }

    // H(z) under inverted parameters evaluated at 1/z
    #[test]
    fn argument_inversion(a in 0.4f64..1.2, z in 0.1f64..5.0) {
        let spec = instances::mittag_leffler_two(a, 1.1);
        let inv = hfunction::invert_argument(&spec);
        let lhs = hfunction::evaluate(&spec, z).unwrap();
        let rhs = hfunction::evaluate(&inv, 1.0 / z).unwrap();
        prop_assert!(rel(rhs, lhs) < 1e-9);
    }

    // z^σ H(z) through the shifted parameters
    #[test]
    fn power_shift(sigma in -0.8f64..0.8, z in 0.1f64..4.0) {
        let spec = instances::mittag_leffler_two(0.7, 1.3);
        let shifted = hfunction::power_shift(&spec, sigma);
        let lhs = z.powf(sigma) * hfunction::evaluate(&spec, z).unwrap();
        let rhs = hfunction::evaluate(&shifted, z).unwrap();
        prop_assert!(rel(rhs, lhs) < 1e-9);
    }
}
