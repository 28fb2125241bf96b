use frack::diffusion::{self, DiffusionQuery};
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn rejects_out_of_range_order() {
    assert!(DiffusionQuery::new(2.5, 1.0, 0.0, 1.0).is_err());
    assert!(DiffusionQuery::new(0.0, 1.0, 0.0, 1.0).is_err());
    assert!(DiffusionQuery::new(0.5, 1.0, 0.0, 0.0).is_err());
}

#[test]
fn normalization_at_other_times() {
    for (nu, t) in [(0.7, 0.3), (1.3, 4.0)] {
        let rep = diffusion::normalization(nu, 1.0, t, 1000).unwrap();
        assert!((rep.total - 1.0).abs() < 1e-6, "nu={nu} t={t}: {}", rep.total);
    }
}

#[test]
fn fourier_mode_limits() {
    assert_eq!(diffusion::fourier_mode(0.6, 1.0, 0.0, 2.0).unwrap(), 1.0);
    let v = diffusion::fourier_mode(1.0, 1.0, 2.0, 0.5).unwrap();
    assert!((v - (-2.0f64).exp()).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gaussian_limit(x in -6.0f64..6.0, t in 0.1f64..4.0, c in 0.2f64..3.0) {
        let g = diffusion::green_function(&DiffusionQuery::new(1.0, c, x, t).unwrap()).unwrap();
        let exact = (-x * x / (4.0 * c * t)).exp() / (4.0 * PI * c * t).sqrt();
        prop_assert!((g - exact).abs() < 1e-10 * exact.max(1e-300) + 1e-15);
    }

    #[test]
    fn even_positive_and_peaked(nu in 0.1f64..1.95, x in 0.0f64..8.0, t in 0.2f64..3.0) {
        let at = |x: f64| diffusion::green_function(&DiffusionQuery::new(nu, 1.0, x, t).unwrap()).unwrap();
        let (a, b) = (at(x), at(-x));
        // the linear value may underflow; its logarithm stays finite
        let ln = diffusion::green_function_ln(&DiffusionQuery::new(nu, 1.0, x, t).unwrap()).unwrap();
        prop_assert!(ln.is_finite() && a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-15 * a);
        // beyond ν = 1 the maximum leaves the origin and moves towards the wave front
        if nu <= 1.0 {
            prop_assert!(at(0.0) >= a);
        }
    }

    // N(λ^{ν/2}x, λt) = λ^{−ν/2} N(x, t)
    #[test]
    fn self_similar(nu in 0.2f64..1.8, x in 0.0f64..4.0, lambda in 0.2f64..5.0) {
        let s = lambda.powf(nu / 2.0);
        let a = diffusion::green_function(&DiffusionQuery::new(nu, 1.0, x, 1.0).unwrap()).unwrap();
        let b = diffusion::green_function(&DiffusionQuery::new(nu, 1.0, s * x, lambda).unwrap()).unwrap();
        prop_assert!((s * b - a).abs() <= 1e-10 * a);
    }

    // deep in the tail the ratio to the envelope stays bounded
    #[test]
    fn envelope_is_tight(nu in 0.3f64..1.7, r in 6.0f64..12.0) {
        let q = DiffusionQuery::new(nu, 1.0, r, 1.0).unwrap();
        let d = diffusion::green_function_ln(&q).unwrap() - diffusion::asymptotic_estimate_ln(&q).unwrap();
        prop_assert!(d.abs() < 3.0, "log-ratio {}", d);
    }
}
