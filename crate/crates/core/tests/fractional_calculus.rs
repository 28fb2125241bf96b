use frack::fractional::{caputo_derivative, power_rule, rl_derivative, rl_integral, SampledFunction};
use frack::special::gamma;
use proptest::prelude::*;

fn max_error(g: &SampledFunction, exact: impl Fn(f64) -> f64) -> f64 {
    g.t_grid()
        .iter()
        .zip(g.values())
        .filter(|(&t, _)| t > 0.0)
        .map(|(&t, &v)| (v - exact(t)).abs() / exact(t).abs().max(1.0))
        .fold(0.0, f64::max)
}

#[test]
fn caputo_of_constant_vanishes() {
    let f = SampledFunction::from_fn(|_| 2.5, 2.0, 401, 0.0).unwrap();
    let d = caputo_derivative(&f, 0.6).unwrap();
    assert!(d.values().iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn half_derivative_of_half_integral_restores() {
    let f = SampledFunction::from_fn(f64::sin, 2.0, 801, 1.0).unwrap();
    let back = rl_derivative(&rl_integral(&f, 0.5).unwrap(), 0.5).unwrap();
    assert!(max_error(&back, f64::sin) < 1e-5);
}

fn power_rule_error(mu: f64, nu: f64, points: usize) -> f64 {
    let f = SampledFunction::from_fn(|t| t.powf(mu - 1.0), 2.0, points, mu - 1.0).unwrap();
    max_error(&rl_integral(&f, nu).unwrap(), |t| power_rule(mu, nu, t))
}

#[test]
fn power_rule_convergence_order() {
    for mu in [1.0, 1.5, 2.0] {
        for nu in [0.3, 0.7, 1.2] {
            let (coarse, fine) = (power_rule_error(mu, nu, 257), power_rule_error(mu, nu, 513));
            // exact to rounding, or second order
            assert!(fine < 1e-13 || (coarse / fine).log2() >= 1.8, "mu={mu} nu={nu}: {coarse:e} -> {fine:e}");
        }
    }
    // a non-polynomial input exercises the order proper
    let err = |n: usize| {
        let f = SampledFunction::from_fn(|t| (-t).exp(), 2.0, n, 0.0).unwrap();
        let g = rl_integral(&f, 0.7).unwrap();
        let exact = |t: f64| -> f64 {
            // I^ν e^{−t} = t^ν Σ (−t)^k / Γ(k+ν+1)
            (0..60).map(|k| (-t).powi(k) / gamma(k as f64 + 1.7)).sum::<f64>() * t.powf(0.7)
        };
        max_error(&g, exact)
    };
    assert!((err(257) / err(513)).log2() >= 1.8);
}

#[test]
fn grid_validation() {
    assert!(SampledFunction::new(vec![0.0, 1.0, 0.5], vec![1.0, 1.0, 1.0], 0.0).is_err());
    assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0], 0.0).is_err());
    assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0, f64::NAN], 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // I^ν t^{μ−1} = Γ(μ)/Γ(μ+ν) t^{μ+ν−1}
    #[test]
    fn integral_power_rule(mu in 1.0f64..3.0, nu in 0.1f64..1.8) {
        let f = SampledFunction::from_fn(|t| t.powf(mu - 1.0), 2.0, 1025, mu - 1.0).unwrap();
        let g = rl_integral(&f, nu).unwrap();
        prop_assert!(max_error(&g, |t| power_rule(mu, nu, t)) < 1e-5);
    }

    // I^a I^b = I^{a+b}
    #[test]
    fn semigroup(a in 0.1f64..0.9, b in 0.1f64..0.9) {
        let f = SampledFunction::from_fn(|t| (-t).exp(), 2.0, 1025, 0.0).unwrap();
        let two_step = rl_integral(&rl_integral(&f, a).unwrap(), b).unwrap();
        let one_step = rl_integral(&f, a + b).unwrap();
        let d = two_step.values().iter().zip(one_step.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(d < 1e-5, "{}", d);
    }

    // D^α t^p = Γ(p+1)/Γ(p+1−α) t^{p−α}
    #[test]
    fn derivative_power_rule(p in 1.0f64..3.0, alpha in 0.1f64..0.9) {
        let f = SampledFunction::from_fn(|t| t.powf(p), 2.0, 2049, p).unwrap();
        let d = rl_derivative(&f, alpha).unwrap();
        let c = gamma(p + 1.0) / gamma(p + 1.0 - alpha);
        // first order at the nodes next to the origin
        prop_assert!(max_error(&d, |t| c * t.powf(p - alpha)) < 2e-4);
    }
}
