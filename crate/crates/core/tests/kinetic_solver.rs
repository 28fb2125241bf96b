use frack::fractional::SampledFunction;
use frack::kinetic::{self, ForcingTerm, KineticProblem};
use frack::special::{gamma, ml1};
use proptest::prelude::*;

fn grid(t_max: f64, points: usize) -> Vec<f64> {
    (0..points).map(|j| t_max * j as f64 / (points - 1) as f64).collect()
}

#[test]
fn classical_relaxation() {
    let p = KineticProblem::new(1.0, 2.0, 3.0, ForcingTerm::Constant).unwrap();
    for t in [0.1, 0.5, 2.0] {
        let v = kinetic::closed_form_value(&p, t).unwrap();
        assert!((v - 3.0 * (-2.0 * t).exp()).abs() < 1e-13);
    }
}

#[test]
fn oracle_tracks_prabhakar_forcing() {
    let p = KineticProblem::new(0.6, 1.0, 1.0, ForcingTerm::PrabhakarML { mu: 2.0, gamma: 1.5 }).unwrap();
    let g = grid(3.0, 2048);
    let closed = kinetic::solve_closed_form(&p, &g).unwrap().values();
    let oracle = kinetic::solve_oracle(&p, &g).unwrap().values();
    let scale = closed.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let err = closed.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
    assert!(err < 1e-4, "{err}");
}

#[test]
fn oracle_requires_fine_uniform_grid() {
    let p = KineticProblem::new(0.5, 1.0, 1.0, ForcingTerm::Constant).unwrap();
    assert!(kinetic::solve_oracle(&p, &grid(1.0, 16)).is_err());
    let mut g = grid(1.0, 128);
    g[5] += 1e-4;
    assert!(kinetic::solve_oracle(&p, &g).is_err());
}

#[test]
fn sampled_forcing_beyond_data_is_rejected() {
    let f = SampledFunction::from_fn(|t| t, 1.0, 101, 0.0).unwrap();
    let p = KineticProblem::new(0.5, 1.0, 1.0, ForcingTerm::Sampled(f)).unwrap();
    assert!(kinetic::solve_closed_form(&p, &grid(2.0, 11)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // N(t) = N0 E_ν(−(ct)^ν) lies in (0, N0] and decreases for ν ≤ 1
    #[test]
    fn relaxation_bounds(nu in 0.1f64..1.0, c in 0.1f64..3.0, n0 in 0.1f64..10.0, t in 0.0f64..10.0, dt in 0.01f64..2.0) {
        let p = KineticProblem::new(nu, c, n0, ForcingTerm::Constant).unwrap();
        let a = kinetic::closed_form_value(&p, t).unwrap();
        let b = kinetic::closed_form_value(&p, t + dt).unwrap();
        prop_assert!(a > 0.0 && a <= n0 * (1.0 + 1e-14));
        prop_assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn linear_in_initial_amount(nu in 0.2f64..1.8, rho in 0.3f64..3.0, n0 in 0.1f64..10.0, t in 0.05f64..5.0) {
        let one = KineticProblem::new(nu, 1.3, 1.0, ForcingTerm::PowerLaw { rho }).unwrap();
        let scaled = KineticProblem::new(nu, 1.3, n0, ForcingTerm::PowerLaw { rho }).unwrap();
        let a = kinetic::closed_form_value(&one, t).unwrap();
        let b = kinetic::closed_form_value(&scaled, t).unwrap();
        prop_assert!((b - n0 * a).abs() <= 1e-13 * b.abs().max(1e-300));
    }

    // power law with ρ = 1 is the constant forcing
    #[test]
    fn power_one_is_constant(nu in 0.1f64..2.0, t in 0.0f64..5.0) {
        let a = kinetic::closed_form_value(&KineticProblem::new(nu, 1.0, 1.0, ForcingTerm::PowerLaw { rho: 1.0 }).unwrap(), t).unwrap();
        prop_assert!((a - ml1(nu, -t.powf(nu)).unwrap()).abs() < 1e-12);
    }

    // at small t, N / t^{ρ−1} = 1 − Γ(ρ) t^ν / Γ(ρ+ν) + O(t^{2ν})
    #[test]
    fn short_time_follows_forcing(nu in 0.3f64..1.5, rho in 0.5f64..2.5) {
        let t = 1e-6;
        let p = KineticProblem::new(nu, 1.0, 1.0, ForcingTerm::PowerLaw { rho }).unwrap();
        let ratio = kinetic::closed_form_value(&p, t).unwrap() / t.powf(rho - 1.0);
        let two_terms = 1.0 - gamma(rho) * t.powf(nu) / gamma(rho + nu);
        let remainder = gamma(rho) * t.powf(2.0 * nu) / gamma(rho + 2.0 * nu);
        prop_assert!((ratio - two_terms).abs() <= 2.0 * remainder + 1e-12, "{} vs {}", ratio, two_terms);
    }
}
