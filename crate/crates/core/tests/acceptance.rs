//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Criteria draw on the `verify` suites and add checks against oracles
//! written here without the crate's own special functions.

use frack::diffusion;
use frack::kinetic::{self, ForcingTerm, KineticProblem};
use frack::special::{mittag_leffler, MLParams};
use frack::table::SolutionTable;
use frack::verify::{self, Check, Suite, VerifyConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

struct Outcome {
    passed: bool,
    detail: String,
}

struct Suites {
    checks: HashMap<String, Check>,
}

impl Suites {
    fn run() -> Self {
        let config = VerifyConfig::default();
        let checks = verify::run_suite(Suite::All, &config).into_iter().map(|c| (c.name.clone(), c)).collect();
        Suites { checks }
    }

    /// Passes iff every named check passed; time is the sum of their runtimes.
    fn require(&self, names: &[&str]) -> (Outcome, f64) {
        let mut passed = true;
        let mut parts = Vec::new();
        let mut elapsed = 0.0;
        for name in names {
            match self.checks.get(*name) {
                Some(c) => {
                    passed &= c.passed;
                    elapsed += c.elapsed;
                    parts.push(format!("{name} {:.1e}/{:.0e}", c.max_deviation, c.tolerance));
                }
                None => {
                    passed = false;
                    parts.push(format!("{name} missing"));
                }
            }
        }
        (Outcome { passed, detail: parts.join("; ") }, elapsed)
    }
}

fn merge(a: (Outcome, f64), b: Outcome, extra_seconds: f64) -> (Outcome, f64) {
    let (oa, ta) = a;
    (Outcome { passed: oa.passed && b.passed, detail: format!("{}; {}", oa.detail, b.detail) }, ta + extra_seconds)
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, f64) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed().as_secs_f64())
}

/// Σ (γ)_k z^k / (k! Γ(αk+β)) with libm's log-gamma; None when the
/// alternating sum loses more than four digits.
fn independent_ml(alpha: f64, beta: f64, gamma: f64, z: f64) -> Option<f64> {
    let (mut sum, mut max_term) = (0.0f64, 0.0f64);
    // ln of (γ)_k / k!
    let mut ln_coef = 0.0;
    for k in 0..4000 {
        let kf = k as f64;
        if k > 0 {
            ln_coef += ((gamma + kf - 1.0) / kf).ln();
        }
        let (lg, sign) = libm::lgamma_r(alpha * kf + beta);
        let ln_abs = ln_coef + if k == 0 { 0.0 } else { kf * z.abs().ln() } - lg;
        let term = sign as f64 * if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 } * ln_abs.exp();
        sum += term;
        max_term = max_term.max(term.abs());
        if k > 10 && term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    (max_term <= 1e4 * sum.abs()).then_some(sum)
}

fn criterion_1(suites: &Suites) -> (Outcome, f64) {
    let names = ["ml-known-values", "ml-reduction-gamma-one", "kummer-confluent", "wright-prabhakar", "wright-ml"];
    let base = suites.require(&names);
    let (extra, secs) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut worst, mut compared) = (0.0f64, 0);
        while compared < 12 {
            let (a, b, g, z) =
                (rng.gen_range(0.25..=1.5), rng.gen_range(0.05..=3.0), rng.gen_range(0.05..=3.0), rng.gen_range(-5.0..=5.0));
            let Some(reference) = independent_ml(a, b, g, z) else { continue };
            let value = match MLParams::new(a, b, g).and_then(|p| mittag_leffler(p, z)) {
                Ok(v) => v,
                Err(_) => return Outcome { passed: false, detail: format!("evaluation failed at {a} {b} {g} {z}") },
            };
            worst = worst.max((value - reference).abs() / reference.abs());
            compared += 1;
        }
        Outcome { passed: worst <= 1e-9, detail: format!("libm-series oracle {worst:.1e} over {compared} draws") }
    });
    merge(base, extra, secs)
}

fn criterion_3(suites: &Suites) -> (Outcome, f64) {
    let base = suites.require(&["oracle-equivalence", "oracle-convergence-ratio", "oracle-reference-values"]);
    let (extra, secs) = timed(|| {
        let grid: Vec<f64> = (0..4096).map(|j| 3.0 * j as f64 / 4095.0).collect();
        let p = KineticProblem::new(1.0, 1.0, 1.0, ForcingTerm::Constant).unwrap();
        let closed = kinetic::solve_closed_form(&p, &grid).unwrap();
        let err = closed.rows.iter().map(|r| (r.value - (-r.coordinates[0]).exp()).abs()).fold(0.0, f64::max);
        Outcome { passed: err <= 1e-12, detail: format!("nu=1 closed form vs exp(-t) {err:.1e}") }
    });
    merge(base, extra, secs)
}

fn criterion_5(suites: &Suites) -> (Outcome, f64) {
    let base = suites.require(&["kilbas-convolution"]);
    let (extra, secs) = timed(|| {
        // all orders one, ω = −1, x = 1: both sides equal e^{-1}
        let rep = kinetic::prabhakar_convolution_check(1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0).unwrap();
        let e = (-1f64).exp();
        let dev = ((rep.lhs - e).abs() / e).max((rep.rhs - e).abs() / e);
        Outcome { passed: dev <= 1e-6, detail: format!("unit-order case vs exp(-1) {dev:.1e}") }
    });
    merge(base, extra, secs)
}

fn criterion_6(suites: &Suites) -> (Outcome, f64) {
    let base = suites.require(&["heat-kernel-limit", "normalization", "cosine-inversion"]);
    let (extra, secs) = timed(|| {
        let xs: Vec<f64> = (0..=200).map(|j| -5.0 + 0.05 * j as f64).collect();
        let g = diffusion::green_profile(1.0, 1.0, 1.0, &xs).unwrap();
        let err = xs
            .iter()
            .zip(&g)
            .map(|(x, v)| (v - (-x * x / 4.0).exp() / (4.0 * PI).sqrt()).abs())
            .fold(0.0, f64::max);
        Outcome { passed: err <= 1e-8, detail: format!("Gaussian on 201 points {err:.1e}") }
    });
    merge(base, extra, secs)
}

fn frack(args: &[&str], env: Option<(&str, &str)>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frack"));
    cmd.args(args).env_remove(verify::TOLERANCE_ENV);
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn frack");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_10() -> (Outcome, f64) {
    let mut failures = Vec::new();
    let start = Instant::now();
    let (code, _) = frack(&["verify", "--suite", "all"], None);
    let suite_secs = start.elapsed().as_secs_f64();
    if code != 0 {
        failures.push(format!("verify --suite all exited {code}"));
    }

    let contract_start = Instant::now();
    let (code, csv) = frack(&["kinetic", "--nu", "0.7", "--forcing", "power:rho=0.5", "--t-max", "2", "--steps", "50"], None);
    let p = KineticProblem::new(0.7, 1.0, 1.0, ForcingTerm::PowerLaw { rho: 0.5 }).unwrap();
    let grid: Vec<f64> = (0..=50).map(|j| 2.0 * j as f64 / 50.0).collect();
    let direct = kinetic::solve_closed_form(&p, &grid).unwrap();
    match SolutionTable::read_csv(csv.as_bytes()) {
        Ok(t) => {
            let same_bits = t.rows.len() == direct.rows.len()
                && t.rows.iter().zip(&direct.rows).all(|(a, b)| {
                    a.value.to_bits() == b.value.to_bits() && a.coordinates[0].to_bits() == b.coordinates[0].to_bits()
                });
            if code != 0 || !same_bits || t.to_csv_string() != csv {
                failures.push("CSV round trip not bit-exact".into());
            }
        }
        Err(e) => failures.push(format!("CSV re-ingestion failed: {e}")),
    }

    let dir = tempfile::tempdir().unwrap();
    let bad_csv = dir.path().join("bad.csv");
    std::fs::write(&bad_csv, "t,f\n0,1\n1,NaN\n").unwrap();
    let bad_arg = format!("csv:{}", bad_csv.display());
    let injected: [(&[&str], Option<(&str, &str)>, i32); 5] = [
        (&["ml", "--alpha", "0", "--z", "-1"], None, 2),
        (&["diffusion", "--nu", "2.5"], None, 2),
        (&["kinetic", "--nu", "0.5", "--forcing", "power:rho=-1"], None, 2),
        (&["kinetic", "--nu", "0.5", "--forcing", &bad_arg], None, 3),
        (&["verify", "--suite", "ml"], Some((verify::TOLERANCE_ENV, "1e-30")), 1),
    ];
    for (args, env, expected) in injected {
        let (code, _) = frack(args, env);
        if code != expected {
            failures.push(format!("{args:?} exited {code}, expected {expected}"));
        }
    }
    let contract_secs = contract_start.elapsed().as_secs_f64();
    let detail = if failures.is_empty() {
        format!("suites {suite_secs:.1}s, contract {contract_secs:.2}s")
    } else {
        failures.join("; ")
    };
    // the runtime limit excludes the suites themselves
    (Outcome { passed: failures.is_empty(), detail }, contract_secs)
}

fn main() {
    println!("running acceptance criteria");
    let suites = Suites::run();
    let criteria: Vec<(&str, f64, Box<dyn FnOnce() -> (Outcome, f64)>)> = vec![
        ("ML reduction and identity suite", 10.0, Box::new(|| criterion_1(&suites))),
        ("dual-method H-function agreement", 30.0, Box::new(|| suites.require(&["residue-vs-contour"]))),
        ("kinetic oracle equivalence and order", 60.0, Box::new(|| criterion_3(&suites))),
        (
            "power-law reduction and gamma recursion",
            10.0,
            Box::new(|| suites.require(&["power-law-rho-one-is-constant", "prabhakar-gamma-recursion"])),
        ),
        ("convolution identity", 30.0, Box::new(|| criterion_5(&suites))),
        ("diffusion classical limit, normalization, inversion", 60.0, Box::new(|| criterion_6(&suites))),
        ("Fourier consistency", 30.0, Box::new(|| suites.require(&["fourier-consistency"]))),
        ("asymptotic envelope convergence", 30.0, Box::new(|| suites.require(&["asymptotic-envelope"]))),
        (
            "Laplace transform rules",
            20.0,
            Box::new(|| {
                suites.require(&[
                    "laplace-rule-integral",
                    "laplace-rule-riemann-liouville",
                    "laplace-rule-caputo",
                    "laplace-domain-identity",
                ])
            }),
        ),
        ("CLI contract", 5.0, Box::new(criterion_10)),
    ];
    let mut all = true;
    for (i, (title, limit, run)) in criteria.into_iter().enumerate() {
        let (outcome, secs) = run();
        let passed = outcome.passed && secs < limit;
        all &= passed;
        println!(
            "{} criterion {:>2}: {title} [{secs:.2}s < {limit}s] {}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
