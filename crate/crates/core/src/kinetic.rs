//! The fractional kinetic equation N(t) − N₀f(t) = −c^ν I^ν N(t).
//!
//! Closed forms exist for the catalog forcings; sampled forcing goes through
//! the resolvent convolution. An independent Volterra time-stepper serves as
//! the oracle for both.

use crate::error::{FrackError, Result};
use crate::fractional::{rl_integral, SampledFunction, TrapezoidWeights, MIN_POINTS};
use crate::hfunction::{self, instances};
use crate::quadrature::tanh_sinh_with_distances;
use crate::special::{beta, gamma, kummer_phi, mittag_leffler, reciprocal_gamma, MLParams};
use crate::table::SolutionTable;
use serde::Serialize;
use std::fmt;

/// Minimum grid size for the oracle.
pub const ORACLE_MIN_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ForcingTerm {
    /// f = 1
    Constant,
    /// f = t^{ρ−1}
    PowerLaw { rho: f64 },
    /// f = t^{μ−1} E^γ_{ν,μ}(−(ct)^ν), with ν and c taken from the problem
    PrabhakarML { mu: f64, gamma: f64 },
    Sampled(SampledFunction),
}

impl fmt::Display for ForcingTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForcingTerm::Constant => write!(f, "const"),
            ForcingTerm::PowerLaw { rho } => write!(f, "power:rho={rho}"),
            ForcingTerm::PrabhakarML { mu, gamma } => write!(f, "prabhakar:mu={mu},gamma={gamma}"),
            ForcingTerm::Sampled(s) => write!(f, "sampled({} points)", s.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KineticProblem {
    pub nu: f64,
    pub c: f64,
    pub n0: f64,
    pub forcing: ForcingTerm,
}

impl KineticProblem {
    pub fn new(nu: f64, c: f64, n0: f64, forcing: ForcingTerm) -> Result<Self> {
        if !(nu > 0.0 && nu <= 2.0) {
            return Err(FrackError::invalid(format!("order nu must lie in (0, 2], got {nu}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(FrackError::invalid(format!("rate constant c must be positive, got {c}")));
        }
        if !n0.is_finite() {
            return Err(FrackError::invalid("initial density N0 must be finite"));
        }
        match &forcing {
            ForcingTerm::PowerLaw { rho } if !(*rho > 0.0 && rho.is_finite()) => {
                return Err(FrackError::invalid(format!("power-law forcing needs rho > 0, got {rho}")));
            }
            ForcingTerm::PrabhakarML { mu, gamma } if !(*mu > 0.0 && *gamma > 0.0) => {
                return Err(FrackError::invalid(format!(
                    "Prabhakar forcing needs mu > 0 and gamma > 0, got mu = {mu}, gamma = {gamma}"
                )));
            }
            _ => {}
        }
        Ok(KineticProblem { nu, c, n0, forcing })
    }

    /// −(ct)^ν
    fn ml_argument(&self, t: f64) -> f64 {
        -(self.c * t).powf(self.nu)
    }

    /// Exponent e with f(t) ~ t^e at the origin.
    pub fn forcing_exponent(&self) -> f64 {
        match &self.forcing {
            ForcingTerm::Constant => 0.0,
            ForcingTerm::PowerLaw { rho } => rho - 1.0,
            ForcingTerm::PrabhakarML { mu, .. } => mu - 1.0,
            ForcingTerm::Sampled(s) => s.left_exponent(),
        }
    }

    /// True when N (and f) are unbounded at t = 0, which is then left out of tables.
    pub fn is_singular(&self) -> bool {
        self.forcing_exponent() < 0.0
    }

    pub fn forcing_value(&self, t: f64) -> Result<f64> {
        Ok(match &self.forcing {
            ForcingTerm::Constant => 1.0,
            ForcingTerm::PowerLaw { rho } => t.powf(rho - 1.0),
            ForcingTerm::PrabhakarML { mu, gamma } => {
                let p = MLParams::new(self.nu, *mu, *gamma)?;
                t.powf(mu - 1.0) * mittag_leffler(p, self.ml_argument(t))?
            }
            ForcingTerm::Sampled(s) => s.value_at(t),
        })
    }

    fn annotate(&self, table: &mut SolutionTable, method: &str) {
        table.set_meta("nu", self.nu);
        table.set_meta("c", self.c);
        table.set_meta("n0", self.n0);
        table.set_meta("forcing", &self.forcing);
        table.set_meta("method", method);
    }
}

fn check_time_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(FrackError::invalid("time grid is empty"));
    }
    if t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(FrackError::invalid("time grid must be finite and nonnegative"));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FrackError::invalid("time grid must be strictly increasing"));
    }
    Ok(())
}

/// N(t) from the closed form of a catalog forcing.
pub fn closed_form_value(problem: &KineticProblem, t: f64) -> Result<f64> {
    let nu = problem.nu;
    let x = problem.ml_argument(t);
    Ok(match &problem.forcing {
        ForcingTerm::Constant => problem.n0 * mittag_leffler(MLParams::one(nu)?, x)?,
        ForcingTerm::PowerLaw { rho } => {
            problem.n0 * gamma(*rho) * t.powf(rho - 1.0) * mittag_leffler(MLParams::two(nu, *rho)?, x)?
        }
        ForcingTerm::PrabhakarML { mu, gamma } => {
            problem.n0 * t.powf(mu - 1.0) * mittag_leffler(MLParams::new(nu, *mu, gamma + 1.0)?, x)?
        }
        ForcingTerm::Sampled(_) => {
            return Err(FrackError::invalid("sampled forcing has no pointwise closed form"));
        }
    })
}

/// Closed-form solution on `t_grid`. For singular forcing the origin is skipped.
pub fn solve_closed_form(problem: &KineticProblem, t_grid: &[f64]) -> Result<SolutionTable> {
    check_time_grid(t_grid)?;
    let mut table = SolutionTable::new(["t"]);
    problem.annotate(&mut table, "closed-form");
    let skip_origin = problem.is_singular();
    if let ForcingTerm::Sampled(f) = &problem.forcing {
        let values = sampled_resolvent(problem, f, t_grid)?;
        for (&t, v) in t_grid.iter().zip(values) {
            if skip_origin && t == 0.0 {
                continue;
            }
            table.push(vec![t], v)?;
        }
        return Ok(table);
    }
    for &t in t_grid {
        if skip_origin && t == 0.0 {
            continue;
        }
        table.push(vec![t], closed_form_value(problem, t)?)?;
    }
    Ok(table)
}

/// ∫₀^u k = (cu)^ν E_{ν,ν+1}(−(cu)^ν), with k the resolvent kernel.
fn kernel_first_integral(nu: f64, c: f64, u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(0.0);
    }
    let z = (c * u).powf(nu);
    Ok(z * mittag_leffler(MLParams::two(nu, nu + 1.0)?, -z)?)
}

/// ∫₀^u ∫₀^v k = c^ν u^{ν+1} E_{ν,ν+2}(−(cu)^ν).
fn kernel_second_integral(nu: f64, c: f64, u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(0.0);
    }
    let z = (c * u).powf(nu);
    Ok(c.powf(nu) * u.powf(nu + 1.0) * mittag_leffler(MLParams::two(nu, nu + 2.0)?, -z)?)
}

/// The resolvent kernel c^ν u^{ν−1} E_{ν,ν}(−(cu)^ν).
pub fn resolvent_kernel(nu: f64, c: f64, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(FrackError::invalid(format!("kernel argument must be positive, got {u}")));
    }
    Ok(c.powf(nu) * u.powf(nu - 1.0) * mittag_leffler(MLParams::two(nu, nu)?, -(c * u).powf(nu))?)
}

/// N = N₀(f − k∗f) with the piecewise-linear interpolant of f convolved
/// exactly against the resolvent kernel k.
fn sampled_resolvent(problem: &KineticProblem, f: &SampledFunction, t_grid: &[f64]) -> Result<Vec<f64>> {
    if f.len() < MIN_POINTS {
        return Err(FrackError::GridTooCoarse { points: f.len(), required: MIN_POINTS });
    }
    let f = match f.spacing() {
        Ok(_) => f.clone(),
        Err(_) => f.resample_uniform(f.len())?,
    };
    let h = f.spacing()?;
    let (nu, c) = (problem.nu, problem.c);
    let singular = f.is_singular();
    // indexed samples, t_j = j·h
    let y: Vec<f64> = if singular {
        std::iter::once(f64::NAN).chain(f.values().iter().copied()).collect()
    } else {
        f.values().to_vec()
    };
    let n_max = y.len() - 1;
    let t_end = n_max as f64 * h;
    if let Some(&t) = t_grid.iter().find(|&&t| t > t_end * (1.0 + 1e-12)) {
        return Err(FrackError::invalid(format!("time {t} lies beyond the sampled forcing (ends at {t_end})")));
    }
    // slope changes: Δ_j multiplies K2(t − t_{j−1}) for cells j = first+1..n
    let first = usize::from(singular);
    let slope = |j: usize| if j <= first { 0.0 } else { (y[j] - y[j - 1]) / h };
    let head_exponent = f.left_exponent();
    let head_value = if singular { y[1] } else { 0.0 };

    let k1_table: Vec<f64> = (0..=n_max).map(|m| kernel_first_integral(nu, c, m as f64 * h)).collect::<Result<_>>()?;
    let k2_table: Vec<f64> =
        (0..=n_max + 1).map(|m| kernel_second_integral(nu, c, m as f64 * h)).collect::<Result<_>>()?;

    // ∫₀^h k(t − τ)·y₁(τ/h)^e dτ for a singular first cell
    let head = |t: f64| -> Result<f64> {
        let est = tanh_sinh_with_distances(
            |tau, dl, dr| {
                let u = if t == h { dr } else { t - tau };
                resolvent_kernel(nu, c, u).unwrap_or(f64::NAN) * (dl / h).powf(head_exponent)
            },
            0.0,
            h,
            1e-12,
        )?;
        Ok(head_value * est.value)
    };

    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let pos = t / h;
        let node = pos.round();
        let on_node = (pos - node).abs() <= 1e-9 * pos.max(1.0) && node as usize <= n_max;
        let (ft, conv) = if on_node {
            let n = node as usize;
            if singular && n == 0 {
                out.push(f64::INFINITY);
                continue;
            }
            let mut conv = if singular { head(t)? + y[1] * k1_table[n - 1] } else { y[0] * k1_table[n] };
            for j in first + 1..=n {
                let d = slope(j) - slope(j - 1);
                if d != 0.0 {
                    conv += d * k2_table[n - j + 1];
                }
            }
            (y[n], conv)
        } else {
            if singular && t < h {
                return Err(FrackError::invalid("singular sampled forcing is only resolved from the first node on"));
            }
            let anchor = if singular { h } else { 0.0 };
            let mut conv = if singular {
                head(t)? + y[1] * kernel_first_integral(nu, c, t - anchor)?
            } else {
                y[0] * kernel_first_integral(nu, c, t)?
            };
            let last_cell = (pos.floor() as usize + 1).min(n_max);
            for j in first + 1..=last_cell {
                let d = slope(j) - slope(j - 1);
                let start = (j - 1) as f64 * h;
                if d != 0.0 && start < t {
                    conv += d * kernel_second_integral(nu, c, t - start)?;
                }
            }
            (f.value_at(t), conv)
        };
        out.push(problem.n0 * (ft - conv));
    }
    Ok(out)
}

/// Independent oracle: second-kind Volterra time stepping.
///
/// The first K Neumann terms g_k = N₀(−c^ν)^k I^{kν}f are taken exactly (or
/// by product integration for sampled forcing). The remainder solves
/// R + c^ν I^ν R = g_K, and R ~ t^σ converges at order min(2, σ + ν) under
/// the implicit product-trapezoid rule, so K is the first index with
/// σ = e₀ + Kν ≥ 2 − ν.
pub fn solve_oracle(problem: &KineticProblem, t_grid: &[f64]) -> Result<SolutionTable> {
    check_time_grid(t_grid)?;
    if t_grid.len() < ORACLE_MIN_POINTS {
        return Err(FrackError::GridTooCoarse { points: t_grid.len(), required: ORACLE_MIN_POINTS });
    }
    if t_grid[0] != 0.0 {
        return Err(FrackError::invalid("oracle grid must start at t = 0"));
    }
    let n_max = t_grid.len() - 1;
    let h = t_grid[n_max] / n_max as f64;
    for (j, &t) in t_grid.iter().enumerate() {
        if (t - j as f64 * h).abs() > 1e-9 * t_grid[n_max] {
            return Err(FrackError::invalid("oracle grid must be uniform"));
        }
    }
    let (nu, c) = (problem.nu, problem.c);
    let cnu = c.powf(nu);
    let e0 = problem.forcing_exponent();
    let mut big_k = 0;
    while e0 + (big_k + 1) as f64 * nu < 2.0 {
        big_k += 1;
    }
    let terms = neumann_terms(problem, t_grid, big_k)?;

    // R_n(1 + λ) = g_K(t_n) − λ(a_{n,0}R_0 + Σ b_{n−j}R_j), λ = c^ν h^ν/Γ(ν+2)
    let g_k = &terms[big_k];
    let w = TrapezoidWeights::new(nu, n_max);
    let lambda = cnu * h.powf(nu) * reciprocal_gamma(nu + 2.0);
    let mut r = vec![0.0; n_max + 1];
    r[0] = g_k[0];
    for n in 1..=n_max {
        let mut hist = w.first[n] * r[0];
        for j in 1..n {
            hist += w.interior[n - j] * r[j];
        }
        r[n] = (g_k[n] - lambda * hist) / (1.0 + lambda);
    }

    let mut table = SolutionTable::new(["t"]);
    problem.annotate(&mut table, "volterra-oracle");
    table.set_meta("neumann_terms", big_k);
    for n in 0..=n_max {
        if problem.is_singular() && n == 0 {
            continue;
        }
        let v: f64 = terms[..big_k].iter().map(|g| g[n]).sum::<f64>() + r[n];
        table.push(vec![t_grid[n]], v)?;
    }
    Ok(table)
}

/// g_0..g_K on the grid; entry 0 of a singular term is unused (set to 0).
fn neumann_terms(problem: &KineticProblem, t_grid: &[f64], big_k: usize) -> Result<Vec<Vec<f64>>> {
    let (nu, c, n0) = (problem.nu, problem.c, problem.n0);
    let cnu = c.powf(nu);
    let mut out = Vec::with_capacity(big_k + 1);
    match &problem.forcing {
        ForcingTerm::Constant | ForcingTerm::PowerLaw { .. } => {
            let rho = match problem.forcing {
                ForcingTerm::PowerLaw { rho } => rho,
                _ => 1.0,
            };
            for k in 0..=big_k {
                let kn = k as f64 * nu;
                let coef = n0 * (-cnu).powi(k as i32) * gamma(rho) * reciprocal_gamma(rho + kn);
                let e = rho + kn - 1.0;
                out.push(t_grid.iter().map(|&t| if t == 0.0 && e < 0.0 { 0.0 } else { coef * t.powf(e) }).collect());
            }
        }
        ForcingTerm::PrabhakarML { mu, gamma: g } => {
            for k in 0..=big_k {
                let kn = k as f64 * nu;
                let p = MLParams::new(nu, mu + kn, *g)?;
                let coef = n0 * (-cnu).powi(k as i32);
                let e = mu + kn - 1.0;
                let col = t_grid
                    .iter()
                    .map(|&t| {
                        if t == 0.0 && e < 0.0 {
                            Ok(0.0)
                        } else {
                            Ok(coef * t.powf(e) * mittag_leffler(p, problem.ml_argument(t))?)
                        }
                    })
                    .collect::<Result<Vec<f64>>>()?;
                out.push(col);
            }
        }
        ForcingTerm::Sampled(f) => {
            let e = f.left_exponent();
            let start = usize::from(e < 0.0);
            let grid = t_grid[start..].to_vec();
            let values = grid.iter().map(|&t| f.value_at(t)).collect();
            let mut current = SampledFunction::new(grid, values, e)?;
            for k in 0..=big_k {
                let scale = n0 * (-cnu).powi(k as i32);
                let mut col: Vec<f64> = current.values().iter().map(|v| scale * v).collect();
                // realign to the full grid (singular grids lack the origin)
                while col.len() < t_grid.len() {
                    col.insert(0, 0.0);
                }
                out.push(col);
                if k < big_k {
                    current = rl_integral(&current, nu)?;
                }
            }
        }
    }
    Ok(out)
}

/// c·H^{1,1}_{1,2}[(cu)^ν | (−1/ν,1); (−1/ν,1),(0,ν)].
///
/// This equals −c^ν u^{ν−1}E_{ν,ν}(−(cu)^ν): the regular part of the
/// solution operator, without the identity component N₀f(t).
pub fn kernel_h_function(nu: f64, c: f64, u: f64) -> Result<f64> {
    if !(nu > 0.0 && nu <= 2.0) || !(c > 0.0) || !(u > 0.0) {
        return Err(FrackError::invalid(format!("kernel needs 0 < nu <= 2, c > 0, u > 0 (got {nu}, {c}, {u})")));
    }
    Ok(c * hfunction::evaluate(&instances::kinetic_kernel(nu), (c * u).powf(nu))?)
}

/// E^γ_{α,β}(z), including the degenerate γ = 0 case 1/Γ(β).
fn prabhakar_or_constant(alpha: f64, beta_p: f64, gamma_p: f64, z: f64) -> Result<f64> {
    if gamma_p == 0.0 {
        return Ok(reciprocal_gamma(beta_p));
    }
    mittag_leffler(MLParams::new(alpha, beta_p, gamma_p)?, z)
}

fn kummer_or_one(a: f64, b: f64, z: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(1.0);
    }
    kummer_phi(a, b, z)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvolutionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
    /// For ρ = 1 the same identity written with Kummer functions.
    pub kummer: Option<(f64, f64, f64)>,
}

fn convolution_integral(x: f64, nu_p: f64, mu: f64, g: impl Fn(f64, f64) -> Result<f64>) -> Result<f64> {
    let failed = std::cell::Cell::new(None);
    let est = tanh_sinh_with_distances(
        |_, dl, dr| match g(dl, dr) {
            Ok(v) => dl.powf(nu_p - 1.0) * dr.powf(mu - 1.0) * v,
            Err(e) => {
                failed.set(Some(e));
                0.0
            }
        },
        0.0,
        x,
        1e-13,
    )
    .map_err(|e| FrackError::non_convergence(format!("convolution integral ({e})"), &["tanh-sinh"]))?;
    if let Some(e) = failed.take() {
        return Err(e);
    }
    Ok(est.value)
}

/// ∫₀^x t^{ν−1}(x−t)^{μ−1}E^σ_{ρ,ν}(ωt^ρ)E^γ_{ρ,μ}(ω(x−t)^ρ)dt against
/// x^{ν+μ−1}E^{γ+σ}_{ρ,μ+ν}(ωx^ρ).
pub fn prabhakar_convolution_check(
    rho: f64,
    nu_p: f64,
    mu: f64,
    sigma: f64,
    gamma_p: f64,
    omega: f64,
    x: f64,
) -> Result<ConvolutionReport> {
    if !(nu_p > 0.0 && mu > 0.0 && x > 0.0 && sigma >= 0.0 && gamma_p >= 0.0 && sigma + gamma_p > 0.0) {
        return Err(FrackError::invalid("convolution check needs nu, mu, x > 0 and sigma, gamma >= 0"));
    }
    let lhs = convolution_integral(x, nu_p, mu, |t, u| {
        Ok(prabhakar_or_constant(rho, nu_p, sigma, omega * t.powf(rho))?
            * prabhakar_or_constant(rho, mu, gamma_p, omega * u.powf(rho))?)
    })?;
    let rhs = x.powf(nu_p + mu - 1.0) * prabhakar_or_constant(rho, mu + nu_p, gamma_p + sigma, omega * x.powf(rho))?;
    let kummer = if rho == 1.0 {
        let kl = convolution_integral(x, nu_p, mu, |t, u| {
            Ok(kummer_or_one(sigma, nu_p, omega * t)? * kummer_or_one(gamma_p, mu, omega * u)?)
        })?;
        let kr = beta(nu_p, mu) * x.powf(nu_p + mu - 1.0) * kummer_phi(sigma + gamma_p, nu_p + mu, omega * x)?;
        Some((kl, kr, (kl - kr).abs() / kr.abs()))
    } else {
        None
    };
    Ok(ConvolutionReport { lhs, rhs, deviation: (lhs - rhs).abs() / rhs.abs(), kummer })
}
