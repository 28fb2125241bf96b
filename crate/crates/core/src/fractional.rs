//! Riemann-Liouville and Caputo operators on uniformly sampled functions.
//!
//! The integral uses product integration: the piecewise-linear interpolant is
//! integrated exactly against (t−u)^{ν−1}/Γ(ν). Non-smooth leading behaviour
//! t^{e}, announced through `left_exponent`, is absorbed by starting weights
//! that make the rule exact for t^{e+l} (l = 0, 1, …, non-integer and < 1),
//! which keeps second-order convergence.

use crate::error::{FrackError, Result};
use crate::quadrature::tanh_sinh_with_distances;
use crate::special::{gamma, reciprocal_gamma};
use crate::special::gamma::ln_gamma;
use crate::transforms::laplace_numeric;
use serde::Serialize;

/// Minimum number of samples accepted by the grid operators.
pub const MIN_POINTS: usize = 8;

const UNIFORM_TOL: f64 = 1e-9;

/// Samples of f on a uniform grid anchored at the origin.
///
/// If `left_exponent ≥ 0` the grid is t_j = j·h starting at 0. If it is
/// negative, f is unbounded at 0 and the grid is t_j = (j+1)·h.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    t_grid: Vec<f64>,
    values: Vec<f64>,
    left_exponent: f64,
}

impl SampledFunction {
    pub fn new(t_grid: Vec<f64>, values: Vec<f64>, left_exponent: f64) -> Result<Self> {
        if t_grid.len() != values.len() {
            return Err(FrackError::invalid(format!(
                "grid has {} points but {} values",
                t_grid.len(),
                values.len()
            )));
        }
        if t_grid.len() < 2 {
            return Err(FrackError::GridTooCoarse { points: t_grid.len(), required: 2 });
        }
        if !(left_exponent.is_finite() && left_exponent > -1.0) {
            return Err(FrackError::invalid(format!("left exponent must exceed -1, got {left_exponent}")));
        }
        if t_grid.iter().any(|t| !t.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(FrackError::invalid("grid and values must be finite"));
        }
        if t_grid[0] < 0.0 {
            return Err(FrackError::invalid("grid must be nonnegative"));
        }
        if t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FrackError::invalid("grid must be strictly increasing"));
        }
        if left_exponent < 0.0 && t_grid[0] == 0.0 {
            return Err(FrackError::invalid("a singular left endpoint cannot be sampled at t = 0"));
        }
        if left_exponent >= 0.0 && t_grid[0] != 0.0 {
            return Err(FrackError::invalid("grid must start at t = 0 unless the left exponent is negative"));
        }
        Ok(SampledFunction { t_grid, values, left_exponent })
    }

    /// Samples `f` on `points` uniform nodes up to `t_max`.
    pub fn from_fn(f: impl Fn(f64) -> f64, t_max: f64, points: usize, left_exponent: f64) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(FrackError::invalid(format!("t_max must be positive, got {t_max}")));
        }
        if points < 2 {
            return Err(FrackError::GridTooCoarse { points, required: 2 });
        }
        let t_grid: Vec<f64> = if left_exponent < 0.0 {
            let h = t_max / points as f64;
            (1..=points).map(|j| j as f64 * h).collect()
        } else {
            let h = t_max / (points - 1) as f64;
            (0..points).map(|j| j as f64 * h).collect()
        };
        let values = t_grid.iter().map(|&t| f(t)).collect();
        SampledFunction::new(t_grid, values, left_exponent)
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_exponent(&self) -> f64 {
        self.left_exponent
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// True when the origin is excluded from the grid.
    pub fn is_singular(&self) -> bool {
        self.left_exponent < 0.0
    }

    pub fn t_max(&self) -> f64 {
        *self.t_grid.last().expect("grid has at least two points")
    }

    /// Grid spacing, or an error if the grid is not uniform and anchored at 0.
    pub fn spacing(&self) -> Result<f64> {
        let n = self.t_grid.len();
        let offset = usize::from(self.is_singular());
        let h = self.t_max() / (n - 1 + offset) as f64;
        let tol = UNIFORM_TOL * self.t_max();
        for (i, &t) in self.t_grid.iter().enumerate() {
            if (t - (i + offset) as f64 * h).abs() > tol {
                return Err(FrackError::invalid(format!(
                    "grid operators need a uniform grid anchored at 0; node {i} is at {t}, expected {}",
                    (i + offset) as f64 * h
                )));
            }
        }
        Ok(h)
    }

    /// Linear interpolation; the first cell of a singular grid follows the
    /// announced power law. Outside the grid the nearest end value is used.
    pub fn value_at(&self, t: f64) -> f64 {
        let g = &self.t_grid;
        let v = &self.values;
        if t <= g[0] {
            if self.is_singular() && t > 0.0 {
                return v[0] * (t / g[0]).powf(self.left_exponent);
            }
            return v[0];
        }
        if t >= self.t_max() {
            return *v.last().expect("nonempty");
        }
        let i = g.partition_point(|&x| x <= t) - 1;
        let w = (t - g[i]) / (g[i + 1] - g[i]);
        v[i] + w * (v[i + 1] - v[i])
    }

    /// ∫₀^T e^{−st} f(t) dt.
    ///
    /// The interpolant is integrated exactly cell by cell, and starting
    /// weights make the rule exact for the announced power laws t^{e+l}.
    /// The transform is truncated at the end of the grid, so callers choose
    /// T with e^{−sT}·|f| negligible.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if !(s.is_finite() && s > 0.0) {
            return Err(FrackError::invalid(format!("Laplace abscissa must be positive, got {s}")));
        }
        let mut total = self.interpolant_laplace(&self.values, s)?;
        let sigmas = correction_exponents(self.left_exponent, 1.0);
        let k = sigmas.len();
        if k == 0 || k + 1 > self.len() {
            return Ok(total);
        }
        // node offset of the first positive abscissa
        let first = usize::from(!self.is_singular());
        let t_max = self.t_max();
        let mut matrix = Vec::with_capacity(k);
        let mut rhs = Vec::with_capacity(k);
        for &sigma in &sigmas {
            let probe: Vec<f64> = self.t_grid.iter().map(|&t| t.powf(sigma)).collect();
            let rule = self.interpolant_laplace(&probe, s)?;
            let exact = tanh_sinh_with_distances(|t, dl, _| (-s * t).exp() * dl.powf(sigma), 0.0, t_max, 1e-14)?;
            matrix.push((0..k).map(|i| probe[first + i]).collect());
            rhs.push(exact.value - rule);
        }
        let weights = solve_small(matrix, rhs);
        total += weights.iter().enumerate().map(|(i, w)| w * self.values[first + i]).sum::<f64>();
        Ok(total)
    }

    fn interpolant_laplace(&self, values: &[f64], s: f64) -> Result<f64> {
        let g = &self.t_grid;
        let mut total = 0.0;
        if self.is_singular() {
            let h0 = g[0];
            let e = self.left_exponent;
            let head = tanh_sinh_with_distances(|t, dl, _| (-s * t).exp() * (dl / h0).powf(e), 0.0, h0, 1e-14)?;
            total += values[0] * head.value;
        }
        for i in 0..g.len() - 1 {
            let a = g[i];
            let h = g[i + 1] - a;
            let x = s * h;
            let ea = (-s * a).exp();
            // ∫_a^{a+h} e^{−st} dt and ∫_a^{a+h} e^{−st}(t−a)/h dt
            let m0 = ea * h * exprel_neg(x);
            let m1 = ea * h * phi(x);
            total += values[i] * (m0 - m1) + values[i + 1] * m1;
        }
        Ok(total)
    }

    /// Resamples onto `points` uniform nodes from 0 (or h) to `t_max`.
    pub fn resample_uniform(&self, points: usize) -> Result<Self> {
        let t_max = self.t_max();
        SampledFunction::from_fn(|t| self.value_at(t), t_max, points, self.left_exponent)
    }

    /// Values indexed by j with t_j = j·h; index 0 is 0.0 for singular grids
    /// and must not be used.
    fn indexed_values(&self) -> Vec<f64> {
        if self.is_singular() {
            std::iter::once(0.0).chain(self.values.iter().copied()).collect()
        } else {
            self.values.clone()
        }
    }
}

/// (1 − e^{−x})/x
fn exprel_neg(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        1.0 - 0.5 * x + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// (1 − e^{−x} − x e^{−x})/x², stable near 0.
fn phi(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let mut term = 0.5; // n = 2 term: (n−1)/n!
        let mut sum = 0.0;
        let mut n = 2.0;
        let mut xp = 1.0;
        for _ in 0..20 {
            sum += term * xp;
            xp *= -x;
            term *= n / ((n - 1.0) * (n + 1.0));
            n += 1.0;
        }
        sum
    } else {
        ((-(-x).exp_m1()) - x * (-x).exp()) / (x * x)
    }
}

/// ((1+x)^p + (1−x)^p − 2) / x² · x² computed without cancellation.
fn second_difference_power(p: f64, x: f64) -> f64 {
    if x > 0.05 {
        return (1.0 + x).powf(p) + (1.0 - x).powf(p) - 2.0;
    }
    // 2 Σ_{k even ≥ 2} C(p, k) x^k
    let mut c = p * (p - 1.0) / 2.0;
    let mut xk = x * x;
    let mut sum = 0.0;
    let mut k = 2.0;
    for _ in 0..30 {
        let term = c * xk;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        c *= (p - k) * (p - k - 1.0) / ((k + 1.0) * (k + 2.0));
        xk *= x * x;
        k += 2.0;
    }
    2.0 * sum
}

/// (1 − x)^p − 1 + p·x, i.e. Σ_{k ≥ 2} C(p, k)(−x)^k.
fn first_cell_power(p: f64, x: f64) -> f64 {
    if x > 0.05 {
        return (1.0 - x).powf(p) - 1.0 + p * x;
    }
    let mut c = p * (p - 1.0) / 2.0;
    let mut xk = x * x;
    let mut sum = 0.0;
    let mut k = 2.0;
    for _ in 0..60 {
        let term = c * xk;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        c *= (p - k) / (k + 1.0);
        xk *= -x;
        k += 1.0;
    }
    sum
}

/// Unitless product-trapezoid weights for order ν.
///
/// `interior[m]` multiplies y_{n−m} for 1 ≤ m ≤ n−1, `first[n]` multiplies
/// y_0, and the diagonal weight is 1; the common factor is h^ν/Γ(ν+2).
pub(crate) struct TrapezoidWeights {
    pub(crate) interior: Vec<f64>,
    pub(crate) first: Vec<f64>,
}

impl TrapezoidWeights {
    pub(crate) fn new(nu: f64, n_max: usize) -> Self {
        let p = nu + 1.0;
        let mut interior = vec![0.0; n_max + 1];
        let mut first = vec![0.0; n_max + 1];
        for m in 1..=n_max {
            let mf = m as f64;
            interior[m] = mf.powf(p) * second_difference_power(p, 1.0 / mf);
            // (n−1)^{ν+1} − (n−ν−1)n^ν = n^{ν+1}[(1−1/n)^{ν+1} − 1 + (ν+1)/n]
            first[m] = mf.powf(p) * first_cell_power(p, 1.0 / mf);
        }
        TrapezoidWeights { interior, first }
    }
}

/// Non-integer exponents e + l below `bound`; the starting weights integrate
/// these terms exactly.
fn correction_exponents(left_exponent: f64, bound: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut e = left_exponent;
    while e < bound {
        if e != e.floor() {
            out.push(e);
        }
        e += 1.0;
    }
    out
}

fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("nonempty");
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Core product-integration rule on indexed samples y_0..y_N (t_j = j·h).
/// Returns I^ν y at every index; entry 0 is 0.
fn product_integral(y: &[f64], h: f64, nu: f64, left_exponent: f64) -> Vec<f64> {
    // a t^σ term converges at order σ + min(ν, 1), so everything below
    // 2 − min(ν, 1) is corrected
    product_integral_exact_below(y, h, nu, left_exponent, 2.0 - nu.min(1.0))
}

/// As `product_integral`, integrating the non-integer exponents e + l below
/// `bound` exactly.
fn product_integral_exact_below(y: &[f64], h: f64, nu: f64, left_exponent: f64, bound: f64) -> Vec<f64> {
    let n_max = y.len() - 1;
    let singular = left_exponent < 0.0;
    let w = TrapezoidWeights::new(nu, n_max);
    let scale = h.powf(nu) * reciprocal_gamma(nu + 2.0);
    let mut out = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let mut acc = y[n];
        if !singular {
            acc += w.first[n] * y[0];
        }
        for j in 1..n {
            acc += w.interior[n - j] * y[j];
        }
        out[n] = scale * acc;
    }

    let sigmas = correction_exponents(left_exponent, bound);
    let k = sigmas.len();
    if k == 0 || k > n_max {
        return out;
    }
    // Starting weights W_{n,i} on nodes i = 1..k solve Σ_i W_{n,i} i^σ = R_σ(n).
    let matrix: Vec<Vec<f64>> = sigmas.iter().map(|&s| (1..=k).map(|i| (i as f64).powf(s)).collect()).collect();
    let inv_g2 = reciprocal_gamma(nu + 2.0);
    let powers: Vec<Vec<f64>> = sigmas.iter().map(|&s| (0..=n_max).map(|j| (j as f64).powf(s)).collect()).collect();
    let exact_coef: Vec<f64> = sigmas.iter().map(|&s| (ln_gamma(s + 1.0) - ln_gamma(s + 1.0 + nu)).exp()).collect();
    let hnu = h.powf(nu);
    for n in 1..=n_max {
        let rhs: Vec<f64> = sigmas
            .iter()
            .enumerate()
            .map(|(si, &s)| {
                let pw = &powers[si];
                let mut trap = pw[n];
                for j in 1..n {
                    trap += w.interior[n - j] * pw[j];
                }
                exact_coef[si] * (n as f64).powf(s + nu) - inv_g2 * trap
            })
            .collect();
        let weights = solve_small(matrix.clone(), rhs);
        let corr: f64 = weights.iter().enumerate().map(|(i, wi)| wi * y[i + 1]).sum();
        out[n] += hnu * corr;
    }
    out
}

fn check_points(f: &SampledFunction) -> Result<f64> {
    if f.len() < MIN_POINTS {
        return Err(FrackError::GridTooCoarse { points: f.len(), required: MIN_POINTS });
    }
    f.spacing()
}

/// Packs indexed results (t_j = j·h) into a SampledFunction with the given
/// exponent, adding or dropping the origin as the exponent requires.
fn pack(indexed: Vec<f64>, h: f64, had_origin: bool, left_exponent: f64) -> Result<SampledFunction> {
    let n = indexed.len();
    let include_origin = left_exponent >= 0.0;
    let start = usize::from(!include_origin);
    let mut values: Vec<f64> = indexed[start..].to_vec();
    if include_origin && !had_origin {
        // the origin value is the limit of the power law t^{e}, e ≥ 0
        values[0] = if left_exponent > 0.0 { 0.0 } else { 2.0 * indexed[1] - indexed[2] };
    }
    let t_grid = (start..n).map(|j| j as f64 * h).collect();
    SampledFunction::new(t_grid, values, left_exponent)
}

/// Riemann-Liouville integral of order ν ∈ (0, 2] on the input grid.
pub fn rl_integral(f: &SampledFunction, nu: f64) -> Result<SampledFunction> {
    if !(nu > 0.0 && nu <= 2.0) {
        return Err(FrackError::invalid(format!("integral order must lie in (0, 2], got {nu}")));
    }
    let h = check_points(f)?;
    let y = f.indexed_values();
    let out = product_integral(&y, h, nu, f.left_exponent);
    pack(out, h, !f.is_singular(), f.left_exponent + nu)
}

/// m-th derivative by second-order finite differences (m ∈ {1, 2}),
/// one-sided at both ends.
fn finite_difference(y: &[f64], h: f64, m: usize) -> Vec<f64> {
    let n = y.len();
    let mut d = vec![0.0; n];
    match m {
        1 => {
            d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
            d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
            for i in 1..n - 1 {
                d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
            }
        }
        2 => {
            let h2 = h * h;
            d[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / h2;
            d[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / h2;
            for i in 1..n - 1 {
                d[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h2;
            }
        }
        _ => unreachable!("derivative order is 1 or 2"),
    }
    d
}

fn derivative_exponent(e: f64, alpha: f64) -> Result<f64> {
    let out = e - alpha;
    if out <= -1.0 {
        return Err(FrackError::invalid(format!(
            "derivative of order {alpha} of a function behaving like t^{e} is not integrable at 0"
        )));
    }
    Ok(out)
}

/// Riemann-Liouville derivative of order α ∈ (0, 2): the n-th derivative of
/// the (n−α)-order integral, n = ⌊α⌋ + 1.
pub fn rl_derivative(f: &SampledFunction, alpha: f64) -> Result<SampledFunction> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(FrackError::invalid(format!("derivative order must lie in (0, 2), got {alpha}")));
    }
    let h = check_points(f)?;
    let e = f.left_exponent;
    let out_exp = if alpha == alpha.floor() && e == e.floor() {
        (e - alpha).max(0.0)
    } else {
        derivative_exponent(e, alpha)?
    };
    let n = alpha.floor() as usize + 1;
    let order = n as f64 - alpha;
    let y = f.indexed_values();
    // exact on the fitted powers below, so their subtraction cancels cleanly
    let mut g = product_integral_exact_below(&y, h, order, e, (2.0 - order.min(1.0)).max(e + 2.0));
    // The leading terms a₀t^e + a₁t^{e+1}, fitted at t = h and 2h, are
    // differentiated analytically; differences only see the smoother rest.
    let sig = [e, e + 1.0];
    let a = solve_small(
        vec![vec![h.powf(sig[0]), h.powf(sig[1])], vec![(2.0 * h).powf(sig[0]), (2.0 * h).powf(sig[1])]],
        vec![y[1], y[2]],
    );
    let start = usize::from(f.is_singular());
    for (j, gj) in g.iter_mut().enumerate().skip(start) {
        let t = j as f64 * h;
        for i in 0..2 {
            *gj -= a[i] * power_rule(sig[i] + 1.0, order, t);
        }
    }
    let d = finite_difference(&g[start..], h, n);
    let mut indexed: Vec<f64> = if f.is_singular() { std::iter::once(0.0).chain(d).collect() } else { d };
    for (j, dj) in indexed.iter_mut().enumerate().skip(start) {
        let t = j as f64 * h;
        for i in 0..2 {
            if a[i] != 0.0 {
                let c = gamma(sig[i] + 1.0) * reciprocal_gamma(sig[i] + 1.0 - alpha);
                if c != 0.0 {
                    *dj += a[i] * c * t.powf(sig[i] - alpha);
                }
            }
        }
    }
    if !f.is_singular() && out_exp > 0.0 {
        // one-sided differences are inaccurate at the origin, where t^{e−α} vanishes
        indexed[0] = 0.0;
    }
    pack(indexed, h, !f.is_singular(), out_exp)
}

/// Caputo derivative of order α ∈ (0, 2): the (m−α)-order integral of the
/// m-th derivative, m = ⌈α⌉. Integer α gives the plain derivative.
pub fn caputo_derivative(f: &SampledFunction, alpha: f64) -> Result<SampledFunction> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(FrackError::invalid(format!("derivative order must lie in (0, 2), got {alpha}")));
    }
    let h = check_points(f)?;
    let m = alpha.ceil() as usize;
    let e = f.left_exponent;
    // a smooth (integer-exponent) function stays smooth under differentiation
    let d_exp = if e == e.floor() { (e - m as f64).max(0.0) } else { derivative_exponent(e, m as f64)? };
    let out_exp = if e == e.floor() { (e - alpha).max(0.0).max(d_exp + m as f64 - alpha) } else { e - alpha };
    let start = usize::from(f.is_singular());
    let y = f.indexed_values();
    let d = finite_difference(&y[start..], h, m);
    let d_indexed: Vec<f64> = if f.is_singular() { std::iter::once(0.0).chain(d).collect() } else { d };
    if alpha == m as f64 {
        return pack(d_indexed, h, !f.is_singular(), if f.is_singular() { e - alpha } else { d_exp });
    }
    let out = product_integral(&d_indexed, h, m as f64 - alpha, if f.is_singular() { e - m as f64 } else { d_exp });
    pack(out, h, !f.is_singular(), out_exp)
}

/// Which fractional operator a Laplace-rule check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FractionalOperator {
    /// I^ν, transform s^{−ν}F(s)
    Integral(f64),
    /// RL derivative, transform s^αF(s) − Σ_k s^{k−1}[D^{α−k}f](0+)
    RiemannLiouville(f64),
    /// Caputo derivative, transform s^αF(s) − Σ_k s^{α−k−1}f^{(k)}(0)
    Caputo(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceProbe {
    pub s: f64,
    pub transform_of_output: f64,
    pub algebraic_rule: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceRuleReport {
    pub operator: FractionalOperator,
    pub probes: Vec<LaplaceProbe>,
    pub max_deviation: f64,
}

/// Compares the numeric Laplace transform of an operator's output with the
/// algebraic transform rule. F(s) is `f_transform` when given (closed form),
/// otherwise the numeric transform of the samples. Deviations are relative
/// to max(|rule|, 1e-3).
pub fn laplace_rule_check(
    f: &SampledFunction,
    operator: FractionalOperator,
    s_values: &[f64],
    f_transform: Option<&dyn Fn(f64) -> f64>,
) -> Result<LaplaceRuleReport> {
    let h = check_points(f)?;
    let output = match operator {
        FractionalOperator::Integral(nu) => rl_integral(f, nu)?,
        FractionalOperator::RiemannLiouville(a) => rl_derivative(f, a)?,
        FractionalOperator::Caputo(a) => caputo_derivative(f, a)?,
    };
    // Initial values, estimated from the grid.
    let value_at_origin = |g: &SampledFunction| -> f64 {
        let v = g.values();
        if g.is_singular() {
            f64::INFINITY
        } else if g.left_exponent() > 0.0 {
            0.0
        } else {
            // quadratic extrapolation from the first interior nodes
            3.0 * v[1] - 3.0 * v[2] + v[3]
        }
    };
    let mut initial_terms: Vec<(f64, f64)> = Vec::new(); // (power of s, coefficient)
    match operator {
        FractionalOperator::Integral(_) => {}
        FractionalOperator::RiemannLiouville(a) => {
            let n = a.floor() as usize + 1;
            for k in 1..=n {
                let order = a - k as f64;
                let g = if order < 0.0 {
                    rl_integral(f, -order)?
                } else if order == 0.0 {
                    f.clone()
                } else {
                    rl_derivative(f, order)?
                };
                let v0 = if order < 0.0 { g.values()[0] } else { value_at_origin(&g) };
                initial_terms.push(((k - 1) as f64, v0));
            }
        }
        FractionalOperator::Caputo(a) => {
            let m = a.ceil() as usize;
            let y = f.values();
            for k in 0..m {
                let v0 = match k {
                    0 => y[0],
                    _ => (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h),
                };
                initial_terms.push((a - k as f64 - 1.0, v0));
            }
        }
    }
    let mut probes = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let big_f = match f_transform {
            Some(tf) => tf(s),
            None => f.laplace(s)?,
        };
        let lhs = output.laplace(s)?;
        let mut rhs = match operator {
            FractionalOperator::Integral(nu) => s.powf(-nu) * big_f,
            FractionalOperator::RiemannLiouville(a) | FractionalOperator::Caputo(a) => s.powf(a) * big_f,
        };
        for &(p, c) in &initial_terms {
            if c != 0.0 {
                rhs -= s.powf(p) * c;
            }
        }
        let deviation = (lhs - rhs).abs() / rhs.abs().max(1e-3);
        probes.push(LaplaceProbe { s, transform_of_output: lhs, algebraic_rule: rhs, deviation });
    }
    let max_deviation = probes.iter().map(|p| p.deviation).fold(0.0, f64::max);
    Ok(LaplaceRuleReport { operator, probes, max_deviation })
}

/// Closed-form power rule I^ν t^{μ−1} = Γ(μ)/Γ(μ+ν) t^{μ+ν−1}.
pub fn power_rule(mu: f64, nu: f64, t: f64) -> f64 {
    gamma(mu) * reciprocal_gamma(mu + nu) * t.powf(mu + nu - 1.0)
}

/// Laplace transform of a function known in closed form, for use as the
/// F(s) of a rule check.
pub fn closed_form_transform(f: impl Fn(f64) -> f64, s: f64) -> Result<f64> {
    laplace_numeric(f, s)
}
