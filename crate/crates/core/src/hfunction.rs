//! Fox H-function instances, evaluated two independent ways: as a sum of
//! residues at the left poles of the Mellin-Barnes integrand, and by
//! trapezoidal quadrature of the Mellin-Barnes integral along a vertical line.
//!
//! ```text
//! H^{m,n}_{p,q}(z) = 1/(2πi) ∫ Θ(ξ) z^{-ξ} dξ
//! Θ(ξ) = Π_{j≤m} Γ(b_j + B_j ξ) Π_{j≤n} Γ(1 − a_j − A_j ξ)
//!        / [Π_{j>m} Γ(1 − b_j − B_j ξ) Π_{j>n} Γ(a_j + A_j ξ)]
//! ```
//!
//! Only real parameters and positive real arguments are supported.

use crate::error::{FrackError, Result};
use crate::special::gamma::{ln_gamma_complex, ln_gamma_sign};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub const DEFAULT_MAX_TERMS: usize = 200;

const PAIR_EQ_TOL: f64 = 1e-12;

/// A `(coefficient, weight)` pair: `(a_j, A_j)` or `(b_j, B_j)`.
pub type GammaPair = (f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HFunctionSpec {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<GammaPair>,
    pub lower: Vec<GammaPair>,
}

impl HFunctionSpec {
    pub fn new(m: usize, n: usize, upper: Vec<GammaPair>, lower: Vec<GammaPair>) -> Result<Self> {
        let spec = HFunctionSpec { m, n, upper, lower };
        spec.validate()?;
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Σ_{j≤n}A_j − Σ_{j>n}A_j + Σ_{j≤m}B_j − Σ_{j>m}B_j.
    ///
    /// The integrand decays like exp(−πθ|Im ξ|/2) on vertical lines, so the
    /// contour quadrature needs `theta > 0`.
    pub fn theta(&self) -> f64 {
        let a: f64 = self
            .upper
            .iter()
            .enumerate()
            .map(|(j, &(_, w))| if j < self.n { w } else { -w })
            .sum();
        let b: f64 = self
            .lower
            .iter()
            .enumerate()
            .map(|(j, &(_, w))| if j < self.m { w } else { -w })
            .sum();
        a + b
    }

    fn validate(&self) -> Result<()> {
        if self.n > self.p() {
            return Err(FrackError::invalid(format!("n = {} exceeds p = {}", self.n, self.p())));
        }
        if self.m < 1 || self.m > self.q() {
            return Err(FrackError::invalid(format!(
                "m = {} must lie in 1..={} (q)",
                self.m,
                self.q()
            )));
        }
        for &(c, w) in self.upper.iter().chain(&self.lower) {
            if !c.is_finite() || !(w.is_finite() && w > 0.0) {
                return Err(FrackError::invalid(format!(
                    "gamma pair ({c}, {w}) needs a finite coefficient and a positive weight"
                )));
            }
        }
        // A_i(b_j + k) ≠ B_j(a_i − l − 1): no left pole may coincide with a right pole.
        for &(a, aw) in &self.upper[..self.n] {
            for &(b, bw) in &self.lower[..self.m] {
                for k in 0..64 {
                    for l in 0..64 {
                        let lhs = aw * (b + k as f64);
                        let rhs = bw * (a - l as f64 - 1.0);
                        if (lhs - rhs).abs() <= PAIR_EQ_TOL * (1.0 + lhs.abs()) {
                            return Err(FrackError::invalid(format!(
                                "pole of Γ({b} + {bw}ξ) coincides with pole of Γ(1 − {a} − {aw}ξ)"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// ln Θ(ξ). The imaginary part is only meaningful modulo 2π.
    pub fn ln_integrand_kernel(&self, xi: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &(b, bw)) in self.lower.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_complex(xi * bw + b);
            } else {
                acc -= ln_gamma_complex(one - b - xi * bw);
            }
        }
        for (j, &(a, aw)) in self.upper.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_complex(one - a - xi * aw);
            } else {
                acc -= ln_gamma_complex(xi * aw + a);
            }
        }
        acc
    }

    /// Rightmost pole of Γ(b_j + B_j ξ), j ≤ m.
    fn rightmost_left_pole(&self) -> f64 {
        self.lower[..self.m]
            .iter()
            .map(|&(b, bw)| -b / bw)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Leftmost pole of Γ(1 − a_j − A_j ξ), j ≤ n, or +∞ when n = 0.
    fn leftmost_right_pole(&self) -> f64 {
        self.upper[..self.n]
            .iter()
            .map(|&(a, aw)| (1.0 - a) / aw)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueSum {
    pub value: f64,
    /// Estimated magnitude of the discarded tail.
    pub tail_estimate: f64,
    /// Largest term magnitude; `max_term / |value|` measures cancellation.
    pub max_term: f64,
    pub terms: usize,
}

struct Pole {
    xi: f64,
    family: usize,
    k: usize,
}

/// Sum of residues of Θ(ξ)z^{-ξ} at the poles of Γ(b_j + B_j ξ), j ≤ m.
///
/// Poles are visited from right to left. Only simple poles are handled.
pub fn evaluate_residue_series(spec: &HFunctionSpec, z: f64, max_terms: usize) -> Result<ResidueSum> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(FrackError::invalid(format!("H-function argument must be positive, got {z}")));
    }
    let mut poles: Vec<Pole> = Vec::with_capacity(spec.m * max_terms);
    for (family, &(b, bw)) in spec.lower[..spec.m].iter().enumerate() {
        for k in 0..max_terms {
            poles.push(Pole { xi: -(b + k as f64) / bw, family, k });
        }
    }
    poles.sort_by(|p, q| q.xi.total_cmp(&p.xi));
    poles.truncate(max_terms);
    for pair in poles.windows(2) {
        if pair[0].family != pair[1].family
            && (pair[0].xi - pair[1].xi).abs() <= 1e-10 * (1.0 + pair[0].xi.abs())
        {
            return Err(FrackError::DegeneratePoles(format!(
                "two gamma factors share a pole at ξ = {}",
                pair[0].xi
            )));
        }
    }

    let ln_z = z.ln();
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut max_term: f64 = 0.0;
    let mut small_run = 0;
    let mut last = 0.0_f64;
    let mut prev;
    for (idx, pole) in poles.iter().enumerate() {
        let term = residue_term(spec, pole, ln_z);
        if !term.is_finite() {
            return Err(FrackError::non_convergence(
                format!("residue series (term {idx} overflowed)"),
                &["residue"],
            ));
        }
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        max_term = max_term.max(term.abs());
        if term != 0.0 {
            prev = last;
            last = term;
            let total = (sum + comp).abs();
            if term.abs() <= 1e-17 * total || (total == 0.0 && max_term == 0.0) {
                small_run += 1;
                if small_run >= 3 {
                    let ratio = if prev != 0.0 { (last / prev).abs() } else { 0.0 };
                    let tail = if ratio < 1.0 {
                        last.abs() * ratio / (1.0 - ratio)
                    } else {
                        last.abs()
                    };
                    return Ok(ResidueSum {
                        value: sum + comp,
                        tail_estimate: tail,
                        max_term,
                        terms: idx + 1,
                    });
                }
            } else {
                small_run = 0;
            }
        }
    }
    if max_term == 0.0 {
        return Ok(ResidueSum { value: 0.0, tail_estimate: 0.0, max_term, terms: poles.len() });
    }
    Err(FrackError::non_convergence(
        format!("residue series after {} terms (last term {last:e})", poles.len()),
        &["residue"],
    ))
}

fn residue_term(spec: &HFunctionSpec, pole: &Pole, ln_z: f64) -> f64 {
    let xi = pole.xi;
    let (_, bw0) = spec.lower[pole.family];
    let mut ln_mag = -ln_gamma_sign(pole.k as f64 + 1.0).0 - bw0.ln() - xi * ln_z;
    let mut sign = if pole.k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut accumulate = |arg: f64, numerator: bool| {
        let (lg, s) = ln_gamma_sign(arg);
        if numerator {
            ln_mag += lg;
            sign *= s;
        } else if s == 0.0 {
            // 1/Γ at a pole
            sign = 0.0;
        } else {
            ln_mag -= lg;
            sign *= s;
        }
    };
    for (j, &(b, bw)) in spec.lower.iter().enumerate() {
        if j < spec.m {
            if j != pole.family {
                accumulate(b + bw * xi, true);
            }
        } else {
            accumulate(1.0 - b - bw * xi, false);
        }
    }
    for (j, &(a, aw)) in spec.upper.iter().enumerate() {
        if j < spec.n {
            accumulate(1.0 - a - aw * xi, true);
        } else {
            accumulate(a + aw * xi, false);
        }
    }
    if sign == 0.0 {
        0.0
    } else {
        sign * ln_mag.exp()
    }
}

/// H(z) by the residue series when it converges without heavy cancellation,
/// otherwise by contour quadrature.
pub fn evaluate(spec: &HFunctionSpec, z: f64) -> Result<f64> {
    let mut attempted = Vec::new();
    match evaluate_residue_series(spec, z, DEFAULT_MAX_TERMS) {
        Ok(r) if r.max_term <= 1e4 * r.value.abs() => return Ok(r.value),
        Ok(_) => attempted.push("residue (cancellation)"),
        Err(FrackError::DegeneratePoles(_)) => attempted.push("residue (coincident poles)"),
        Err(_) => attempted.push("residue"),
    }
    match evaluate_contour(spec, z) {
        Ok(c) => Ok(c.value),
        Err(_) => {
            attempted.push("contour");
            Err(FrackError::non_convergence(format!("H-function at z = {z}"), &attempted))
        }
    }
}

/// A value represented as `mantissa · exp(ln_scale)`, for results that
/// under- or overflow f64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub ln_scale: f64,
    /// Absolute error estimate, in units of `exp(ln_scale)`.
    pub error: f64,
    pub abscissa: f64,
}

impl ScaledValue {
    pub fn value(&self) -> f64 {
        self.mantissa * self.ln_scale.exp()
    }

    /// ln|value|, finite even where `value()` underflows.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: f64,
    pub error_estimate: f64,
    pub abscissa: f64,
}

/// Mellin-Barnes quadrature along Re ξ = c, with c between the left and right
/// pole families.
pub fn evaluate_contour(spec: &HFunctionSpec, z: f64) -> Result<ContourValue> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(FrackError::invalid(format!("H-function argument must be positive, got {z}")));
    }
    let scaled = evaluate_contour_ln(spec, z.ln())?;
    let factor = scaled.ln_scale.exp();
    Ok(ContourValue {
        value: scaled.mantissa * factor,
        error_estimate: scaled.error * factor,
        abscissa: scaled.abscissa,
    })
}

/// Contour quadrature at z = exp(ln_z), returned in scaled form.
pub fn evaluate_contour_ln(spec: &HFunctionSpec, ln_z: f64) -> Result<ScaledValue> {
    // Cancelled pairs leave the function unchanged but can open up the pole gap.
    let mut reduced = spec.clone();
    while let Ok(next) = cancel_common_pairs(&reduced) {
        reduced = next;
    }
    let spec = &reduced;
    let theta = spec.theta();
    if theta <= 1e-3 {
        return Err(FrackError::ContourFailure(format!(
            "integrand does not decay on vertical lines (theta = {theta})"
        )));
    }
    let left = spec.rightmost_left_pole();
    let right = spec.leftmost_right_pole();
    if left >= right {
        return Err(FrackError::ContourFailure(format!(
            "no vertical line separates the poles (left {left}, right {right})"
        )));
    }

    let log_integrand = |c: f64, y: f64| -> Complex64 {
        let xi = Complex64::new(c, y);
        spec.ln_integrand_kernel(xi) - xi * ln_z
    };

    let (lo, hi) = if right.is_finite() {
        let w = right - left;
        (left + 0.25 * w, right - 0.25 * w)
    } else {
        (left + 0.5, left + 0.5 + 400.0)
    };
    let mut c = choose_abscissa(lo, hi, &log_integrand, theta);
    if !right.is_finite() {
        // the saddle can lie far right when the argument is large
        let mut hi = hi;
        while c >= hi - 1e-9 * hi && hi < 1e8 {
            let lo = 0.5 * hi;
            hi *= 8.0;
            c = choose_abscissa(lo, hi, &log_integrand, theta);
        }
    }

    // Reference scale: the peak log-magnitude over a coarse probe of the line.
    let ln_ref = probe_peak(c, &log_integrand, theta);
    let g = |y: f64| -> f64 {
        let l = log_integrand(c, y);
        (l - ln_ref).exp().re
    };
    let g_abs = |y: f64| -> f64 { (log_integrand(c, y).re - ln_ref.re).exp() };

    // Near the real axis the integrand is Gaussian in Im ξ; far-right saddles
    // make it wide, and both the step and the truncation scale with the width.
    let curvature = 2.0 * (log_integrand(c, 0.0).re - log_integrand(c, 1.0).re);
    let width = if curvature > 0.0 { curvature.recip().sqrt() } else { 1.0 };

    // Truncation of the line: stop once the integrand stays below 1e-18 of its peak.
    let base_step = 0.25 * width.max(1.0);
    let mut y_max = 0.0;
    let mut quiet = 0;
    let mut y = 0.0;
    let limit = 60.0 / theta.min(1.0) + 200.0;
    let decay_limit = (limit * 50.0).max(80.0 * width);
    while y < decay_limit {
        y += base_step;
        let a = g_abs(y);
        if a < 1e-18 {
            quiet += 1;
            if quiet >= 16 {
                y_max = y;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if y_max == 0.0 {
        return Err(FrackError::ContourFailure(format!(
            "integrand not negligible by Im ξ = {decay_limit}"
        )));
    }

    // log-gamma values of size L carry absolute errors near L·ε, which sets
    // the attainable relative accuracy far out on the real axis
    let tolerance = 1e-14_f64.max(2e-16 * (ln_ref.re.abs() + (c * ln_z).abs()));
    let mut h = base_step;
    let mut n = (y_max / h).ceil() as usize;
    let mut sum = 0.5 * g(0.0);
    let mut l1 = 0.5 * g_abs(0.0);
    for k in 1..=n {
        let yk = k as f64 * h;
        sum += g(yk);
        l1 += g_abs(yk);
    }
    let mut estimate = sum * h / PI;
    for _level in 0..14 {
        let mut mid = 0.0;
        let mut mid_abs = 0.0;
        for k in 0..n {
            let yk = (k as f64 + 0.5) * h;
            mid += g(yk);
            mid_abs += g_abs(yk);
        }
        sum += mid;
        l1 += mid_abs;
        h *= 0.5;
        n *= 2;
        let refined = sum * h / PI;
        let scale = l1 * h / PI;
        let diff = (refined - estimate).abs();
        estimate = refined;
        if diff <= tolerance * scale || diff == 0.0 {
            // lnΓ noise of relative size `tolerance` on every node limits
            // how much cancellation along the line can be resolved
            if estimate.abs() < 1e3 * tolerance * scale {
                return Err(FrackError::ContourFailure(format!(
                    "cancellation along Re ξ = {c} leaves {estimate:e} of an absolute mass {scale:e}"
                )));
            }
            return Ok(ScaledValue { mantissa: estimate, ln_scale: ln_ref.re, error: diff.max(1e-16 * scale), abscissa: c });
        }
    }
    Err(FrackError::ContourFailure(format!(
        "trapezoid refinement stalled at step {h:e} on Re ξ = {c}"
    )))
}

fn probe_peak(c: f64, log_integrand: &impl Fn(f64, f64) -> Complex64, theta: f64) -> Complex64 {
    let span = 40.0 / theta.min(1.0);
    let mut best = log_integrand(c, 0.0).re;
    let mut y = 0.125;
    while y < span {
        best = best.max(log_integrand(c, y).re);
        y *= 1.5;
    }
    Complex64::new(best, 0.0)
}

/// Pick the abscissa in `[lo, hi]` that minimises the probed peak of the
/// integrand, which keeps cancellation along the line small.
fn choose_abscissa(lo: f64, hi: f64, log_integrand: &impl Fn(f64, f64) -> Complex64, theta: f64) -> f64 {
    let samples = 24;
    let at = |i: usize| {
        // cubic spacing when the interval is long (n = 0)
        let frac = i as f64 / samples as f64;
        if hi - lo > 10.0 {
            lo + (hi - lo) * (frac * frac * frac)
        } else {
            lo + (hi - lo) * frac
        }
    };
    let peak = |c: f64| {
        let p = probe_peak(c, log_integrand, theta).re;
        if p.is_finite() {
            p
        } else {
            f64::INFINITY
        }
    };
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..=samples {
        let p = peak(at(i));
        if p < best {
            best = p;
            best_i = i;
        }
    }
    if !best.is_finite() {
        return 0.5 * (lo + hi);
    }
    // golden-section refinement between the neighbouring samples
    let (mut a, mut b) = (at(best_i.saturating_sub(1)), at((best_i + 1).min(samples)));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (peak(x1), peak(x2));
    for _ in 0..60 {
        if (b - a) <= 1e-9 * (1.0 + a.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = peak(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = peak(x2);
        }
    }
    let refined = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if refined.1 < best {
        refined.0
    } else {
        at(best_i)
    }
}

/// H^{m,n}_{p,q}[1/x | a; b] = H^{n,m}_{q,p}[x | 1−b; 1−a].
pub fn invert_argument(spec: &HFunctionSpec) -> HFunctionSpec {
    HFunctionSpec {
        m: spec.n,
        n: spec.m,
        upper: spec.lower.iter().map(|&(b, w)| (1.0 - b, w)).collect(),
        lower: spec.upper.iter().map(|&(a, w)| (1.0 - a, w)).collect(),
    }
}

/// x^σ H[x | (a, A); (b, B)] = H[x | (a + σA, A); (b + σB, B)].
pub fn power_shift(spec: &HFunctionSpec, sigma: f64) -> HFunctionSpec {
    HFunctionSpec {
        m: spec.m,
        n: spec.n,
        upper: spec.upper.iter().map(|&(a, w)| (a + sigma * w, w)).collect(),
        lower: spec.lower.iter().map(|&(b, w)| (b + sigma * w, w)).collect(),
    }
}

fn pairs_equal(x: GammaPair, y: GammaPair) -> bool {
    (x.0 - y.0).abs() <= PAIR_EQ_TOL * (1.0 + x.0.abs()) && (x.1 - y.1).abs() <= PAIR_EQ_TOL * x.1
}

/// Remove one upper/lower pair whose gamma factors cancel in Θ(ξ).
///
/// A numerator factor Γ(1 − a_j − A_jξ) (j ≤ n) cancels a denominator
/// Γ(1 − b_k − B_kξ) (k > m) when the pairs agree, lowering n. A denominator
/// Γ(a_j + A_jξ) (j > n) cancels a numerator Γ(b_k + B_kξ) (k ≤ m, with m > 1
/// afterwards) when the pairs agree, lowering m.
pub fn cancel_common_pairs(spec: &HFunctionSpec) -> Result<HFunctionSpec> {
    for j in 0..spec.n {
        for k in spec.m..spec.q() {
            if pairs_equal(spec.upper[j], spec.lower[k]) {
                let mut out = spec.clone();
                out.upper.remove(j);
                out.lower.remove(k);
                out.n -= 1;
                return Ok(out);
            }
        }
    }
    if spec.m > 1 {
        for j in spec.n..spec.p() {
            for k in 0..spec.m {
                if pairs_equal(spec.upper[j], spec.lower[k]) {
                    let mut out = spec.clone();
                    out.upper.remove(j);
                    out.lower.remove(k);
                    out.m -= 1;
                    return Ok(out);
                }
            }
        }
    }
    Err(FrackError::NoCancellablePair)
}

/// The specific H-function instances this crate works with.
pub mod instances {
    use super::HFunctionSpec;

    fn spec(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> HFunctionSpec {
        HFunctionSpec { m, n, upper, lower }
    }

    /// Γ(γ)·E^γ_{α,β}(−z) = H^{1,1}_{1,2}[z | (1−γ,1); (0,1),(1−β,α)].
    pub fn prabhakar(alpha: f64, beta: f64, gamma: f64) -> HFunctionSpec {
        spec(1, 1, vec![(1.0 - gamma, 1.0)], vec![(0.0, 1.0), (1.0 - beta, alpha)])
    }

    /// E_{α,β}(−z) = H^{1,1}_{1,2}[z | (0,1); (0,1),(1−β,α)].
    pub fn mittag_leffler_two(alpha: f64, beta: f64) -> HFunctionSpec {
        prabhakar(alpha, beta, 1.0)
    }

    /// E_α(−z) = H^{1,1}_{1,2}[z | (0,1); (0,1),(0,α)].
    pub fn mittag_leffler_one(alpha: f64) -> HFunctionSpec {
        prabhakar(alpha, 1.0, 1.0)
    }

    /// pΨq(−z) = H^{1,p}_{p,q+1}[z | (1−a,A); (0,1),(1−b,B)].
    pub fn wright(upper: &[(f64, f64)], lower: &[(f64, f64)]) -> HFunctionSpec {
        let mut l = vec![(0.0, 1.0)];
        l.extend(lower.iter().map(|&(b, w)| (1.0 - b, w)));
        spec(1, upper.len(), upper.iter().map(|&(a, w)| (1.0 - a, w)).collect(), l)
    }

    /// e^{−z} = H^{1,0}_{0,1}[z | ∅; (0,1)].
    pub fn exponential() -> HFunctionSpec {
        spec(1, 0, vec![], vec![(0.0, 1.0)])
    }

    /// u/(1+u) = H^{1,1}_{1,1}[u | (1,1); (1,1)], the Laplace-domain relaxation
    /// factor s^ν/(s^ν+c^ν) at u = (s/c)^ν.
    pub fn relaxation_ratio() -> HFunctionSpec {
        spec(1, 1, vec![(1.0, 1.0)], vec![(1.0, 1.0)])
    }

    /// t·L⁻¹[relaxation_ratio] in the variable (ct)^{−ν}:
    /// H^{1,1}_{2,1}[· | (1,1),(0,ν); (1,1)].
    pub fn relaxation_inverse_laplace(nu: f64) -> HFunctionSpec {
        spec(1, 1, vec![(1.0, 1.0), (0.0, nu)], vec![(1.0, 1.0)])
    }

    /// Argument-inverted form of [`relaxation_inverse_laplace`]:
    /// H^{1,1}_{1,2}[(ct)^ν | (0,1); (0,1),(1,ν)].
    pub fn relaxation_inverse_laplace_inverted(nu: f64) -> HFunctionSpec {
        spec(1, 1, vec![(0.0, 1.0)], vec![(0.0, 1.0), (1.0, nu)])
    }

    /// Kernel of the kinetic convolution: H^{1,1}_{1,2}[(ct)^ν | (−1/ν,1); (−1/ν,1),(0,ν)].
    pub fn kinetic_kernel(nu: f64) -> HFunctionSpec {
        spec(1, 1, vec![(-1.0 / nu, 1.0)], vec![(-1.0 / nu, 1.0), (0.0, nu)])
    }

    /// Cosine-transform image of the Fourier mode, before any cancellation:
    /// H^{2,1}_{3,3}[X | (1,1),(1,ν),(1,1); (1,2),(1,1),(1,1)], with N = H/|x|.
    pub fn propagator_cosine_image(nu: f64) -> HFunctionSpec {
        spec(2, 1, vec![(1.0, 1.0), (1.0, nu), (1.0, 1.0)], vec![(1.0, 2.0), (1.0, 1.0), (1.0, 1.0)])
    }

    /// H^{2,0}_{2,2}[X | (1,ν),(1,1); (1,2),(1,1)], with N = H/|x|.
    pub fn propagator_reduced(nu: f64) -> HFunctionSpec {
        spec(2, 0, vec![(1.0, nu), (1.0, 1.0)], vec![(1.0, 2.0), (1.0, 1.0)])
    }

    /// H^{2,0}_{2,2}[X | (1−ν/2,ν),(1/2,1); (0,2),(1/2,1)], with N = H/(c^ν t^ν)^{1/2}.
    pub fn propagator_shifted(nu: f64) -> HFunctionSpec {
        spec(2, 0, vec![(1.0 - nu / 2.0, nu), (0.5, 1.0)], vec![(0.0, 2.0), (0.5, 1.0)])
    }

    /// H^{1,0}_{1,1}[X | (1−ν/2,ν); (0,2)], with N = H/(c^ν t^ν)^{1/2}.
    pub fn propagator_single(nu: f64) -> HFunctionSpec {
        spec(1, 0, vec![(1.0 - nu / 2.0, nu)], vec![(0.0, 2.0)])
    }

    /// H^{2,0}_{1,2}[X/4 | (1−ν/2,ν); (0,1),(1/2,1)], with N = H/(4π c^ν t^ν)^{1/2}.
    pub fn propagator(nu: f64) -> HFunctionSpec {
        spec(2, 0, vec![(1.0 - nu / 2.0, nu)], vec![(0.0, 1.0), (0.5, 1.0)])
    }
}

#[cfg(test)]
mod tests {
    use super::instances::*;
    use super::*;
    use std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn exponential_instance() {
        let spec = exponential();
        let r = evaluate_residue_series(&spec, 1.0, DEFAULT_MAX_TERMS).unwrap();
        assert!(rel(r.value, 1.0 / E) < 1e-14);
        let c = evaluate_contour(&spec, 1.0).unwrap();
        assert!(rel(c.value, 1.0 / E) < 1e-12, "{c:?}");
        let c = evaluate_contour(&spec, 30.0).unwrap();
        assert!(rel(c.value, (-30.0f64).exp()) < 1e-10, "{c:?}");
    }

    #[test]
    fn mittag_leffler_instance_gives_exponential() {
        // E_1(z) at z = 1: the H argument is −z = −1, which is negative, so use
        // E_1(−1) = e^{−1} through argument 1.
        let spec = mittag_leffler_two(1.0, 1.0);
        let r = evaluate_residue_series(&spec, 1.0, DEFAULT_MAX_TERMS).unwrap();
        assert!(rel(r.value, 1.0 / E) < 1e-14);
        let c = evaluate_contour(&spec, 1.0).unwrap();
        assert!(rel(c.value, 1.0 / E) < 1e-12);
    }

    #[test]
    fn relaxation_ratio_is_u_over_one_plus_u() {
        let spec = relaxation_ratio();
        for &u in &[0.1, 0.5, 0.9] {
            let r = evaluate_residue_series(&spec, u, 2000).unwrap();
            assert!(rel(r.value, u / (1.0 + u)) < 1e-12);
        }
        for &u in &[0.1, 2.0, 50.0] {
            let c = evaluate_contour(&spec, u).unwrap();
            assert!(rel(c.value, u / (1.0 + u)) < 1e-12, "u={u}: {c:?}");
        }
    }

    #[test]
    fn theta_values() {
        assert!((prabhakar(0.5, 1.0, 1.0).theta() - 1.5).abs() < 1e-15);
        assert!((propagator(0.5).theta() - 1.5).abs() < 1e-15);
        assert!((kinetic_kernel(0.7).theta() - 1.3).abs() < 1e-15);
    }

    #[test]
    fn invalid_orders_rejected() {
        assert!(HFunctionSpec::new(0, 0, vec![], vec![(0.0, 1.0)]).is_err());
        assert!(HFunctionSpec::new(1, 2, vec![(0.0, 1.0)], vec![(0.0, 1.0)]).is_err());
        assert!(HFunctionSpec::new(1, 0, vec![], vec![(0.0, -1.0)]).is_err());
        // Γ(ξ) and Γ(1 − 1 − ξ) = Γ(−ξ) share no pole, but Γ(ξ) and Γ(−ξ + 1)... do not either;
        // Γ(ξ) with Γ(−ξ) shifted onto it: a = 1 makes Γ(−ξ), poles at 0 and Γ(ξ) at 0.
        assert!(HFunctionSpec::new(1, 1, vec![(1.0, 1.0)], vec![(0.0, 1.0)]).is_err());
    }

    #[test]
    fn degenerate_poles_rejected() {
        let spec = propagator_shifted(0.5);
        assert!(matches!(
            evaluate_residue_series(&spec, 1.0, DEFAULT_MAX_TERMS),
            Err(FrackError::DegeneratePoles(_))
        ));
    }

    #[test]
    fn structural_identities() {
        let s = relaxation_inverse_laplace(0.6);
        assert_eq!(invert_argument(&invert_argument(&s)), s);
        assert_eq!(invert_argument(&s), relaxation_inverse_laplace_inverted(0.6));
        assert_eq!(power_shift(&s, 0.0), s);

        let shifted = power_shift(&relaxation_inverse_laplace_inverted(0.6), -1.0 / 0.6);
        let kernel = kinetic_kernel(0.6);
        for (x, y) in shifted.upper.iter().chain(&shifted.lower).zip(kernel.upper.iter().chain(&kernel.lower)) {
            assert!(pairs_equal(*x, *y));
        }

        let reduced = cancel_common_pairs(&propagator_cosine_image(0.8)).unwrap();
        assert_eq!(reduced, propagator_reduced(0.8));
        let single = cancel_common_pairs(&propagator_shifted(0.8)).unwrap();
        assert_eq!(single, propagator_single(0.8));
        assert_eq!(cancel_common_pairs(&propagator_single(0.8)), Err(FrackError::NoCancellablePair));
    }

    #[test]
    fn inversion_numeric_check() {
        let s = relaxation_ratio();
        let inv = invert_argument(&s);
        let x = 2.0;
        let a = evaluate_contour(&s, 1.0 / x).unwrap().value;
        let b = evaluate_contour(&inv, x).unwrap().value;
        assert!(rel(a, b) < 1e-9);
    }

    #[test]
    fn power_shift_numeric_check() {
        let s = mittag_leffler_two(0.8, 1.2);
        let sigma = 0.3;
        let x: f64 = 1.7;
        let lhs = x.powf(sigma) * evaluate_contour(&s, x).unwrap().value;
        let rhs = evaluate_contour(&power_shift(&s, sigma), x).unwrap().value;
        assert!(rel(lhs, rhs) < 1e-9);
    }
}
