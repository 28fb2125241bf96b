//! The Mittag-Leffler family, Wright's generalized hypergeometric function
//! and Kummer's confluent hypergeometric function, on real arguments.

pub mod gamma;

use crate::error::{FrackError, Result};
use crate::hfunction::{self, instances};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub use gamma::{beta, gamma, ln_gamma, pochhammer, reciprocal_gamma};

use gamma::{ln_gamma_sign, ln_pochhammer_sign};

/// Hard cap on series length; hitting it is reported as non-convergence.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Largest tolerated ratio between the biggest series term and the sum.
/// Beyond this, cancellation eats more than four digits and another branch
/// is used.
const SERIES_CANCELLATION_LIMIT: f64 = 1e4;

/// Parameters (α, β, γ) of the Prabhakar function E^γ_{α,β}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(FrackError::invalid(format!("alpha must satisfy 0 < alpha <= 2, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(FrackError::invalid(format!("beta must be positive, got {beta}")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(FrackError::invalid(format!("gamma must be positive, got {gamma}")));
        }
        Ok(MLParams { alpha, beta, gamma })
    }

    /// E_{α,β}
    pub fn two(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 1.0)
    }

    /// E_α
    pub fn one(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub max_term: f64,
    pub terms: usize,
}

impl SeriesSum {
    fn well_conditioned(&self) -> bool {
        self.max_term <= SERIES_CANCELLATION_LIMIT * self.value.abs()
    }
}

/// Sums terms produced by `ln_term(n) -> (ln|t_n|, sign)` until they are
/// negligible and decreasing.
fn sum_log_series(what: &str, mut ln_term: impl FnMut(usize) -> Result<(f64, f64)>) -> Result<SeriesSum> {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut max_term = 0.0_f64;
    let mut prev_mag = f64::INFINITY;
    for n in 0..MAX_SERIES_TERMS {
        let (ln_mag, sign) = ln_term(n)?;
        let term = if sign == 0.0 { 0.0 } else { sign * ln_mag.exp() };
        if !term.is_finite() {
            return Err(FrackError::non_convergence(format!("{what} (term {n} overflowed)"), &["series"]));
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        let mag = term.abs();
        max_term = max_term.max(mag);
        let total = (sum + comp).abs();
        if n > 2 && sign != 0.0 && mag <= prev_mag && mag <= 1e-17 * total {
            return Ok(SeriesSum { value: sum + comp, max_term, terms: n + 1 });
        }
        if sign != 0.0 {
            prev_mag = mag;
        }
        if !total.is_finite() {
            break;
        }
    }
    Err(FrackError::non_convergence(
        format!("{what} after {MAX_SERIES_TERMS} terms"),
        &["series"],
    ))
}

/// Power series Σ (γ)_n z^n / (n! Γ(αn+β)).
pub fn ml_series(p: MLParams, z: f64) -> Result<SeriesSum> {
    if z == 0.0 {
        return Ok(SeriesSum { value: reciprocal_gamma(p.beta), max_term: reciprocal_gamma(p.beta).abs(), terms: 1 });
    }
    let ln_abs_z = z.abs().ln();
    sum_log_series("Mittag-Leffler power series", |n| {
        let (lp, sp) = ln_pochhammer_sign(p.gamma, n as u32);
        let (lg, sg) = ln_gamma_sign(p.alpha * n as f64 + p.beta);
        let sz = if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        Ok((lp + n as f64 * ln_abs_z - ln_gamma_sign(n as f64 + 1.0).0 - lg, sp * sz * sg))
    })
}

/// Algebraic expansion for z → −∞, from the residues at the poles of Γ(γ+ξ):
///
/// E^γ_{α,β}(z) ≈ x^{−γ}/Γ(γ) Σ_k (−1)^k Γ(γ+k)/(k! Γ(β−α(γ+k))) x^{−k},  x = −z.
///
/// Exact up to exponentially small terms when α ≤ 1. Returns `None` when the
/// optimally truncated sum does not reach full double precision.
pub fn ml_asymptotic(p: MLParams, z: f64) -> Option<f64> {
    if z >= 0.0 || (p.alpha > 1.0 && p.gamma != 1.0) {
        return None;
    }
    let x = -z;
    let ln_x = x.ln();
    let ln_gamma_g = ln_gamma(p.gamma);
    // For 1 < α ≤ 2 the two conjugate exponential terms are kept explicitly.
    let exponential = if p.alpha > 1.0 {
        let zeta = Complex64::from_polar(x.powf(1.0 / p.alpha), PI / p.alpha);
        2.0 / p.alpha * (zeta.powf(1.0 - p.beta) * zeta.exp()).re
    } else {
        0.0
    };
    // For α = 1 the expansion omits a term of size e^{-x} x^{γ-β} / Γ(γ).
    let ln_dropped = if p.alpha == 1.0 { -x + (p.gamma - p.beta) * ln_x - ln_gamma_g } else { f64::NEG_INFINITY };
    let integer_alpha = p.alpha == p.alpha.floor();
    let accept = |sum: f64| {
        let total = sum + exponential;
        if total != 0.0 && ln_dropped + 15.0 * std::f64::consts::LN_10 + 1.0 <= total.abs().ln() {
            Some(total)
        } else {
            None
        }
    };
    let mut sum = 0.0_f64;
    let mut prev_mag = f64::INFINITY;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let arg = p.beta - p.alpha * (p.gamma + kf);
        let (lr, sr) = ln_gamma_sign(arg);
        if sr == 0.0 {
            if integer_alpha {
                // every later argument is also a pole: the expansion terminates
                return accept(sum);
            }
            continue;
        }
        let ln_mag = ln_gamma(p.gamma + kf) - ln_gamma_g - ln_gamma(kf + 1.0) - lr - (p.gamma + kf) * ln_x;
        let sign = sr * if k % 2 == 1 { -1.0 } else { 1.0 };
        let mag = ln_mag.exp();
        if mag > prev_mag {
            // past the optimal truncation point
            return None;
        }
        sum += sign * mag;
        if mag <= 1e-17 * sum.abs() {
            return accept(sum);
        }
        prev_mag = mag;
    }
    None
}

/// Mellin-Barnes quadrature for z < 0 via the H-function representation.
pub fn ml_contour(p: MLParams, z: f64) -> Result<f64> {
    if z >= 0.0 {
        return Err(FrackError::ContourFailure("contour branch needs a negative argument".into()));
    }
    let spec = instances::prabhakar(p.alpha, p.beta, p.gamma);
    let v = hfunction::evaluate_contour(&spec, -z)?;
    Ok(v.value / gamma(p.gamma))
}

/// The Prabhakar function E^γ_{α,β}(z) for real z.
///
/// z ≥ 0 uses the power series. For z < 0 the series is used while its
/// cancellation is mild, then the algebraic asymptotic expansion (α ≤ 1),
/// then Mellin-Barnes quadrature.
pub fn mittag_leffler(p: MLParams, z: f64) -> Result<f64> {
    if z.is_nan() {
        return Err(FrackError::invalid("argument is NaN"));
    }
    if z >= 0.0 {
        return ml_series(p, z).map(|s| s.value).map_err(|_| {
            FrackError::non_convergence(format!("E^{}_{{{},{}}}({z})", p.gamma, p.alpha, p.beta), &["series"])
        });
    }
    if z == f64::NEG_INFINITY && p.alpha < 2.0 {
        return Ok(0.0);
    }
    let mut attempted = Vec::new();
    if -z <= 64.0 {
        if let Ok(s) = ml_series(p, z) {
            if s.well_conditioned() {
                return Ok(s.value);
            }
        }
        attempted.push("series");
    }
    if let Some(v) = ml_asymptotic(p, z) {
        return Ok(v);
    }
    attempted.push("asymptotic");
    match ml_contour(p, z) {
        Ok(v) => return Ok(v),
        Err(_) => attempted.push("contour"),
    }
    Err(FrackError::non_convergence(
        format!("E^{}_{{{},{}}}({z})", p.gamma, p.alpha, p.beta),
        &attempted,
    ))
}

/// E_α(z)
pub fn ml1(alpha: f64, z: f64) -> Result<f64> {
    mittag_leffler(MLParams::one(alpha)?, z)
}

/// E_{α,β}(z)
pub fn ml2(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    mittag_leffler(MLParams::two(alpha, beta)?, z)
}

/// Parameter arrays of the Wright function pΨq.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WrightSpec {
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

impl WrightSpec {
    pub fn new(upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        for &(c, w) in upper.iter().chain(&lower) {
            if !c.is_finite() || !(w > 0.0 && w.is_finite()) {
                return Err(FrackError::invalid(format!("Wright pair ({c}, {w}) needs a positive weight")));
            }
        }
        let spec = WrightSpec { upper, lower };
        if spec.excess() < -1e-12 {
            return Err(FrackError::DivergentParameters(format!(
                "1 + ΣB − ΣA = {} < 0",
                spec.excess()
            )));
        }
        Ok(spec)
    }

    /// 1 + Σ B_j − Σ A_j
    pub fn excess(&self) -> f64 {
        1.0 + self.lower.iter().map(|p| p.1).sum::<f64>() - self.upper.iter().map(|p| p.1).sum::<f64>()
    }

    /// Radius of convergence when the excess is zero.
    pub fn radius(&self) -> f64 {
        let ln_r: f64 = self.upper.iter().map(|&(_, a)| -a * a.ln()).sum::<f64>()
            + self.lower.iter().map(|&(_, b)| b * b.ln()).sum::<f64>();
        ln_r.exp()
    }
}

fn wright_series(spec: &WrightSpec, z: f64) -> Result<SeriesSum> {
    let ln_abs_z = if z == 0.0 { f64::NEG_INFINITY } else { z.abs().ln() };
    sum_log_series("Wright series", |n| {
        let nf = n as f64;
        let mut ln_mag = if n == 0 { 0.0 } else { nf * ln_abs_z } - ln_gamma_sign(nf + 1.0).0;
        let mut sign = if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        for &(a, w) in &spec.upper {
            let (lg, s) = ln_gamma_sign(a + nf * w);
            if s == 0.0 {
                return Err(FrackError::invalid(format!("Γ({a} + {n}·{w}) is a pole")));
            }
            ln_mag += lg;
            sign *= s;
        }
        for &(b, w) in &spec.lower {
            let (lg, s) = ln_gamma_sign(b + nf * w);
            ln_mag -= lg;
            sign *= s;
        }
        Ok((ln_mag, sign))
    })
}

/// Wright's generalized hypergeometric function pΨq(z).
pub fn wright_psi(spec: &WrightSpec, z: f64) -> Result<f64> {
    if spec.excess().abs() <= 1e-12 && z.abs() >= spec.radius() {
        return Err(FrackError::DivergentParameters(format!(
            "|z| = {} outside the convergence disc of radius {}",
            z.abs(),
            spec.radius()
        )));
    }
    if z == 0.0 {
        return wright_series(spec, 0.0).map(|s| s.value);
    }
    let series = wright_series(spec, z);
    if let Ok(s) = &series {
        if z > 0.0 || s.well_conditioned() {
            return Ok(s.value);
        }
    }
    if let Err(e @ FrackError::InvalidParameter(_)) = &series {
        return Err(e.clone());
    }
    if z < 0.0 {
        let h = instances::wright(&spec.upper, &spec.lower);
        if let Ok(v) = hfunction::evaluate_contour(&h, -z) {
            return Ok(v.value);
        }
        return Err(FrackError::non_convergence(format!("Wright function at {z}"), &["series", "contour"]));
    }
    Err(FrackError::non_convergence(format!("Wright function at {z}"), &["series"]))
}

/// Kummer's Φ(β, γ; z) = ₁F₁(β; γ; z) = Γ(γ) E^β_{1,γ}(z).
pub fn kummer_phi(beta: f64, gamma_param: f64, z: f64) -> Result<f64> {
    if !(gamma_param > 0.0) {
        return Err(FrackError::invalid(format!("Kummer γ must be positive, got {gamma_param}")));
    }
    let p = MLParams::new(1.0, gamma_param, beta)?;
    Ok(gamma(gamma_param) * mittag_leffler(p, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn elementary_reductions() {
        assert!(rel(ml2(1.0, 1.0, 1.0).unwrap(), E) < 1e-14);
        assert!(rel(ml1(2.0, -1.0).unwrap(), 1f64.cos()) < 1e-14);
        assert!(rel(ml2(1.0, 2.0, 1.0).unwrap(), E - 1.0) < 1e-14);
        assert!(rel(ml1(1.0, -30.0).unwrap(), (-30f64).exp()) < 1e-8);
    }

    #[test]
    fn half_order_reference_value() {
        // e·erfc(1), checked against an independent high-precision evaluation.
        assert!(rel(ml1(0.5, -1.0).unwrap(), 0.427_583_576_155_807) < 1e-13);
    }

    #[test]
    fn asymptotic_branch_keeps_alternating_sign() {
        // E_{1,3}(−x) = (e^{−x} − 1 + x)/x², whose expansion is 1/x − 1/x².
        let p = MLParams::two(1.0, 3.0).unwrap();
        let x = 60.0f64;
        let exact = ((-x).exp() - 1.0 + x) / (x * x);
        assert!(rel(ml_asymptotic(p, -x).unwrap(), exact) < 1e-14);
    }

    #[test]
    fn branches_agree_on_negative_axis() {
        for &(a, b, g) in &[(0.5, 1.0, 1.0), (0.9, 1.0, 1.0), (0.7, 1.3, 2.0), (0.3, 0.8, 0.5)] {
            let p = MLParams::new(a, b, g).unwrap();
            for &x in &[50.0, 100.0] {
                let asy = ml_asymptotic(p, -x).unwrap();
                let con = ml_contour(p, -x).unwrap();
                assert!(rel(asy, con) < 1e-9, "{p:?} x={x}: {asy} vs {con}");
            }
        }
        let p = MLParams::new(0.8, 1.1, 1.5).unwrap();
        let s = ml_series(p, -3.0).unwrap().value;
        let c = ml_contour(p, -3.0).unwrap();
        assert!(rel(s, c) < 1e-11);
    }

    #[test]
    fn large_order_negative_axis() {
        // E_{1.5}(−x) carries damped oscillating exponential terms.
        let p = MLParams::one(1.5).unwrap();
        let s = ml_series(p, -10.0).unwrap().value;
        assert!(rel(ml_contour(p, -10.0).unwrap(), s) < 1e-10);
        for &x in &[300.0, 1000.0] {
            let a = ml_asymptotic(p, -x).unwrap();
            let c = ml_contour(p, -x).unwrap();
            assert!((a - c).abs() < 1e-12 * c.abs().max(1e-3), "x={x}: {a} vs {c}");
        }
        // E_2(−x) = cos √x
        let p2 = MLParams::one(2.0).unwrap();
        assert!((ml_asymptotic(p2, -1e4).unwrap() - 100f64.cos()).abs() < 1e-12);
        assert!(mittag_leffler(p, -40.0).unwrap().is_finite());
    }

    #[test]
    fn decay_bound_for_large_argument() {
        for &a in &[0.5, 0.9] {
            let p = MLParams::one(a).unwrap();
            for &r in &[50.0, 100.0, 1e4] {
                let v = mittag_leffler(p, -r).unwrap();
                assert!(v.abs() * r < 1.0, "alpha={a}, r={r}: {v}");
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(MLParams::new(0.0, 1.0, 1.0).is_err());
        assert!(MLParams::new(2.5, 1.0, 1.0).is_err());
        assert!(MLParams::new(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn wright_examples() {
        let e = WrightSpec::new(vec![(1.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        assert!(rel(wright_psi(&e, 1.0).unwrap(), E) < 1e-14);

        let (g, a, b, z) = (2.0, 0.7, 1.3, -0.5);
        let w = WrightSpec::new(vec![(g, 1.0)], vec![(b, a)]).unwrap();
        let ml = mittag_leffler(MLParams::new(a, b, g).unwrap(), z).unwrap();
        assert!(rel(wright_psi(&w, z).unwrap(), gamma(g) * ml) < 1e-12);
    }

    #[test]
    fn wright_convergence_conditions() {
        assert!(matches!(
            WrightSpec::new(vec![(1.0, 2.0)], vec![]),
            Err(FrackError::DivergentParameters(_))
        ));
        // ₁Ψ₀[(1,1)|z] = 1/(1−z), excess zero, radius one
        let geo = WrightSpec::new(vec![(1.0, 1.0)], vec![]).unwrap();
        assert!((geo.radius() - 1.0).abs() < 1e-15);
        assert!(rel(wright_psi(&geo, 0.5).unwrap(), 2.0) < 1e-14);
        assert!(matches!(wright_psi(&geo, 1.5), Err(FrackError::DivergentParameters(_))));
    }

    #[test]
    fn kummer_examples() {
        assert!(rel(kummer_phi(1.0, 1.0, 1.0).unwrap(), E) < 1e-14);
        assert!(rel(kummer_phi(2.0, 2.0, 1.0).unwrap(), E) < 1e-14);
        assert!(rel(kummer_phi(1.0, 2.0, 1.0).unwrap(), E - 1.0) < 1e-14);
    }
}
