//! Numeric Laplace transform and inversion, and the cosine integral used to
//! pass from Fourier space back to real space.

use crate::error::{FrackError, Result};
use crate::quadrature::{gauss_kronrod, tanh_sinh, tanh_sinh_with_distances, wynn_epsilon};
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// Probe points for transform identity checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformProbe {
    pub s_values: Vec<f64>,
    pub k_values: Vec<f64>,
    pub tolerance: f64,
}

impl TransformProbe {
    pub fn new(s_values: Vec<f64>, k_values: Vec<f64>, tolerance: f64) -> Result<Self> {
        if s_values.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(FrackError::invalid("Laplace abscissae must be finite and positive"));
        }
        if k_values.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(FrackError::invalid("wavenumbers must be finite and nonnegative"));
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(FrackError::invalid("tolerance must be positive"));
        }
        Ok(TransformProbe { s_values, k_values, tolerance })
    }
}

/// ln(1e18): the Laplace integral is cut where e^{−st} < 1e-18.
const LAPLACE_TAIL: f64 = 41.446_531_673_892_82;

/// ∫₀^∞ e^{−st} f(t) dt.
///
/// The head [0, 1/s] uses tanh-sinh so integrable singularities at t = 0 are
/// fine; the remainder up to the cut uses adaptive Gauss-Kronrod.
pub fn laplace_numeric<F: Fn(f64) -> f64>(f: F, s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(FrackError::invalid(format!("Laplace abscissa must be positive, got {s}")));
    }
    let split = 1.0 / s;
    let cut = LAPLACE_TAIL / s;
    let g = |t: f64| (-s * t).exp() * f(t);
    let head = tanh_sinh(g, 0.0, split, 1e-15).or_else(|_| tanh_sinh(g, 0.0, split, 1e-11))?;
    let tail = gauss_kronrod(g, split, cut, 1e-14 * head.value.abs().max(1e-300), 1e-13)
        .or_else(|_| gauss_kronrod(g, split, cut, 1e-12, 1e-11))?;
    Ok(head.value + tail.value)
}

pub const DEFAULT_INVERSION_ORDER: usize = 16;

/// Gaver-Stehfest weights V_1..V_N for even N.
pub fn stehfest_weights(order: usize) -> Vec<f64> {
    let half = order / 2;
    let fact = |n: usize| (1..=n).fold(1.0_f64, |a, k| a * k as f64);
    (1..=order)
        .map(|k| {
            let lo = k.div_ceil(2);
            let hi = k.min(half);
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += (j as f64).powi(half as i32) * fact(2 * j)
                    / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
            }
            let sign = if (k + half).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * acc
        })
        .collect()
}

fn stehfest<F: Fn(f64) -> f64>(big_f: &F, t: f64, order: usize) -> f64 {
    let a = LN_2 / t;
    stehfest_weights(order).iter().enumerate().map(|(i, v)| v * big_f(a * (i + 1) as f64)).sum::<f64>() * a
}

/// f(t) from its Laplace transform F, sampled only at real abscissae.
pub fn laplace_invert_numeric<F: Fn(f64) -> f64>(big_f: F, t: f64) -> Result<f64> {
    laplace_invert_numeric_with_order(big_f, t, DEFAULT_INVERSION_ORDER)
}

/// Gaver-Stehfest inversion of the given even order (≥ 6).
///
/// The result is compared with the two next lower orders. If the last step
/// moves the value by more than 2e-4 of its magnitude (or the step before by
/// more than 2e-3) the sequence is not settling and `InversionUnstable` is
/// returned.
pub fn laplace_invert_numeric_with_order<F: Fn(f64) -> f64>(big_f: F, t: f64, order: usize) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(FrackError::invalid(format!("inversion time must be positive, got {t}")));
    }
    if order < 6 || order % 2 == 1 || order > 20 {
        return Err(FrackError::invalid(format!("inversion order must be even and in [6, 20], got {order}")));
    }
    let main = stehfest(&big_f, t, order);
    let lower = stehfest(&big_f, t, order - 2);
    let lowest = stehfest(&big_f, t, order - 4);
    if !main.is_finite() {
        return Err(FrackError::InversionUnstable(format!("non-finite approximant at t = {t}")));
    }
    let scale = main.abs().max(1e-8);
    let last_step = (main - lower).abs();
    let step_before = (lower - lowest).abs();
    if last_step > 2e-4 * scale || step_before > 2e-3 * scale {
        return Err(FrackError::InversionUnstable(format!(
            "approximants of order {}, {}, {order} moved by {step_before:e} and {last_step:e} at t = {t}",
            order - 4,
            order - 2
        )));
    }
    Ok(main)
}

const COSINE_MAX_PANELS: usize = 2000;

/// (1/π)∫₀^∞ g(k) cos(kx) dk for absolutely integrable, eventually monotone g.
///
/// For x = 0 the half-line is mapped onto [0, 1) and integrated by tanh-sinh.
/// Otherwise the integral is split at the zeros of cos(kx) and the
/// alternating panel sums are accelerated with Wynn's epsilon algorithm.
pub fn cosine_quadrature<G: Fn(f64) -> f64>(g: G, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(FrackError::invalid("cosine transform needs a finite x"));
    }
    let x = x.abs();
    if x == 0.0 {
        // k = u/(1−u), dk = du/(1−u)²
        let mapped = |_: f64, u: f64, one_minus_u: f64| {
            let v = g(u / one_minus_u);
            if v == 0.0 {
                0.0
            } else {
                v / one_minus_u / one_minus_u
            }
        };
        let est = tanh_sinh_with_distances(mapped, 0.0, 1.0, 1e-13)?;
        return Ok(est.value / PI);
    }
    let integrand = |k: f64| g(k) * (k * x).cos();
    let period = PI / x;
    let mut partial = Vec::new();
    let mut total = 0.0;
    let mut a = 0.0;
    let mut b = 0.5 * period;
    let mut last_estimate = f64::NAN;
    let mut agree = 0;
    // g is typically known to about 1e-12, so the panel tolerance is tied
    // to the size of the integral so far
    let mut magnitude = (g(0.0) * 0.5 * period).abs();
    for panel in 0..COSINE_MAX_PANELS {
        let piece = gauss_kronrod(integrand, a, b, 1e-13 * magnitude.max(1e-300), 1e-11)?;
        magnitude = magnitude.max(piece.value.abs());
        total += piece.value;
        partial.push(total);
        let scale = total.abs().max(1e-300);
        if panel > 4 && piece.value.abs() <= 1e-16 * scale {
            return Ok(total / PI);
        }
        if partial.len() >= 8 {
            let window = &partial[partial.len().saturating_sub(40)..];
            let est = wynn_epsilon(window);
            if (est.value - last_estimate).abs() <= 1e-12 * est.value.abs().max(1e-300) && est.error <= 1e-11 * scale {
                agree += 1;
                if agree >= 2 {
                    return Ok(est.value / PI);
                }
            } else {
                agree = 0;
            }
            last_estimate = est.value;
        }
        a = b;
        b += period;
    }
    Err(FrackError::QuadratureFailure(format!(
        "cosine integral at x = {x} not converged after {COSINE_MAX_PANELS} panels"
    )))
}
