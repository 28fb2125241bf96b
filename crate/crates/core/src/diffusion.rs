//! Green's function of the time-fractional diffusion equation
//! D^ν N = c^ν ∂²N/∂x², N(x, 0) = δ(x), and its Fourier-space form.
//!
//! With a = c^ν t^ν and r = |x|/√a,
//! N(x, t) = M_{ν/2}(r) / (2√a), where M_β is the M-Wright function, an
//! entire power series in r. The same value is the H-function
//! (4πa)^{−1/2} H^{2,0}_{1,2}[r²/4 | (1−ν/2,ν); (0,1),(1/2,1)].

use crate::error::{FrackError, Result};
use crate::hfunction::{self, instances, HFunctionSpec};
use crate::quadrature::gauss_kronrod;
use crate::special::gamma::ln_gamma_sign;
use crate::special::{ln_gamma, mittag_leffler, ml1, MLParams};
use crate::transforms::cosine_quadrature;
use serde::Serialize;
use std::f64::consts::PI;

/// Scaled argument X = |x|²/(4c^νt^ν) from which the asymptotic estimate applies.
pub const ASYMPTOTIC_THRESHOLD: f64 = 9.0;

/// Largest series term allowed relative to the sum before falling back to
/// contour quadrature; bounds the cancellation loss to about 3 digits.
const SERIES_CANCELLATION_LIMIT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionQuery {
    pub nu: f64,
    pub c_pow_nu: f64,
    pub x: f64,
    pub t: f64,
}

impl DiffusionQuery {
    pub fn new(nu: f64, c_pow_nu: f64, x: f64, t: f64) -> Result<Self> {
        check_parameters(nu, c_pow_nu, t)?;
        if !x.is_finite() {
            return Err(FrackError::invalid(format!("position must be finite, got {x}")));
        }
        Ok(DiffusionQuery { nu, c_pow_nu, x, t })
    }

    /// a = c^ν t^ν, the squared diffusion length.
    pub fn spread(&self) -> f64 {
        self.c_pow_nu * self.t.powf(self.nu)
    }

    /// r = |x|/√a.
    pub fn scaled_distance(&self) -> f64 {
        self.x.abs() / self.spread().sqrt()
    }

    /// X = |x|²/(4a), the H-function argument.
    pub fn scaled_argument(&self) -> f64 {
        let r = self.scaled_distance();
        0.25 * r * r
    }
}

fn check_parameters(nu: f64, c_pow_nu: f64, t: f64) -> Result<()> {
    if !(nu > 0.0 && nu < 2.0) {
        return Err(FrackError::invalid(format!("order nu must lie in (0, 2), got {nu}")));
    }
    if !(c_pow_nu > 0.0 && c_pow_nu.is_finite()) {
        return Err(FrackError::invalid(format!("diffusion constant must be positive, got {c_pow_nu}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(FrackError::invalid(format!("time must be positive, got {t}")));
    }
    Ok(())
}

/// M-Wright series Σ (−r)^n / (n! Γ(1 − β − βn)) with its largest term.
fn m_wright_series(beta: f64, r: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut max_term: f64 = 0.0;
    let ln_r = r.ln();
    let mut quiet = 0;
    for n in 0..4000 {
        let nf = n as f64;
        let (lg, sign) = ln_gamma_sign(1.0 - beta - beta * nf);
        // 1/Γ vanishes at the poles
        let term = if sign == 0.0 || (r == 0.0 && n > 0) {
            0.0
        } else {
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            let ln_power = if n == 0 { 0.0 } else { nf * ln_r };
            parity * sign * (ln_power - ln_gamma(nf + 1.0) - lg).exp()
        };
        let s = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - s) + term } else { (term - s) + sum };
        sum = s;
        max_term = max_term.max(term.abs());
        if nf > r && term.abs() <= 1e-17 * (sum + comp).abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else if term != 0.0 {
            quiet = 0;
        }
    }
    (sum + comp, max_term)
}

/// ln M_β(r) by contour quadrature of the propagator H-function.
fn m_wright_ln_contour(nu: f64, r: f64) -> Result<f64> {
    // M_β(r) = H^{2,0}_{1,2}[r²/4 | …] / √π
    let ln_x = 2.0 * r.ln() - 4f64.ln();
    let v = hfunction::evaluate_contour_ln(&instances::propagator(nu), ln_x).map_err(|e| {
        FrackError::non_convergence(format!("Green's function at r = {r} ({e})"), &["M-Wright series", "contour"])
    })?;
    if !(v.mantissa > 0.0) {
        return Err(FrackError::non_convergence(
            format!("Green's function at r = {r} (non-positive contour value)"),
            &["M-Wright series", "contour"],
        ));
    }
    Ok(v.ln_abs() - 0.5 * PI.ln())
}

/// Saddle-point exponent above which the contour may hand over to the
/// saddle-point form; there M_β < e^{−1000} and the form's log error is
/// below 1e-3 in absolute terms, shrinking like 1/Y.
pub const SADDLE_EXPONENT_MIN: f64 = 1e3;

/// Leading saddle-point form of ln M_β(r) and its exponent
/// Y = (1−β)/β·(βr)^{1/(1−β)}; exact for β = 1/2.
fn m_wright_saddle_ln(beta: f64, r: f64) -> (f64, f64) {
    let ln_br = (beta * r).ln();
    let y = (1.0 - beta) / beta * (ln_br / (1.0 - beta)).exp();
    let ln_m = -0.5 * (2.0 * PI * (1.0 - beta)).ln() + (beta - 0.5) / (1.0 - beta) * ln_br - y;
    (ln_m, y)
}

/// ln M_{ν/2}(r).
fn m_wright_ln(nu: f64, r: f64) -> Result<f64> {
    let (sum, max_term) = m_wright_series(0.5 * nu, r);
    if sum > 0.0 && max_term <= SERIES_CANCELLATION_LIMIT * sum {
        return Ok(sum.ln());
    }
    match m_wright_ln_contour(nu, r) {
        Ok(v) => Ok(v),
        Err(e) => {
            let (ln_m, y) = m_wright_saddle_ln(0.5 * nu, r);
            if y >= SADDLE_EXPONENT_MIN {
                Ok(ln_m)
            } else {
                Err(e)
            }
        }
    }
}

/// N(x, t). Underflows to 0 far in the tail; use [`green_function_ln`] there.
pub fn green_function(q: &DiffusionQuery) -> Result<f64> {
    let a = q.spread();
    let r = q.scaled_distance();
    let (sum, max_term) = m_wright_series(0.5 * q.nu, r);
    if sum > 0.0 && max_term <= SERIES_CANCELLATION_LIMIT * sum {
        return Ok(sum / (2.0 * a.sqrt()));
    }
    Ok(green_function_ln(q)?.exp())
}

/// ln N(x, t), finite for every in-range query.
pub fn green_function_ln(q: &DiffusionQuery) -> Result<f64> {
    let a = q.spread();
    Ok(m_wright_ln(q.nu, q.scaled_distance())? - (2.0 * a.sqrt()).ln())
}

/// N(x, t) for many positions at one time.
pub fn green_profile(nu: f64, c_pow_nu: f64, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter().map(|&x| green_function(&DiffusionQuery::new(nu, c_pow_nu, x, t)?)).collect()
}

/// One of the equivalent H-function forms of N(x, t) along the reduction chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PropagatorForm {
    /// |x|⁻¹ H^{2,1}_{3,3}[|x|²/a | (1,1),(1,ν),(1,1); (1,2),(1,1),(1,1)]
    CosineImage,
    /// |x|⁻¹ H^{2,0}_{2,2}[|x|²/a | (1,ν),(1,1); (1,2),(1,1)]
    Reduced,
    /// a^{−1/2} H^{2,0}_{2,2}[|x|²/a | (1−ν/2,ν),(1/2,1); (0,2),(1/2,1)]
    Shifted,
    /// a^{−1/2} H^{1,0}_{1,1}[|x|²/a | (1−ν/2,ν); (0,2)]
    Single,
    /// (4πa)^{−1/2} H^{2,0}_{1,2}[|x|²/(4a) | (1−ν/2,ν); (0,1),(1/2,1)]
    Duplicated,
}

impl PropagatorForm {
    pub const ALL: [PropagatorForm; 5] = [
        PropagatorForm::CosineImage,
        PropagatorForm::Reduced,
        PropagatorForm::Shifted,
        PropagatorForm::Single,
        PropagatorForm::Duplicated,
    ];

    pub fn spec(self, nu: f64) -> HFunctionSpec {
        match self {
            PropagatorForm::CosineImage => instances::propagator_cosine_image(nu),
            PropagatorForm::Reduced => instances::propagator_reduced(nu),
            PropagatorForm::Shifted => instances::propagator_shifted(nu),
            PropagatorForm::Single => instances::propagator_single(nu),
            PropagatorForm::Duplicated => instances::propagator(nu),
        }
    }
}

/// N(x, t) through the given H-function form; x ≠ 0.
pub fn green_function_via(form: PropagatorForm, q: &DiffusionQuery) -> Result<f64> {
    if q.x == 0.0 {
        return Err(FrackError::invalid("H-function forms need x != 0"));
    }
    let a = q.spread();
    let z = q.x * q.x / a;
    let spec = form.spec(q.nu);
    Ok(match form {
        PropagatorForm::CosineImage | PropagatorForm::Reduced => hfunction::evaluate(&spec, z)? / q.x.abs(),
        PropagatorForm::Shifted | PropagatorForm::Single => hfunction::evaluate(&spec, z)? / a.sqrt(),
        PropagatorForm::Duplicated => hfunction::evaluate(&spec, 0.25 * z)? / (4.0 * PI * a).sqrt(),
    })
}

/// N̂(k, t) = E_ν(−c^ν k² t^ν).
pub fn fourier_mode(nu: f64, c_pow_nu: f64, k: f64, t: f64) -> Result<f64> {
    check_parameters(nu, c_pow_nu, t)?;
    ml1(nu, -c_pow_nu * k * k * t.powf(nu))
}

/// N̂(k, t) through H^{1,1}_{1,2}[c^ν k² t^ν | (0,1); (0,1),(0,ν)].
pub fn fourier_mode_h(nu: f64, c_pow_nu: f64, k: f64, t: f64) -> Result<f64> {
    check_parameters(nu, c_pow_nu, t)?;
    let z = c_pow_nu * k * k * t.powf(nu);
    if z == 0.0 {
        return Ok(1.0);
    }
    hfunction::evaluate(&instances::mittag_leffler_one(nu), z)
}

/// s^{ν−1}/(s^ν + c^ν k²), the Laplace transform of [`fourier_mode`] in t.
pub fn laplace_fourier_mode(nu: f64, c_pow_nu: f64, k: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(FrackError::invalid(format!("Laplace abscissa must be positive, got {s}")));
    }
    Ok(s.powf(nu - 1.0) / (s.powf(nu) + c_pow_nu * k * k))
}

/// Exponent p of the algebraic prefactor |x|^p in the large-|x| estimate.
pub fn asymptotic_prefactor_exponent(nu: f64) -> f64 {
    (nu - 1.0) / (2.0 - nu)
}

/// ln of |x|^p·exp{−(2−ν)(|x|²ν^ν)^{1/(2−ν)}/(4c^νt^ν)^{1/(2−ν)}},
/// the large-distance envelope of N without its constant factor.
pub fn asymptotic_estimate_ln(q: &DiffusionQuery) -> Result<f64> {
    let big_x = q.scaled_argument();
    if !(big_x >= ASYMPTOTIC_THRESHOLD) {
        return Err(FrackError::OutOfAsymptoticRegime(format!(
            "|x|^2/(4 c^nu t^nu) = {big_x} is below {ASYMPTOTIC_THRESHOLD}"
        )));
    }
    let nu = q.nu;
    let inv = 1.0 / (2.0 - nu);
    let ax = q.x.abs();
    let exponent = (2.0 - nu) * ((ax * ax * nu.powf(nu)) / (4.0 * q.spread())).powf(inv);
    Ok(asymptotic_prefactor_exponent(nu) * ax.ln() - exponent)
}

/// The large-distance envelope itself; may underflow to 0.
pub fn asymptotic_estimate(q: &DiffusionQuery) -> Result<f64> {
    Ok(asymptotic_estimate_ln(q)?.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosineInversionReport {
    pub quadrature: f64,
    pub green: f64,
    pub deviation: f64,
}

/// (1/π)∫₀^∞ cos(kx) E_ν(−c^ν k² t^ν) dk against [`green_function`].
pub fn cosine_inversion_check(nu: f64, c_pow_nu: f64, x: f64, t: f64) -> Result<CosineInversionReport> {
    let q = DiffusionQuery::new(nu, c_pow_nu, x, t)?;
    let a = q.spread();
    let params = MLParams::one(nu)?;
    let failure = std::cell::Cell::new(None);
    // in the variable κ = k√a the integrand no longer depends on a
    let g = |kappa: f64| match mittag_leffler(params, -kappa * kappa) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let quadrature = cosine_quadrature(g, q.scaled_distance())? / a.sqrt();
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let green = green_function(&q)?;
    Ok(CosineInversionReport { quadrature, green, deviation: (quadrature - green).abs() / green.abs() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationReport {
    /// 2∫₀^L N dx on the sampled grid
    pub bulk: f64,
    /// 2∫_L^∞ N dx from the envelope matched at L
    pub tail: f64,
    pub total: f64,
    pub cutoff: f64,
    pub points: usize,
}

/// Scaled distance r at which the envelope exponent reaches 60 (N/N(0) near
/// e^{−60}), and never inside the pre-asymptotic zone.
pub fn tail_cutoff(nu: f64) -> f64 {
    let r = 2.0 * ((60.0 / (2.0 - nu)).powf(2.0 - nu) / nu.powf(nu)).sqrt();
    r.max(2.0 * ASYMPTOTIC_THRESHOLD.sqrt())
}

/// ∫N dx over the real line: composite Simpson on [0, L] (N is analytic in
/// |x| there) plus the envelope tail beyond L = [`tail_cutoff`]·√(c^νt^ν).
pub fn normalization(nu: f64, c_pow_nu: f64, t: f64, intervals: usize) -> Result<NormalizationReport> {
    check_parameters(nu, c_pow_nu, t)?;
    let sqrt_a = (c_pow_nu * t.powf(nu)).sqrt();
    let big_l = tail_cutoff(nu) * sqrt_a;
    let intervals = intervals + intervals % 2;
    if intervals < 2 {
        return Err(FrackError::GridTooCoarse { points: intervals + 1, required: 3 });
    }
    let xs: Vec<f64> = (0..=intervals).map(|j| big_l * j as f64 / intervals as f64).collect();
    let ys = green_profile(nu, c_pow_nu, t, &xs)?;
    let bulk = 2.0 * simpson(&ys, big_l / intervals as f64);
    let end = DiffusionQuery::new(nu, c_pow_nu, big_l, t)?;
    let ln_at_l = green_function_ln(&end)?;
    let env_at_l = asymptotic_estimate_ln(&end)?;
    let envelope = |x: f64| {
        DiffusionQuery::new(nu, c_pow_nu, x, t)
            .and_then(|q| asymptotic_estimate_ln(&q))
            .map(|v| (v - env_at_l + ln_at_l).exp())
            .unwrap_or(f64::NAN)
    };
    let tail_span = 40.0 * sqrt_a + big_l;
    let tail = 2.0 * gauss_kronrod(envelope, big_l, big_l + tail_span, 1e-300, 1e-10)?.value;
    Ok(NormalizationReport { bulk, tail, total: bulk + tail, cutoff: big_l, points: intervals + 1 })
}

fn simpson(ys: &[f64], h: f64) -> f64 {
    let n = ys.len() - 1;
    let mut s = ys[0] + ys[n];
    for (j, y) in ys.iter().enumerate().take(n).skip(1) {
        s += if j % 2 == 1 { 4.0 * y } else { 2.0 * y };
    }
    s * h / 3.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierConsistencyReport {
    pub k_values: Vec<f64>,
    pub transformed: Vec<f64>,
    pub expected: Vec<f64>,
    pub max_deviation: f64,
}

/// Cosine transform 2∫₀^L N(x, t) cos(kx) dx of gridded Green's function
/// values (Simpson weights) against E_ν(−c^ν k² t^ν), L as in [`normalization`].
pub fn fourier_consistency(
    nu: f64,
    c_pow_nu: f64,
    t: f64,
    k_values: &[f64],
    intervals: usize,
) -> Result<FourierConsistencyReport> {
    check_parameters(nu, c_pow_nu, t)?;
    let sqrt_a = (c_pow_nu * t.powf(nu)).sqrt();
    let big_l = tail_cutoff(nu) * sqrt_a;
    let intervals = (intervals + intervals % 2).max(2);
    let h = big_l / intervals as f64;
    let xs: Vec<f64> = (0..=intervals).map(|j| j as f64 * h).collect();
    let ys = green_profile(nu, c_pow_nu, t, &xs)?;
    let mut transformed = Vec::with_capacity(k_values.len());
    let mut expected = Vec::with_capacity(k_values.len());
    let mut max_deviation: f64 = 0.0;
    for &k in k_values {
        let weighted: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y * (k * x).cos()).collect();
        let v = 2.0 * simpson(&weighted, h);
        let e = fourier_mode(nu, c_pow_nu, k, t)?;
        max_deviation = max_deviation.max((v - e).abs());
        transformed.push(v);
        expected.push(e);
    }
    Ok(FourierConsistencyReport { k_values: k_values.to_vec(), transformed, expected, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saddle_form_tracks_contour() {
        // exact at β = 1/2
        let (l, _) = m_wright_saddle_ln(0.5, 7.0);
        assert!((l - (-49.0 / 4.0 - 0.5 * PI.ln())).abs() < 1e-13);
        // where both exist the gap shrinks like 1/Y
        for (nu, r) in [(1.2, 8.0), (1.5, 6.0), (1.688, 11.95)] {
            let (l, y) = m_wright_saddle_ln(0.5 * nu, r);
            let c = m_wright_ln_contour(nu, r).unwrap();
            assert!((l - c).abs() < 1.0 / y, "nu={nu} r={r}: {l} vs {c}, Y={y}");
        }
    }

    fn gaussian(x: f64, ct: f64) -> f64 {
        (-x * x / (4.0 * ct)).exp() / (4.0 * PI * ct).sqrt()
    }

    #[test]
    fn heat_kernel_examples() {
        let q = DiffusionQuery::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!((green_function(&q).unwrap() - 0.282_094_791_8).abs() < 1e-10);
        let q = DiffusionQuery::new(1.0, 1.0, 2.0, 1.0).unwrap();
        assert!((green_function(&q).unwrap() - 0.103_776_874_4).abs() < 1e-10);
        for &x in &[-5.0, -1.3, 0.7, 3.0, 5.0, 9.0] {
            let q = DiffusionQuery::new(1.0, 0.8, x, 1.7).unwrap();
            let g = gaussian(x, 0.8 * 1.7);
            assert!((green_function(&q).unwrap() - g).abs() < 1e-12 * g.max(1e-3), "x={x}");
        }
    }

    #[test]
    fn symmetric_in_x() {
        for &nu in &[0.5, 1.3] {
            let a = green_function(&DiffusionQuery::new(nu, 1.0, 1.7, 0.9).unwrap()).unwrap();
            let b = green_function(&DiffusionQuery::new(nu, 1.0, -1.7, 0.9).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn series_and_contour_agree() {
        for &nu in &[0.5, 0.8, 1.2, 1.5] {
            for &r in &[0.5, 2.0, 4.0] {
                let (s, max_term) = m_wright_series(0.5 * nu, r);
                if max_term > SERIES_CANCELLATION_LIMIT * s {
                    continue;
                }
                let c = m_wright_ln_contour(nu, r).unwrap().exp();
                assert!((s - c).abs() < 1e-9 * s, "nu={nu} r={r}: {s} vs {c}");
            }
        }
    }

    #[test]
    fn reduction_chain_forms_agree() {
        let q = DiffusionQuery::new(0.8, 1.1, 1.4, 0.7).unwrap();
        let g = green_function(&q).unwrap();
        for form in PropagatorForm::ALL {
            let v = green_function_via(form, &q).unwrap();
            assert!((v - g).abs() < 1e-9 * g, "{form:?}: {v} vs {g}");
        }
    }

    #[test]
    fn fourier_mode_examples() {
        assert_eq!(fourier_mode(0.7, 1.0, 0.0, 2.0).unwrap(), 1.0);
        assert!((fourier_mode(1.0, 1.0, 2.0, 0.5).unwrap() - (-2f64).exp()).abs() < 1e-14);
        assert!((fourier_mode(0.5, 1.0, 1.0, 1.0).unwrap() - 0.427_583_576_2).abs() < 1e-10);
        let h = fourier_mode_h(0.7, 1.0, 1.3, 2.0).unwrap();
        assert!((h - fourier_mode(0.7, 1.0, 1.3, 2.0).unwrap()).abs() < 1e-9);
        assert!((laplace_fourier_mode(1.0, 1.0, 1.0, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((laplace_fourier_mode(0.6, 1.0, 0.0, 4.0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gaussian_envelope_is_exact() {
        for &x in &[6.0, 8.0, 11.0] {
            let q = DiffusionQuery::new(1.0, 1.0, x, 1.0).unwrap();
            let diff = green_function_ln(&q).unwrap() - asymptotic_estimate_ln(&q).unwrap();
            assert!((diff + (4.0 * PI).sqrt().ln()).abs() < 1e-9, "{diff}");
        }
        let q = DiffusionQuery::new(0.5, 1.0, 2.0, 1.0).unwrap();
        assert!(matches!(asymptotic_estimate(&q), Err(FrackError::OutOfAsymptoticRegime(_))));
    }

    #[test]
    fn cosine_inversion_gaussian() {
        let r = cosine_inversion_check(1.0, 1.0, 1.5, 1.0).unwrap();
        assert!(r.deviation < 1e-8, "{r:?}");
    }
}
