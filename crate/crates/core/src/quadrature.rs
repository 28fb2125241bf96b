//! Numerical integration building blocks: double-exponential (tanh-sinh)
//! quadrature for endpoint singularities, adaptive Gauss-Kronrod for smooth
//! integrands and Wynn's epsilon algorithm for slowly converging sums.

use crate::error::{FrackError, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const TS_MAX_LEVEL: usize = 10;
const TS_T_MAX: f64 = 6.5;

/// ∫_a^b f by tanh-sinh quadrature.
///
/// `f` receives the abscissa together with its distances to `a` and `b`,
/// computed without cancellation so integrands like (x−a)^{−1/2} keep full
/// precision near the endpoint. Converged when successive levels differ by
/// at most `rel_tol` times the L1 mass.
pub fn tanh_sinh_with_distances<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Estimate>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(FrackError::QuadratureFailure(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let half = 0.5 * (b - a);
    // Contribution of one node t (weight includes the Jacobian).
    let node = |t: f64| -> Result<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu) * half;
        // distance to the nearer endpoint: (b−a)/(1+e^{2|u|})
        let d = (b - a) / (1.0 + (2.0 * u.abs()).exp());
        if d == 0.0 || w == 0.0 {
            return Ok((0.0, 0.0));
        }
        let (x, dl, dr) = if t >= 0.0 { (b - d, b - a - d, d) } else { (a + d, d, b - a - d) };
        let v = f(x, dl, dr);
        if !v.is_finite() {
            return Err(FrackError::QuadratureFailure(format!("integrand not finite at {x}")));
        }
        Ok((w * v, (w * v).abs()))
    };

    let mut h = 1.0;
    let (mut sum, mut l1) = node(0.0)?;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > TS_T_MAX {
            break;
        }
        let (p, pa) = node(t)?;
        let (m, ma) = node(-t)?;
        sum += p + m;
        l1 += pa + ma;
        k += 1;
    }
    let mut prev = sum * h;
    for _level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        // only odd multiples of the new step are new nodes
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > TS_T_MAX {
                break;
            }
            let (p, pa) = node(t)?;
            let (m, ma) = node(-t)?;
            sum += p + m;
            l1 += pa + ma;
            k += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).abs();
        if err <= rel_tol * (l1 * h) || err == 0.0 {
            return Ok(Estimate { value: cur, error: err });
        }
        prev = cur;
    }
    Err(FrackError::QuadratureFailure(format!(
        "tanh-sinh did not reach relative tolerance {rel_tol} on [{a}, {b}]"
    )))
}

/// ∫_a^b f by tanh-sinh quadrature.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Estimate> {
    // nodes that round onto an endpoint carry negligible weight
    tanh_sinh_with_distances(|x, _, _| if x <= a || x >= b { 0.0 } else { f(x) }, a, b, rel_tol)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Estimate> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    if !kron.is_finite() {
        return Err(FrackError::QuadratureFailure(format!("integrand not finite on [{a}, {b}]")));
    }
    Ok(Estimate { value: kron * h, error: ((kron - gauss) * h).abs() })
}

struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate> {
    const MAX_SEGMENTS: usize = 4000;
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let first = gk15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, est: first });
    let mut total = first.value;
    let mut err = first.error;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(FrackError::QuadratureFailure(format!(
                "Gauss-Kronrod exhausted {MAX_SEGMENTS} segments on [{a}, {b}] (error {err:e})"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(FrackError::QuadratureFailure(format!("segment collapsed near {mid}")));
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        total += left.value + right.value - worst.est.value;
        err += left.error + right.error - worst.est.error;
        heap.push(Segment { a: worst.a, b: mid, est: left });
        heap.push(Segment { a: mid, b: worst.b, est: right });
    }
    // recompute to shed accumulated rounding from the running updates
    let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.est.value, e + s.est.error));
    Ok(Estimate { value, error })
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the last entry of the highest even column together with the
/// difference to its predecessor in that column as an error indicator.
pub fn wynn_epsilon(partial_sums: &[f64]) -> Estimate {
    let n = partial_sums.len();
    if n == 0 {
        return Estimate { value: 0.0, error: f64::INFINITY };
    }
    if n < 3 {
        let last = partial_sums[n - 1];
        let err = if n == 2 { (last - partial_sums[0]).abs() } else { f64::INFINITY };
        return Estimate { value: last, error: err };
    }
    // columns[k][j] = ε_k^{(j)}
    let mut prev_col: Vec<f64> = vec![0.0; n + 1];
    let mut col: Vec<f64> = partial_sums.to_vec();
    let mut best = Estimate { value: partial_sums[n - 1], error: (partial_sums[n - 1] - partial_sums[n - 2]).abs() };
    let mut k = 0;
    while col.len() > 1 {
        let mut next = Vec::with_capacity(col.len() - 1);
        for j in 0..col.len() - 1 {
            let d = col[j + 1] - col[j];
            let base = prev_col[j + 1];
            next.push(if d == 0.0 { f64::INFINITY } else { base + 1.0 / d });
        }
        prev_col = col;
        col = next;
        k += 1;
        if k % 2 == 0 && col.len() >= 2 {
            let last = col[col.len() - 1];
            let before = col[col.len() - 2];
            if last.is_finite() && before.is_finite() {
                let err = (last - before).abs();
                if err <= best.error {
                    best = Estimate { value: last, error: err };
                }
            } else {
                break;
            }
        }
    }
    best
}
