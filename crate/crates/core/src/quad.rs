//! Numerical quadrature: globally adaptive Gauss–Kronrod (7/15) on finite
//! intervals, Gauss–Legendre rules, and the periodic trapezoid rule.
//!
//! Two-dimensional integrals elsewhere in the crate are tensorized in polar
//! coordinates: adaptive in the radius, trapezoid (spectrally accurate for
//! smooth periodic integrands) or adaptive in the angle.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// Absolute and relative error targets; the routine stops once the estimated
/// error drops below `max(abs, rel * |integral|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub const fn rel(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    pub const fn abs(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
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
        self.err.total_cmp(&other.err)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        k += w * (f1 + f2);
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    let value = k * h;
    let err = ((k - g) * h).abs();
    Segment { a, b, value, err }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    integrate_breaks(f, &[a, b], tol)
}

/// Integrates over the consecutive intervals delimited by `points` (which
/// must be nondecreasing). Breakpoints should sit at known kinks or
/// singularities of the integrand.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let s = kronrod(&mut f, w[0], w[1]);
            total += s.value;
            total_err += s.err;
            heap.push(s);
        }
    }
    let mut count = heap.len();
    while total_err > tol.abs.max(tol.rel * total.abs()) {
        if !total.is_finite() {
            return Err(Error::Quadrature(format!(
                "non-finite integrand on [{}, {}]",
                points[0],
                points[points.len() - 1]
            )));
        }
        if count >= MAX_INTERVALS {
            // Accept when the residual error is dominated by rounding.
            if total_err <= 1e3 * tol.abs.max(tol.rel * total.abs()).max(1e-15 * total.abs()) {
                break;
            }
            return Err(Error::Quadrature(format!(
                "no convergence after {count} subintervals (estimate {total:.6e}, error {total_err:.3e})"
            )));
        }
        let worst = heap.pop().expect("heap is nonempty while error is positive");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            total_err -= worst.err;
            heap.push(Segment { err: 0.0, ..worst });
            continue;
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        count += 1;
    }
    // Re-sum to shed the drift from incremental updates.
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Periodic trapezoid rule for `∫_0^{2π} f(θ) dθ` with `m` equispaced nodes.
pub fn periodic_trapezoid<F: FnMut(f64) -> f64>(mut f: F, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    (0..m).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// `∫_0^{2π} f(θ) dθ` by the trapezoid rule, doubling the node count until
/// successive estimates agree to `tol`. Suited to smooth periodic integrands.
pub fn periodic_adaptive<F: FnMut(f64) -> f64>(mut f: F, tol: Tolerance) -> Result<f64> {
    let mut m = 16usize;
    let mut sum: f64 = (0..m).map(|i| f(2.0 * PI * i as f64 / m as f64)).sum();
    let mut est = sum * 2.0 * PI / m as f64;
    while m < 1 << 18 {
        let fresh: f64 = (0..m)
            .map(|i| f(2.0 * PI * (2 * i + 1) as f64 / (2 * m) as f64))
            .sum();
        sum += fresh;
        m *= 2;
        let next = sum * 2.0 * PI / m as f64;
        let floor = 64.0 * f64::EPSILON * next.abs();
        let done = (next - est).abs() <= tol.abs.max(tol.rel * next.abs()).max(floor);
        est = next;
        if done && m >= 64 {
            return Ok(est);
        }
    }
    Err(Error::Quadrature(format!("periodic trapezoid did not converge (estimate {est:.6e})")))
}

/// How the angular integral is performed inside [`polar_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularRule {
    /// Doubling trapezoid rule, for smooth integrands.
    Trapezoid,
    /// Adaptive Gauss–Kronrod, for integrands with angular kinks or
    /// integrable singularities.
    Adaptive,
}

/// `∫ f(z) dm(z)` over the annulus `r_points[0] ≤ |z - center| ≤ r_points[last]`,
/// in polar coordinates around `center`. Interior radii in `r_points` act as
/// breakpoints of the radial integral.
pub fn polar_integral<F: Fn(Complex64) -> f64>(
    f: F,
    center: Complex64,
    r_points: &[f64],
    rule: AngularRule,
    tol: Tolerance,
) -> Result<f64> {
    let mut failure = None;
    let r_max = r_points.last().copied().unwrap_or(0.0).max(1e-300);
    let inner_tol = Tolerance::new(tol.abs / (4.0 * PI * r_max), tol.rel * 0.1);
    let value = integrate_breaks(
        |r| {
            if r == 0.0 || failure.is_some() {
                return 0.0;
            }
            let g = |t: f64| f(center + Complex64::from_polar(r, t));
            let inner = match rule {
                AngularRule::Trapezoid => periodic_adaptive(g, inner_tol),
                AngularRule::Adaptive => integrate(g, 0.0, 2.0 * PI, inner_tol),
            };
            match inner {
                Ok(v) => v * r,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        r_points,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => value,
    }
}
