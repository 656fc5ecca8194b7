//! Gamma-family special functions and the exact and asymptotic moments of
//! `∏|z_k|^γ` for the Ginibre ensemble.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Natural logarithm of a positive quantity. Moments are passed around in
/// this form because factors like `e^{-nγ/2}` underflow for moderate `n`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogValue {
    pub log_magnitude: f64,
}

impl LogValue {
    pub fn new(log_magnitude: f64) -> Result<Self> {
        if log_magnitude.is_finite() {
            Ok(Self { log_magnitude })
        } else {
            Err(Error::Domain(format!("non-finite log value {log_magnitude}")))
        }
    }

    pub fn get(self) -> f64 {
        self.log_magnitude
    }

    /// The quantity itself; may underflow or overflow.
    pub fn exp(self) -> f64 {
        self.log_magnitude.exp()
    }
}

/// `ζ(k) - 1` for `k = 2..=40`, by Euler–Maclaurin summation.
fn zeta_minus_one() -> &'static [f64; 41] {
    static TABLE: OnceLock<[f64; 41]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; 41];
        let m = 16.0_f64;
        for (k, slot) in t.iter_mut().enumerate().skip(2) {
            let s = k as f64;
            let mut head = 0.0;
            for j in (2..16).rev() {
                head += (j as f64).powf(-s);
            }
            // Tail Σ_{j≥m} j^{-s} by Euler–Maclaurin.
            let base = m.powf(-s);
            let mut tail = m * base / (s - 1.0) + 0.5 * base;
            let bern = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
            let mut rising = s; // s (s+1) ... (s+2j-2)
            let mut fact = 2.0; // (2j)!
            let mut pow = base / m; // m^{-s-2j+1}
            for (j, b) in bern.iter().enumerate() {
                tail += b / fact * rising * pow;
                let j2 = 2.0 * (j as f64 + 1.0);
                rising *= (s + j2 - 1.0) * (s + j2);
                fact *= (j2 + 1.0) * (j2 + 2.0);
                pow /= m * m;
            }
            *slot = head + tail;
        }
        t
    })
}

/// `ln Γ(2 + z)` for `|z| ≤ 1/2`, from the Taylor series of `ln Γ(1 + z)`
/// with the `ln(1 + z)` singularity removed.
fn log_gamma_near_two(z: f64) -> f64 {
    let t = zeta_minus_one();
    let mut sum = 0.0;
    let mut zk = z * z;
    let mut sign = 1.0;
    for (k, c) in t.iter().enumerate().skip(2) {
        let term = sign * c / k as f64 * zk;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        zk *= z;
        sign = -sign;
    }
    z * (1.0 - EULER_GAMMA) + sum
}

fn stirling(x: f64) -> f64 {
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in C.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + 0.5 * LN_2PI + series * inv
}

fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 1.5 {
        // ln Γ(x) = ln Γ(x + 1) - ln x
        log_gamma_near_two(x - 1.0) - x.ln()
    } else if x <= 2.5 {
        log_gamma_near_two(x - 2.0)
    } else if x < 10.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.5 {
            y -= 1.0;
            prod *= y;
        }
        prod.ln() + log_gamma_near_two(y - 2.0)
    } else {
        stirling(x)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        if x < 0.5 {
            // Γ(x) = Γ(x + 1) / x keeps the series argument in range.
            return Ok(log_gamma_unchecked(x + 1.0) - x.ln());
        }
        Ok(log_gamma_unchecked(x))
    } else {
        Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")))
    }
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut y = x;
    let mut acc = 0.0;
    while y < 12.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let series = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    Ok(acc + y.ln() - 0.5 / y - series)
}

/// Trigamma `ψ'(x)` for `x > 0`.
pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("trigamma requires x > 0, got {x}")));
    }
    let mut y = x;
    let mut acc = 0.0;
    while y < 12.0 {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = 1.0
        + 0.5 * inv
        + inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)));
    Ok(acc + series * inv)
}

/// Asymptotic expansion of `ln G(z + 1)` without its constant term.
fn barnes_asymptotic(z: f64) -> f64 {
    // B_{2k+2} / (4k(k+1)) for k = 1..6
    const C: [f64; 6] = [
        -1.0 / 240.0,
        1.0 / 1008.0,
        -1.0 / 1440.0,
        1.0 / 1056.0,
        -691.0 / 327_600.0,
        1.0 / 144.0,
    ];
    let lz = z.ln();
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    for c in C.iter().rev() {
        series = series * inv2 + c;
    }
    z * z * (0.5 * lz - 0.75) + 0.5 * z * LN_2PI - lz / 12.0 + series * inv2
}

const BARNES_SHIFT: f64 = 20.0;

/// Constant term of the Barnes asymptotic expansion, fixed by requiring
/// `G(M) = ∏_{i=1}^{M-1} Γ(i)` at a large integer `M`.
pub fn barnes_constant() -> f64 {
    static CONST: OnceLock<f64> = OnceLock::new();
    *CONST.get_or_init(|| {
        let m = 40;
        let exact: f64 = (1..m).map(|i| log_gamma_unchecked(i as f64)).sum();
        exact - barnes_asymptotic((m - 1) as f64)
    })
}

/// `ln G(x)` for `x ≥ 1`, where `G` is the Barnes G-function.
pub fn log_barnes_g(x: f64) -> Result<f64> {
    if !(x >= 1.0 && x.is_finite()) {
        return Err(Error::Domain(format!("log_barnes_g requires x >= 1, got {x}")));
    }
    if x.fract() == 0.0 && x <= 2.0 * BARNES_SHIFT {
        // G(m) = ∏_{i<m} Γ(i) exactly.
        return Ok((1..x as usize).map(|i| log_gamma_unchecked(i as f64)).sum());
    }
    let mut y = x;
    let mut acc = 0.0;
    while y - 1.0 < BARNES_SHIFT {
        acc -= log_gamma_unchecked(y);
        y += 1.0;
    }
    Ok(acc + barnes_asymptotic(y - 1.0) + barnes_constant())
}

/// `ln E[∏_{k=1}^n |z_k|^γ]` for an `n × n` Ginibre matrix, exact at finite `n`.
pub fn origin_moment_exact(n: usize, gamma: f64) -> Result<LogValue> {
    if n == 0 || gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!(
            "origin_moment_exact requires n >= 1 and gamma >= 0, got n = {n}, gamma = {gamma}"
        )));
    }
    let half = 0.5 * gamma;
    let mut sum = 0.0;
    for j in 1..=n {
        let j = j as f64;
        sum += log_gamma_unchecked(j + half) - log_gamma_unchecked(j);
    }
    LogValue::new(sum - half * n as f64 * (n as f64).ln())
}

/// Large-`n` asymptotic of [`origin_moment_exact`].
pub fn origin_moment_asymptotic(n: usize, gamma: f64) -> Result<LogValue> {
    if n < 2 || gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!(
            "origin_moment_asymptotic requires n >= 2 and gamma >= 0, got n = {n}, gamma = {gamma}"
        )));
    }
    let nf = n as f64;
    LogValue::new(
        -0.5 * nf * gamma + gamma * gamma / 8.0 * nf.ln() + gamma / 4.0 * LN_2PI
            - log_barnes_g(1.0 + 0.5 * gamma)?,
    )
}

/// `(1/4) Σ_{j=1}^n ψ'(j)`: the exact variance of `Σ_k ln|z_k|` for Ginibre.
pub fn log_modulus_sum_variance(n: usize) -> f64 {
    // ψ'(j) = π²/6 - Σ_{k<j} 1/k², summed in closed form.
    let mut partial = 0.0;
    let mut total = 0.0;
    for j in 1..=n {
        total += PI * PI / 6.0 - partial;
        partial += 1.0 / (j * j) as f64;
    }
    0.25 * total
}

/// Exact mean of `Σ_k ln|z_k|` for Ginibre: `(1/2) Σ_j (ψ(j) - ln n)`.
pub fn log_modulus_sum_mean(n: usize) -> f64 {
    let mut psi = -EULER_GAMMA;
    let mut total = 0.0;
    for j in 1..=n {
        total += psi;
        psi += 1.0 / j as f64;
    }
    0.5 * (total - n as f64 * (n as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn log_gamma_at_simple_points() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-16);
        assert!(rel(log_gamma(0.5).unwrap(), 0.5 * PI.ln()) < 1e-14);
        assert!(rel(log_gamma(10.0).unwrap(), 362_880.0_f64.ln()) < 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.0).is_err());
    }

    #[test]
    fn log_gamma_matches_factorials() {
        let mut lf = 0.0_f64;
        for k in 1..170 {
            // lf = ln((k-1)!)
            let v = log_gamma(k as f64).unwrap();
            if k > 2 {
                assert!(rel(v, lf) < 1e-13, "k = {k}: {v} vs {lf}");
            }
            lf += (k as f64).ln();
        }
    }

    #[test]
    fn log_gamma_half_integers() {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        for k in 1..60u32 {
            let mut exact = 0.5 * PI.ln() - k as f64 * 4.0_f64.ln();
            for j in (k + 1)..=(2 * k) {
                exact += (j as f64).ln();
            }
            assert!(rel(log_gamma(k as f64 + 0.5).unwrap(), exact) < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn log_gamma_large_argument() {
        // ln Γ(1e6 + 1) - ln Γ(1e6) = ln 1e6
        let d = log_gamma(1e6 + 1.0).unwrap() - log_gamma(1e6).unwrap();
        assert!((d - 1e6_f64.ln()).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn gamma_recurrence(x in 0.5f64..500.0) {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }

        #[test]
        fn legendre_duplication(x in 0.5f64..100.0) {
            // Γ(x) Γ(x + 1/2) = 2^{1-2x} √π Γ(2x)
            let lhs = log_gamma(x).unwrap() + log_gamma(x + 0.5).unwrap();
            let rhs = (1.0 - 2.0 * x) * 2f64.ln() + 0.5 * PI.ln() + log_gamma(2.0 * x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn digamma_and_trigamma_at_integers() {
        let mut h = 0.0;
        let mut s2 = 0.0;
        for j in 1..50 {
            let jf = j as f64;
            assert!((digamma(jf).unwrap() - (h - EULER_GAMMA)).abs() < 1e-13);
            assert!((trigamma(jf).unwrap() - (PI * PI / 6.0 - s2)).abs() < 1e-13);
            h += 1.0 / jf;
            s2 += 1.0 / (jf * jf);
        }
        // ψ(1/2) = -γ - 2 ln 2, ψ'(1/2) = π²/2
        assert!((digamma(0.5).unwrap() + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-13);
        assert!((trigamma(0.5).unwrap() - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn barnes_g_at_integers() {
        assert!(log_barnes_g(1.0).unwrap().abs() < 1e-12);
        assert!(log_barnes_g(2.0).unwrap().abs() < 1e-12);
        assert!((log_barnes_g(4.0).unwrap() - 2f64.ln()).abs() < 1e-12);
        let mut lsf = 0.0;
        let mut lf = 0.0;
        for k in 1..=9 {
            lf += (k as f64).ln();
            lsf += lf;
        }
        assert!((log_barnes_g(11.0).unwrap() - lsf).abs() < 1e-11);
        assert!(log_barnes_g(0.5).is_err());
    }

    #[test]
    fn barnes_constant_is_zeta_prime_at_minus_one() {
        assert!((barnes_constant() + 0.165_421_143_700_450_9).abs() < 1e-12);
    }

    #[test]
    fn barnes_functional_equation() {
        for i in 0..=38 {
            let x = 1.0 + 0.5 * i as f64;
            let lhs = log_barnes_g(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + log_barnes_g(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn barnes_g_at_three_halves() {
        // G(1/2) = 2^{1/24} e^{3ζ'(-1)/2} π^{-1/4}, G(3/2) = Γ(1/2) G(1/2)
        let zp = -0.165_421_143_700_450_9;
        let lg_half = 2f64.ln() / 24.0 + 1.5 * zp - 0.25 * PI.ln();
        let expected = 0.5 * PI.ln() + lg_half;
        assert!((log_barnes_g(1.5).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn exact_moment_small_cases() {
        for n in [1, 5, 100] {
            assert_eq!(origin_moment_exact(n, 0.0).unwrap().get(), 0.0);
        }
        assert!(origin_moment_exact(1, 2.0).unwrap().get().abs() < 1e-15);
        assert!((origin_moment_exact(2, 2.0).unwrap().get() - 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn exact_moment_matches_barnes_quotient() {
        for &n in &[3usize, 20, 100] {
            for &g in &[0.5, 1.0, 2.0, 3.3] {
                let nf = n as f64;
                let barnes = -nf * g / 2.0 * nf.ln() + log_barnes_g(nf + 1.0 + g / 2.0).unwrap()
                    - log_barnes_g(nf + 1.0).unwrap()
                    - log_barnes_g(1.0 + g / 2.0).unwrap();
                let exact = origin_moment_exact(n, g).unwrap().get();
                assert!((barnes - exact).abs() < 1e-8, "n = {n}, gamma = {g}");
            }
        }
    }

    #[test]
    fn asymptotic_plug_in() {
        let v = origin_moment_asymptotic(100, 2.0).unwrap().get();
        let expected = -100.0 + 0.5 * 100f64.ln() + 0.5 * (2.0 * PI).ln();
        assert!((v - expected).abs() < 1e-12);
        assert_eq!(origin_moment_asymptotic(50, 0.0).unwrap().get(), 0.0);
    }

    #[test]
    fn exact_and_asymptotic_agree_at_rate_one_over_n() {
        for &g in &[0.5, 1.0, 2.0] {
            for &n in &[100usize, 300, 1000, 3000] {
                let d = origin_moment_exact(n, g).unwrap().get()
                    - origin_moment_asymptotic(n, g).unwrap().get();
                assert!(d.exp_m1().abs() <= 5.0 / n as f64, "n = {n}, gamma = {g}: {d}");
            }
        }
    }

    #[test]
    fn shifted_exact_moment_increases_with_n() {
        for &g in &[0.5, 1.0, 2.0] {
            let mut prev = f64::NEG_INFINITY;
            for n in 1..200 {
                let nf = n as f64;
                let v = origin_moment_exact(n, g).unwrap().get() + nf * g / 2.0 * nf.ln();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn log_modulus_moments_match_polygamma() {
        let n = 37;
        let var: f64 = (1..=n).map(|j| trigamma(j as f64).unwrap()).sum::<f64>() / 4.0;
        assert!((log_modulus_sum_variance(n) - var).abs() < 1e-12);
        let mean: f64 = (1..=n)
            .map(|j| 0.5 * (digamma(j as f64).unwrap() - (n as f64).ln()))
            .sum();
        assert!((log_modulus_sum_mean(n) - mean).abs() < 1e-11);
    }

    #[test]
    fn log_modulus_mean_is_derivative_of_moment() {
        // d/dγ ln E ∏|z|^γ at γ = 0 equals E Σ ln|z_k|.
        let n = 25;
        let h = 1e-5;
        let d = (origin_moment_exact(n, h).unwrap().get()
            - origin_moment_exact(n, 0.0).unwrap().get())
            / h;
        let d2 = (origin_moment_exact(n, 2.0 * h).unwrap().get()
            - origin_moment_exact(n, 0.0).unwrap().get())
            / (2.0 * h);
        assert!(((2.0 * d - d2) - log_modulus_sum_mean(n)).abs() < 1e-6);
    }
}
