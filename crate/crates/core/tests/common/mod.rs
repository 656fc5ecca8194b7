#![allow(dead_code)]

use std::f64::consts::PI;

/// ln Γ(x) for x > 0: shift above 15, then the Stirling series.
pub fn ln_gamma(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 15.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// ln E ∏|z_k|^γ for Ginibre, from |z_k|² ~ Gamma(k, 1)/n independent.
pub fn ginibre_origin_moment(n: usize, gamma: f64) -> f64 {
    let h = 0.5 * gamma;
    (1..=n).map(|k| ln_gamma(k as f64 + h) - ln_gamma(k as f64) - h * (n as f64).ln()).sum()
}

/// Var Σ ln|z_k| = (1/4) Σ_k ψ'(k) = (1/4)(H_n + n (π²/6 - H_n^(2))).
pub fn log_modulus_variance(n: usize) -> f64 {
    let h1: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    let h2: f64 = (1..=n).rev().map(|k| 1.0 / (k * k) as f64).sum();
    0.25 * (h1 + n as f64 * (PI * PI / 6.0 - h2))
}

/// ∬_{A×A} (e^{a s} |z - w|^{-a} - 1) over a square of side `l`, with the
/// radial integral done in closed form and the angular one by Simpson.
pub fn square_chaos_variance(l: f64, a: f64, s: f64) -> f64 {
    let inner = |t: f64| {
        let (c, sn) = (t.cos(), t.sin());
        let r = l / c;
        l * l * r.powf(2.0 - a) / (2.0 - a) - l * (c + sn) * r.powf(3.0 - a) / (3.0 - a)
            + c * sn * r.powf(4.0 - a) / (4.0 - a)
    };
    let m = 2000;
    let h = PI / 4.0 / m as f64;
    let mut acc = inner(0.0) + inner(PI / 4.0);
    for i in 1..m {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * inner(i as f64 * h);
    }
    8.0 * (a * s).exp() * acc * h / 3.0 - l.powi(4)
}

/// Written to the process stdout directly so the line shows even when the
/// test harness captures output.
pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    use std::io::Write;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stdout().lock(), "[{id:>2}] {verdict} {name}: {detail}");
}
