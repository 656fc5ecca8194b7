//! Log-correlated fluctuations of ln|p_n| and the variance of smooth linear
//! statistics.

use num_complex::Complex64;

use fhlab::field::clt_covariance;
use fhlab::moments::linear_stat_variance_prediction;
use fhlab::potential::TestFn;
use fhlab::sampler::{ginibre_batch, kostlan_batch};
use fhlab::specfun::log_modulus_sum_variance;
use fhlab::stats::variance;

fn main() -> fhlab::Result<()> {
    let n = 1024;
    let moduli = kostlan_batch(n, 4000, 1);
    let v: Vec<f64> = moduli.iter().map(|s| s.log_abs_char_poly(Complex64::new(0.0, 0.0))).collect();
    println!(
        "n={n}: 4 Var ln|p(0)| / ln n = {:.4}, exact finite-n value {:.4}",
        4.0 * variance(&v) / (n as f64).ln(),
        4.0 * log_modulus_sum_variance(n) / (n as f64).ln()
    );

    let n = 128;
    let spectra = ginibre_batch(n, 600, 2)?;
    let zetas = [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.5)];
    let cov = clt_covariance(&spectra, &zetas)?;
    for (e, p) in cov.empirical.iter().zip(&cov.predicted) {
        println!("  empirical {e:.3?}  predicted {p:.3?}");
    }
    let f = TestFn::HarmonicRe { k: 2, amplitude: 1.0 };
    let stats: Vec<f64> = spectra.iter().map(|s| s.points.iter().map(|z| f.value(*z)).sum()).collect();
    println!("Var Σ Re z² = {:.4}, predicted {:.4}", variance(&stats), linear_stat_variance_prediction(&f)?);
    Ok(())
}
