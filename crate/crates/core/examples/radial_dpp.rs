//! Exact determinantal sampling for V = |z|⁴ against independent radial
//! moduli.

use fhlab::potential::PotentialSpec;
use fhlab::sampler::{dpp_batch, radial_moduli_batch};
use fhlab::stats::ks_two_sample;

fn main() -> fhlab::Result<()> {
    let p = PotentialSpec::monomial(2, 1.0);
    let n = 32;
    let dpp = dpp_batch(&p, n, 300, 1)?;
    let moduli = radial_moduli_batch(&p, n, 300, 2)?;
    let a: Vec<f64> = dpp.iter().flat_map(|s| s.moduli()).collect();
    let b: Vec<f64> = moduli.iter().flat_map(|s| s.moduli()).collect();
    println!("KS(DPP moduli, radial moduli) = {:.4}", ks_two_sample(&a, &b));
    let r2: f64 = dpp.iter().map(|s| s.points.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>() / dpp.len() as f64;
    println!("mean Σ|z|² over {} configurations: {r2:.4}", dpp.len());
    for z in dpp[0].points.iter().take(5) {
        println!("  {:+.6} {:+.6}i", z.re, z.im);
    }
    Ok(())
}
