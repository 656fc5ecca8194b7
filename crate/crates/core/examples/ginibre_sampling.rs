//! Ginibre spectra from dense matrices and from Kostlan's moduli, with CSV
//! and binary output.

use fhlab::sampler::{ginibre_batch, kostlan_batch, read_batch, write_batch, write_spectrum_csv};
use fhlab::stats::{ks_two_sample, ks_two_sample_critical, mean};

fn main() -> fhlab::Result<()> {
    let n = 64;
    let dense = ginibre_batch(n, 200, 1)?;
    let kostlan = kostlan_batch(n, 200, 2);
    let a: Vec<f64> = dense.iter().flat_map(|s| s.moduli()).collect();
    let b: Vec<f64> = kostlan.iter().flat_map(|s| s.moduli()).collect();
    println!("KS dense vs Kostlan moduli: {:.4} (5% critical {:.4})", ks_two_sample(&a, &b), ks_two_sample_critical(a.len(), b.len(), 0.05));
    let sq: Vec<f64> = dense.iter().map(|s| s.sum_sq_moduli()).collect();
    println!("mean Σ|z|² = {:.3}, expected (n+1)/2 = {}", mean(&sq), (n + 1) as f64 / 2.0);

    let dir = std::env::temp_dir();
    let csv = dir.join("ginibre_spectrum.csv");
    write_spectrum_csv(&mut std::fs::File::create(&csv)?, &dense[0], Some("ginibre n=64 seed=1"))?;
    let bin = dir.join("ginibre_batch.bin");
    write_batch(&mut std::fs::File::create(&bin)?, &dense)?;
    let back = read_batch(&mut std::fs::File::open(&bin)?)?;
    println!("wrote {} and {} ({} spectra, round trip exact: {})", csv.display(), bin.display(), back.spectra.len(), back.spectra[0] == dense[0].points);
    Ok(())
}
