//! Metropolis-adjusted Langevin dynamics for the two-dimensional Coulomb gas.

use fhlab::potential::PotentialSpec;
use fhlab::sampler::{mala_chain, MalaOptions};
use fhlab::stats::{batch_means_stderr, mean};

fn main() -> fhlab::Result<()> {
    let n = 32;
    let opts = MalaOptions { burn_in: 5_000, ..Default::default() };
    let mut trace = Vec::new();
    let (last, summary) = mala_chain(&PotentialSpec::Ginibre, n, 25_000, 0.01, 3, opts, |_, z| {
        trace.push(z.iter().map(|p| p.norm_sqr()).sum::<f64>());
    })?;
    println!("acceptance {:.3}, tuned step {:.3e}", summary.acceptance_rate, summary.step_size);
    println!(
        "mean Σ|z|² = {:.3} ± {:.3} (exact (n+1)/2 = {})",
        mean(&trace),
        batch_means_stderr(&trace, 20),
        (n + 1) as f64 / 2.0
    );
    println!("final configuration has {} points", last.points.len());
    Ok(())
}
