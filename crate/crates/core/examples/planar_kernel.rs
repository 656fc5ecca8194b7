//! Weighted planar orthogonal polynomial kernels: norms, reproducing
//! property, bulk approximation and off-diagonal decay.

use num_complex::Complex64;

use fhlab::kernel::{build_kernel, bulk_approx_eval, decay_profile, kernel_eval, reproducing_residual, write_norms_csv};
use fhlab::potential::PotentialSpec;

fn main() -> fhlab::Result<()> {
    let quartic = build_kernel(&PotentialSpec::monomial(2, 1.0), 64)?;
    let (z, w) = (Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.25));
    println!("|z|⁴, n=64: radius {:.6}, reproducing residual {:.2e}", quartic.radius(), reproducing_residual(&quartic, z, w)?);
    let mut csv = Vec::new();
    write_norms_csv(&mut csv, &quartic, None)?;
    for line in String::from_utf8_lossy(&csv).lines().take(5) {
        println!("  {line}");
    }

    let g = build_kernel(&PotentialSpec::Ginibre, 256)?;
    let exact = kernel_eval(&g, z, z + 0.05, true)?;
    let bulk = bulk_approx_eval(&g, z, z + 0.05);
    println!("Ginibre n=256: |K - K#|/n = {:.3e}", (exact - bulk).norm() / 256.0);
    let radii: Vec<f64> = (1..=8).map(|k| 0.03 * k as f64).collect();
    for (d, l) in decay_profile(&g, Complex64::new(0.0, 0.0), &radii)? {
        println!("  d = {d:.2}: ln|K| = {l:>9.4}, Gaussian -n d²/2 + ln(n/π) = {:>9.4}", -128.0 * d * d + (256.0 / std::f64::consts::PI).ln());
    }
    Ok(())
}
