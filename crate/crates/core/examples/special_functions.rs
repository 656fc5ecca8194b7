//! Barnes G and the exact vs asymptotic moment of |det M|^γ at the origin.

use fhlab::specfun::{log_barnes_g, log_gamma, origin_moment_asymptotic, origin_moment_exact};

fn main() -> fhlab::Result<()> {
    println!("ln G(3/2) = {:.15}", log_barnes_g(1.5)?);
    println!("ln Γ(1/2) = {:.15}  (ln √π = {:.15})", log_gamma(0.5)?, 0.5 * std::f64::consts::PI.ln());
    println!("{:>6} {:>5} {:>22} {:>22} {:>12}", "n", "γ", "ln E exact", "ln E asymptotic", "ratio - 1");
    for n in [10, 100, 1000, 10_000] {
        for gamma in [0.5, 1.0, 2.0] {
            let exact = origin_moment_exact(n, gamma)?.get();
            let asym = origin_moment_asymptotic(n, gamma)?.get();
            println!("{n:>6} {gamma:>5} {exact:>22.12} {asym:>22.12} {:>12.3e}", (exact - asym).exp_m1());
        }
    }
    Ok(())
}
