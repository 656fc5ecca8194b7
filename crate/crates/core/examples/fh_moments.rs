//! Asymptotic joint moments E ∏|p_n(ζ_j)|^{γ_j} e^{Σ f(z_i)} compared with
//! Monte Carlo estimates.

use num_complex::Complex64;

use fhlab::moments::{fh_rhs_general, fh_rhs_ginibre, mc_moment, MomentQuery, Singularity};
use fhlab::potential::{PotentialSpec, TestFn};
use fhlab::sampler::{dpp_batch, ginibre_batch};

fn main() -> fhlab::Result<()> {
    let n = 64;
    let spectra = ginibre_batch(n, 2000, 1)?;
    let queries = [
        MomentQuery::single(Complex64::new(0.5, 0.0), 1.0, n),
        MomentQuery::new(
            vec![
                Singularity { zeta: Complex64::new(0.3, 0.0), gamma: 1.0 },
                Singularity { zeta: Complex64::new(-0.3, 0.0), gamma: 1.0 },
            ],
            TestFn::Zero,
            n,
        ),
        MomentQuery::new(vec![], TestFn::HarmonicRe { k: 1, amplitude: 0.5 }, n),
    ];
    for q in &queries {
        let rhs = fh_rhs_ginibre(q)?.get();
        let mc = mc_moment(&spectra, q)?;
        println!("Ginibre: ln rhs {rhs:>10.5}  ln mc {:>10.5} ± {:.4}  ratio {:.4}", mc.log_mean, mc.rel_stderr, (mc.log_mean - rhs).exp());
    }
    let quartic = PotentialSpec::monomial(2, 1.0);
    let q = MomentQuery::single(Complex64::new(0.4, 0.2), 1.0, 48);
    let rhs = fh_rhs_general(&quartic, &q)?.get();
    let mc = mc_moment(&dpp_batch(&quartic, 48, 1000, 2)?, &q)?;
    println!("|z|⁴:    ln rhs {rhs:>10.5}  ln mc {:>10.5} ± {:.4}", mc.log_mean, mc.rel_stderr);
    let near = MomentQuery::new(
        vec![Singularity { zeta: Complex64::new(0.0, 0.0), gamma: 1.0 }, Singularity { zeta: Complex64::new(0.01, 0.0), gamma: 1.0 }],
        TestFn::Zero,
        n,
    );
    println!("too-close singularities: {}", fh_rhs_ginibre(&near).unwrap_err());
    Ok(())
}
