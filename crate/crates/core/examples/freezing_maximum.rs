//! Free energy, thick points and the maximum of X_n over a compact set.

use num_complex::Complex64;

use fhlab::field::{eval_field, field_max_stat, free_energy_stat, freezing_limit, thick_points, Centering, GridGeometry};
use fhlab::potential::PotentialSpec;
use fhlab::sampler::ginibre_batch;
use fhlab::stats::median;

fn main() -> fhlab::Result<()> {
    let n = 512;
    let grid = GridGeometry::square(Complex64::new(0.0, 0.0), 0.6, 128);
    let centering = Centering::analytic(&PotentialSpec::Ginibre, &grid, n)?;
    let fields = ginibre_batch(n, 12, 8)?
        .iter()
        .map(|s| eval_field(s, &grid, &centering))
        .collect::<fhlab::Result<Vec<_>>>()?;
    for gamma in [0.5, 1.0, 2.0, 4.0] {
        let v = fields.iter().map(|f| free_energy_stat(f, gamma)).collect::<fhlab::Result<Vec<_>>>()?;
        println!("γ = {gamma}: median free energy {:.3}, limit {:.3}", median(&v), freezing_limit(gamma));
    }
    let area = fields.iter().map(|f| thick_points(f, 0.4)).collect::<fhlab::Result<Vec<_>>>()?;
    println!("median area of {{X ≥ 0.4 ln n}}: {:.4} of {:.4}", median(&area), grid.area());
    let max: Vec<f64> = fields.iter().map(field_max_stat).collect();
    println!("median max X / ln n = {:.3} (limit 1/√2)", median(&max));
    Ok(())
}
