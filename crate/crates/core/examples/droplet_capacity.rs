//! Equilibrium droplets, logarithmic capacity by two routes, and the
//! Poisson–Jensen identity.

use num_complex::Complex64;

use fhlab::potential::{
    capacity, capacity_energy_estimate, equilibrium_droplet, poisson_jensen_residual, Droplet, PotentialSpec,
};

fn main() -> fhlab::Result<()> {
    for p in [PotentialSpec::Ginibre, PotentialSpec::monomial(2, 1.0), PotentialSpec::RadialEven { coefficients: vec![1.0, 0.5] }] {
        let (droplet, eq) = equilibrium_droplet(&p)?;
        println!(
            "{:?}: radius {:.12}, mass {:.12}, capacity ln {:.12}",
            p.radial_coefficients().unwrap_or_default(),
            eq.radius(),
            eq.total_mass()?,
            capacity(&droplet)
        );
    }
    let ellipse = Droplet::ellipse(2.0, 1.0)?;
    let energy = capacity_energy_estimate(&ellipse, 512)?;
    println!("ellipse (2,1): map {:.10}  energy {:.10}  exact ln 1.5 = {:.10}", capacity(&ellipse), energy, 1.5f64.ln());
    for z in [Complex64::new(0.0, 0.0), Complex64::new(1.2, 0.4)] {
        println!("Poisson–Jensen residual at {z}: {:.2e}", poisson_jensen_residual(&ellipse, z)?);
    }
    println!("{}", serde_json::to_string(&ellipse)?);
    Ok(())
}
