//! Logarithmic potential theory for the confining potentials: equilibrium
//! measures, droplets, capacity, harmonic measure, harmonic extensions,
//! Neumann jumps and mollified logarithms.

mod brownian;
mod droplet;
mod harmonic;
mod mollify;
mod testfn;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use brownian::{brownian_hitting_estimate, BoundaryIndex, HittingSample, HISTOGRAM_BINS};
pub use droplet::{
    capacity, capacity_energy_estimate, equilibrium_droplet, harmonic_measure_arclength_density,
    harmonic_measure_density, poisson_jensen_residual, Droplet, DropletShape, EquilibriumMeasure,
};
pub use harmonic::{
    fourier_coefficients, h_half_norm, neumann_jump, neumann_jump_radial, FourierData,
    HarmonicExtension, K_MAX,
};
pub use mollify::{bump, mollified_log, mollifier_log_constant, MollifierParams};
pub use testfn::TestFn;

/// Analytic description of a potential not covered by the radial family.
pub struct CustomPotential {
    pub value: Box<dyn Fn(Complex64) -> f64 + Send + Sync>,
    /// `∂V = (V_x - i V_y) / 2`.
    pub partial: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub laplacian: Box<dyn Fn(Complex64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomPotential")
    }
}

/// External potential `V`.
///
/// `RadialEven { coefficients }` stores `a_1, …, a_K` of
/// `V(z) = Σ_k a_k |z|^{2k}`; `Ginibre` is the case `V = |z|²`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Ginibre,
    RadialEven {
        coefficients: Vec<f64>,
    },
    #[serde(skip)]
    Custom(Arc<CustomPotential>),
}

impl PartialEq for PotentialSpec {
    fn eq(&self, other: &Self) -> bool {
        match (self.radial_coefficients(), other.radial_coefficients()) {
            (Some(a), Some(b)) => a == b,
            _ => match (self, other) {
                (PotentialSpec::Custom(a), PotentialSpec::Custom(b)) => Arc::ptr_eq(a, b),
                _ => false,
            },
        }
    }
}

impl PotentialSpec {
    /// `V = |z|^{2p}` scaled by `a`.
    pub fn monomial(p: usize, a: f64) -> Self {
        let mut c = vec![0.0; p];
        c[p - 1] = a;
        PotentialSpec::RadialEven { coefficients: c }
    }

    /// `a_1, …, a_K` for radial potentials.
    pub fn radial_coefficients(&self) -> Option<Vec<f64>> {
        match self {
            PotentialSpec::Ginibre => Some(vec![1.0]),
            PotentialSpec::RadialEven { coefficients } => Some(coefficients.clone()),
            PotentialSpec::Custom(_) => None,
        }
    }

    pub fn is_ginibre(&self) -> bool {
        match self.radial_coefficients() {
            Some(c) => c.len() == 1 && c[0] == 1.0,
            None => false,
        }
    }

    /// Checks the structural assumptions that can be verified without a
    /// droplet: a nonempty coefficient list with positive leading term.
    pub fn validate(&self) -> Result<()> {
        if let PotentialSpec::RadialEven { coefficients } = self {
            match coefficients.iter().rposition(|&a| a != 0.0) {
                Some(i) if coefficients[i] > 0.0 && coefficients.iter().all(|a| a.is_finite()) => {}
                _ => {
                    return Err(Error::Domain(format!(
                        "radial potential needs finite coefficients with a positive leading term, got {coefficients:?}"
                    )))
                }
            }
        }
        Ok(())
    }

    /// `v(r)` for radial potentials.
    pub fn radial_value(coefficients: &[f64], r: f64) -> f64 {
        let s = r * r;
        let mut acc = 0.0;
        for a in coefficients.iter().rev() {
            acc = (acc + a) * s;
        }
        acc
    }

    pub fn value(&self, z: Complex64) -> f64 {
        match self {
            PotentialSpec::Ginibre => z.norm_sqr(),
            PotentialSpec::RadialEven { coefficients } => {
                Self::radial_value(coefficients, z.norm())
            }
            PotentialSpec::Custom(c) => (c.value)(z),
        }
    }

    /// `∂V(z)`; for radial potentials `z̄ Σ k a_k |z|^{2(k-1)}`.
    pub fn partial(&self, z: Complex64) -> Complex64 {
        match self {
            PotentialSpec::Ginibre => z.conj(),
            PotentialSpec::RadialEven { coefficients } => {
                let s = z.norm_sqr();
                let mut acc = 0.0;
                for (i, a) in coefficients.iter().enumerate().rev() {
                    acc = acc * s + (i + 1) as f64 * a;
                }
                z.conj() * acc
            }
            PotentialSpec::Custom(c) => (c.partial)(z),
        }
    }

    /// `ΔV(z)`; for radial potentials `4 Σ k² a_k |z|^{2(k-1)}`.
    pub fn laplacian(&self, z: Complex64) -> f64 {
        match self {
            PotentialSpec::Ginibre => 4.0,
            PotentialSpec::RadialEven { coefficients } => {
                Self::radial_laplacian(coefficients, z.norm())
            }
            PotentialSpec::Custom(c) => (c.laplacian)(z),
        }
    }

    pub fn radial_laplacian(coefficients: &[f64], r: f64) -> f64 {
        let s = r * r;
        let mut acc = 0.0;
        for (i, a) in coefficients.iter().enumerate().rev() {
            let k = (i + 1) as f64;
            acc = acc * s + k * k * a;
        }
        4.0 * acc
    }

    /// `L = ln(ΔV / 4)`.
    pub fn log_density_factor(&self, z: Complex64) -> f64 {
        (self.laplacian(z) / 4.0).ln()
    }

    /// Polarization `V(z, u)` of a radial potential: holomorphic in `z` and
    /// `u` with `V(z, z̄) = V(z)`.
    pub fn polarized(&self, z: Complex64, u: Complex64) -> Option<Complex64> {
        let c = self.radial_coefficients()?;
        let p = z * u;
        let mut acc = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            acc = (acc + a) * p;
        }
        Some(acc)
    }

    /// `∂₁∂₂V(z, u)` of the polarization.
    pub fn polarized_mixed(&self, z: Complex64, u: Complex64) -> Option<Complex64> {
        let c = self.radial_coefficients()?;
        let p = z * u;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in c.iter().enumerate().rev() {
            let k = (i + 1) as f64;
            acc = acc * p + k * k * a;
        }
        Some(acc)
    }
}
