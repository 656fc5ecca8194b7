//! Samplers for the β = 2 Coulomb gas with weight `e^{-nV}`.

mod dpp;
mod ginibre;
mod io;
mod mala;
mod radial;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::potential::PotentialSpec;

pub use dpp::{dpp_batch, sample_radial_dpp, DppSampler};
pub use ginibre::{
    ginibre_batch, kostlan_batch, radial_moduli_batch, sample_ginibre_spectrum, sample_kostlan_moduli,
    sample_radial_moduli,
};
pub use io::{read_batch, write_batch, write_spectrum_csv, SpectrumBatch};
pub use mala::{mala_chain, sample_coulomb_mala, MalaOptions, MalaSummary, DEFAULT_BURN_IN};
pub use radial::RadialSampler;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GinibreDense,
    KostlanModuli,
    RadialDpp,
    Mala,
}

impl Method {
    pub fn tag(self) -> u64 {
        match self {
            Method::GinibreDense => 0,
            Method::KostlanModuli => 1,
            Method::RadialDpp => 2,
            Method::Mala => 3,
        }
    }

    pub fn from_tag(tag: u64) -> Option<Self> {
        Some(match tag {
            0 => Method::GinibreDense,
            1 => Method::KostlanModuli,
            2 => Method::RadialDpp,
            3 => Method::Mala,
            _ => return None,
        })
    }
}

/// One configuration of `n` points.
///
/// When `has_angles` is false the points carry only moduli, stored as real
/// parts.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub points: Vec<Complex64>,
    pub potential: PotentialSpec,
    pub n: usize,
    pub seed: u64,
    /// Random stream under `seed` that produced this configuration.
    pub stream: u64,
    pub method: Method,
    pub has_angles: bool,
    /// Mean Metropolis acceptance after burn-in, for MCMC output.
    pub acceptance_rate: Option<f64>,
}

impl Spectrum {
    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|z| if self.has_angles { z.norm() } else { z.re })
    }

    /// `Σ |z_i|²`.
    pub fn sum_sq_moduli(&self) -> f64 {
        self.moduli().map(|r| r * r).sum()
    }

    /// `Σ ln |z_i - ζ|`; with moduli only, `ζ` must be 0.
    pub fn log_abs_char_poly(&self, zeta: Complex64) -> f64 {
        if self.has_angles {
            self.points.iter().map(|z| (z - zeta).norm().ln()).sum()
        } else {
            assert!(zeta == Complex64::new(0.0, 0.0), "moduli-only spectra support zeta = 0 only");
            self.points.iter().map(|z| z.re.ln()).sum()
        }
    }
}
