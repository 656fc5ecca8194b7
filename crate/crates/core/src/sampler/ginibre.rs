use faer::{c64, Mat};
use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::{radial::RadialSampler, Method, Spectrum};
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::rng::{par_map, stream, Rng};

fn ginibre_points(n: usize, rng: &mut Rng) -> Result<Vec<Complex64>> {
    let s = (0.5 / n as f64).sqrt();
    let m = Mat::<c64>::from_fn(n, n, |_, _| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        c64::new(a * s, b * s)
    });
    let ev = m.eigenvalues().map_err(|_| Error::Eigensolver { n })?;
    if ev.len() != n || ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigensolver { n });
    }
    Ok(ev)
}

fn ginibre_at(n: usize, seed: u64, index: u64) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let points = ginibre_points(n, &mut stream(seed, index))?;
    Ok(Spectrum {
        points,
        potential: PotentialSpec::Ginibre,
        n,
        seed,
        stream: index,
        method: Method::GinibreDense,
        has_angles: true,
        acceptance_rate: None,
    })
}

/// Eigenvalues of an `n×n` matrix with independent complex Gaussian entries
/// of variance `1/n`.
pub fn sample_ginibre_spectrum(n: usize, seed: u64) -> Result<Spectrum> {
    ginibre_at(n, seed, 0)
}

/// `count` independent Ginibre spectra; sample `i` uses stream `i`.
pub fn ginibre_batch(n: usize, count: usize, seed: u64) -> Result<Vec<Spectrum>> {
    par_map(count, |i| ginibre_at(n, seed, i as u64)).into_iter().collect()
}

fn kostlan_at(n: usize, seed: u64, index: u64) -> Spectrum {
    let mut rng = stream(seed, index);
    let nf = n as f64;
    let points = (1..=n)
        .map(|j| {
            let g = Gamma::new(j as f64, 1.0).expect("positive shape").sample(&mut rng);
            Complex64::new((g / nf).sqrt(), 0.0)
        })
        .collect();
    Spectrum {
        points,
        potential: PotentialSpec::Ginibre,
        n,
        seed,
        stream: index,
        method: Method::KostlanModuli,
        has_angles: false,
        acceptance_rate: None,
    }
}

/// Ginibre moduli `√(Γ_j/n)`, `Γ_j ~ Gamma(j, 1)` independent.
pub fn sample_kostlan_moduli(n: usize, seed: u64) -> Spectrum {
    kostlan_at(n, seed, 0)
}

pub fn kostlan_batch(n: usize, count: usize, seed: u64) -> Vec<Spectrum> {
    par_map(count, |i| kostlan_at(n, seed, i as u64))
}

enum ModulusLaw {
    /// `V = a|z|^{2p}`: `n a r^{2p} ~ Gamma((k+1)/p)`.
    Monomial { p: usize, a: f64 },
    Grid(Vec<RadialSampler>),
}

fn modulus_law(potential: &PotentialSpec, n: usize) -> Result<ModulusLaw> {
    potential.validate()?;
    let c = potential
        .radial_coefficients()
        .ok_or_else(|| Error::Domain("radial moduli need a radial potential".into()))?;
    let nonzero: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0.0).collect();
    if let [i] = nonzero[..] {
        return Ok(ModulusLaw::Monomial { p: i + 1, a: c[i] });
    }
    Ok(ModulusLaw::Grid((0..n).map(|k| RadialSampler::new(&c, n, k)).collect::<Result<_>>()?))
}

fn radial_moduli_at(law: &ModulusLaw, potential: &PotentialSpec, n: usize, seed: u64, index: u64) -> Spectrum {
    let mut rng = stream(seed, index);
    let nf = n as f64;
    let points = (0..n)
        .map(|k| {
            let r = match law {
                ModulusLaw::Monomial { p, a } => {
                    let shape = (k + 1) as f64 / *p as f64;
                    let g = Gamma::new(shape, 1.0).expect("positive shape").sample(&mut rng);
                    (g / (nf * a)).powf(0.5 / *p as f64)
                }
                ModulusLaw::Grid(s) => s[k].sample(&mut rng),
            };
            Complex64::new(r, 0.0)
        })
        .collect();
    Spectrum {
        points,
        potential: potential.clone(),
        n,
        seed,
        stream: index,
        method: Method::KostlanModuli,
        has_angles: false,
        acceptance_rate: None,
    }
}

/// Moduli of the radial Coulomb gas: independent `r_k` with density
/// `∝ r^{2k+1} e^{-n v(r)}`, `k < n`. Monomial potentials use Gamma variates;
/// other radial potentials use [`RadialSampler`].
pub fn sample_radial_moduli(potential: &PotentialSpec, n: usize, seed: u64) -> Result<Spectrum> {
    let law = modulus_law(potential, n)?;
    Ok(radial_moduli_at(&law, potential, n, seed, 0))
}

pub fn radial_moduli_batch(potential: &PotentialSpec, n: usize, count: usize, seed: u64) -> Result<Vec<Spectrum>> {
    let law = modulus_law(potential, n)?;
    Ok(par_map(count, |i| radial_moduli_at(&law, potential, n, seed, i as u64)))
}
