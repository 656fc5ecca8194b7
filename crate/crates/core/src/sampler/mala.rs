use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::{Method, Spectrum};
use crate::error::{Error, Result};
use crate::potential::{equilibrium_droplet, PotentialSpec};
use crate::rng::{stream, Rng};

/// Default number of adaptation sweeps before samples are kept.
pub const DEFAULT_BURN_IN: usize = 50_000;

#[derive(Debug, Clone, Copy)]
pub struct MalaOptions {
    /// Sweeps spent tuning the step size; nothing is observed before this.
    pub burn_in: usize,
    /// Acceptance rate the step size is tuned toward during burn-in.
    pub target_acceptance: f64,
}

impl Default for MalaOptions {
    fn default() -> Self {
        Self { burn_in: DEFAULT_BURN_IN, target_acceptance: 0.574 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MalaSummary {
    /// Acceptance rate over the sweeps after burn-in.
    pub acceptance_rate: f64,
    /// Step size after tuning.
    pub step_size: f64,
}

struct Chain<'a> {
    potential: &'a PotentialSpec,
    z: Vec<Complex64>,
    n: f64,
}

impl Chain<'_> {
    /// `∇H` at position `x` for particle `j`, packed as `∂_x H + i ∂_y H`,
    /// with `H = -Σ_{j<k} ln|z_j - z_k|² + n Σ V(z_j)`.
    fn gradient(&self, j: usize, x: Complex64) -> Complex64 {
        let mut g = Complex64::new(0.0, 0.0);
        for (k, zk) in self.z.iter().enumerate() {
            if k != j {
                g -= 2.0 / (x - zk).conj();
            }
        }
        g + 2.0 * self.n * self.potential.partial(x).conj()
    }

    /// `H(z with z_j = y) - H(z)`.
    fn delta_energy(&self, j: usize, y: Complex64) -> f64 {
        let x = self.z[j];
        let mut log_ratio = 0.0;
        let mut prod = 1.0;
        for (k, zk) in self.z.iter().enumerate() {
            if k == j {
                continue;
            }
            prod *= (y - zk).norm_sqr() / (x - zk).norm_sqr();
            if k % 16 == 15 {
                log_ratio += prod.ln();
                prod = 1.0;
            }
        }
        log_ratio += prod.ln();
        -log_ratio + self.n * (self.potential.value(y) - self.potential.value(x))
    }
}

fn initial_radius(potential: &PotentialSpec) -> f64 {
    equilibrium_droplet(potential).map(|(_, eq)| eq.radius()).unwrap_or(1.0)
}

/// Runs a single-particle Metropolis-adjusted Langevin chain targeting
/// `∏_{j<k} |z_j - z_k|² ∏_j e^{-nV(z_j)}`. A sweep proposes a move for each
/// particle in turn. During the first `burn_in` sweeps the step size is tuned
/// by a Robbins–Monro update of its logarithm; afterwards it is frozen and
/// `observe(sweep, points)` is called after every sweep.
pub fn mala_chain<F: FnMut(usize, &[Complex64])>(
    potential: &PotentialSpec,
    n: usize,
    steps: usize,
    step_size: f64,
    seed: u64,
    options: MalaOptions,
    mut observe: F,
) -> Result<(Spectrum, MalaSummary)> {
    if !(step_size > 0.0 && step_size.is_finite()) {
        return Err(Error::Domain(format!("step size must be positive, got {step_size}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if steps < options.burn_in {
        return Err(Error::Domain(format!("steps ({steps}) must be at least the burn-in ({})", options.burn_in)));
    }
    let mut rng: Rng = stream(seed, 0);
    let r0 = initial_radius(potential);
    let z = (0..n)
        .map(|_| Complex64::from_polar(r0 * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>()))
        .collect();
    let mut chain = Chain { potential, z, n: n as f64 };
    let mut log_h = step_size.ln();
    let (mut kept_accepts, mut kept_proposals) = (0u64, 0u64);
    for sweep in 0..steps {
        let h = log_h.exp();
        let sd = h.sqrt();
        let mut accepts = 0usize;
        for j in 0..n {
            let x = chain.z[j];
            let gx = chain.gradient(j, x);
            let xi = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let y = x - 0.5 * h * gx + sd * xi;
            if !(y.re.is_finite() && y.im.is_finite()) {
                return Err(Error::Divergence(format!("proposal for particle {j} is not finite at sweep {sweep}")));
            }
            let dh = chain.delta_energy(j, y);
            if dh.is_nan() {
                return Err(Error::Divergence(format!("energy is not finite at sweep {sweep}")));
            }
            if dh == f64::INFINITY {
                continue;
            }
            let gy = chain.gradient(j, y);
            let forward = (y - x + 0.5 * h * gx).norm_sqr();
            let backward = (x - y + 0.5 * h * gy).norm_sqr();
            let log_alpha = -dh - (backward - forward) / (2.0 * h);
            if rng.random::<f64>().ln() < log_alpha {
                chain.z[j] = y;
                accepts += 1;
            }
        }
        let rate = accepts as f64 / n as f64;
        if sweep < options.burn_in {
            log_h += (rate - options.target_acceptance) / ((sweep + 1) as f64).powf(0.6);
        } else {
            kept_accepts += accepts as u64;
            kept_proposals += n as u64;
            observe(sweep, &chain.z);
        }
    }
    let acceptance_rate = if kept_proposals > 0 { kept_accepts as f64 / kept_proposals as f64 } else { f64::NAN };
    let spectrum = Spectrum {
        points: chain.z,
        potential: potential.clone(),
        n,
        seed,
        stream: 0,
        method: Method::Mala,
        has_angles: true,
        acceptance_rate: Some(acceptance_rate),
    };
    Ok((spectrum, MalaSummary { acceptance_rate, step_size: log_h.exp() }))
}

/// Final state of a MALA chain with default burn-in and tuning.
pub fn sample_coulomb_mala(
    potential: &PotentialSpec,
    n: usize,
    steps: usize,
    step_size: f64,
    seed: u64,
) -> Result<Spectrum> {
    Ok(mala_chain(potential, n, steps, step_size, seed, MalaOptions::default(), |_, _| {})?.0)
}
