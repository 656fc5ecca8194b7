use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::io::Write;

use faer::linalg::solvers::Llt;
use faer::{Mat, Side};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::{FieldGrid, GridGeometry};
use crate::error::{Error, Result};
use crate::io::fmt_float;
use crate::moments::SingleMoment;
use crate::potential::{bump, mollified_log, MollifierParams};
use crate::quad::{integrate, polar_integral, AngularRule, Tolerance};
use crate::rng::stream;

const DIAGONAL_JITTER: f64 = 1e-10;

/// Cell weights of a random measure on a grid.
#[derive(Debug, Clone)]
pub struct GmcSample {
    pub geometry: GridGeometry,
    pub weights: Vec<f64>,
}

impl GmcSample {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Mass of the cells whose centers lie in `[x0, x1] × [y0, y1]`.
    pub fn mass_in(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let z = self.geometry.node(*i);
                z.re >= x0 && z.re <= x1 && z.im >= y0 && z.im <= y1
            })
            .map(|(_, w)| w)
            .sum()
    }
}

/// `|p_n(z)|^γ dm(z) / E|p_n(z)|^γ` on the grid of `field`, with the
/// expectation taken from the single-singularity asymptotics.
pub fn matrix_gmc_measure(field: &FieldGrid, gamma: f64) -> Result<GmcSample> {
    if !(0.0..2.0 * SQRT_2).contains(&gamma) {
        return Err(Error::Phase(gamma));
    }
    let g = field.geometry;
    let cell = g.cell_area();
    if gamma == 0.0 {
        return Ok(GmcSample { geometry: g, weights: vec![cell; g.len()] });
    }
    let moment = SingleMoment::new(&field.potential, gamma, field.n)?;
    let ln_cell = cell.ln();
    let weights = (0..g.len())
        .map(|i| {
            let raw = field.values[i] + field.centering.values[i];
            Ok((ln_cell + gamma * raw - moment.log_value(g.node(i))?).exp())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GmcSample { geometry: g, weights })
}

/// Covariance `ln(1/|·|) * χ_ε * χ_ε` at distance `d`, the kernel of a
/// log-correlated field mollified at scale ε. Equal to `-ln d` for `d ≥ 2ε`.
pub fn mollified_covariance(d: f64, epsilon: f64) -> Result<f64> {
    if d >= 2.0 * epsilon {
        return Ok(-d.ln());
    }
    let params = MollifierParams::new(epsilon)?;
    let base = Complex64::new(d, 0.0);
    let tol = Tolerance::new(1e-11, 1e-11);
    let weight = |u: Complex64| bump(u.norm() / epsilon);
    let zero = Complex64::new(0.0, 0.0);
    let mass = polar_integral(weight, zero, &[0.0, epsilon], AngularRule::Trapezoid, tol)?;
    let num = polar_integral(
        |u| mollified_log(params, base + u) * weight(u),
        zero,
        &[0.0, 0.5 * epsilon, epsilon],
        AngularRule::Trapezoid,
        tol,
    )?;
    Ok(-num / mass)
}

/// Sampler for a Gaussian log-correlated field on a grid with covariance
/// `mollified_covariance(|z - w|, ε) + s`, and its chaos measure
/// `e^{γ'Y - γ'² Var Y / 2} dm`.
pub struct ReferenceGmc {
    geometry: GridGeometry,
    gamma_prime: f64,
    variance: Vec<f64>,
    factor: Mat<f64>,
}

impl ReferenceGmc {
    pub fn new(geometry: GridGeometry, gamma_prime: f64, capacity: f64, epsilon: f64) -> Result<Self> {
        geometry.validate()?;
        if !(0.0..2.0).contains(&gamma_prime) {
            return Err(Error::Domain(format!("reference chaos needs 0 <= gamma' < 2, got {gamma_prime}")));
        }
        let spacing = geometry.dx().max(geometry.dy());
        if !(epsilon >= 2.0 * spacing) {
            return Err(Error::Domain(format!(
                "mollifier scale {epsilon} is below twice the grid spacing {spacing}"
            )));
        }
        let m = geometry.resolution;
        let (dx, dy) = (geometry.dx(), geometry.dy());
        let mut cache: HashMap<(usize, usize), f64> = HashMap::new();
        let mut cov = |i: usize, j: usize| -> Result<f64> {
            let key = (i, j);
            if let Some(v) = cache.get(&key) {
                return Ok(*v);
            }
            let d = (i as f64 * dx).hypot(j as f64 * dy);
            let v = mollified_covariance(d, epsilon)? + capacity;
            cache.insert(key, v);
            Ok(v)
        };
        let size = geometry.len();
        let mut c = Mat::<f64>::zeros(size, size);
        for a in 0..size {
            for b in 0..=a {
                let (ax, ay) = (a % m, a / m);
                let (bx, by) = (b % m, b / m);
                let v = cov(ax.abs_diff(bx), ay.abs_diff(by))?;
                c[(a, b)] = v;
                c[(b, a)] = v;
            }
        }
        let variance: Vec<f64> = (0..size).map(|a| c[(a, a)]).collect();
        for a in 0..size {
            c[(a, a)] += DIAGONAL_JITTER;
        }
        let llt: Llt<f64> = c
            .llt(Side::Lower)
            .map_err(|e| Error::NotPositiveDefinite(format!("{e:?}")))?;
        Ok(Self { geometry, gamma_prime, variance, factor: llt.L().to_owned() })
    }

    /// Field values `Y` at the grid nodes for stream `index`.
    pub fn sample_field(&self, seed: u64, index: u64) -> Vec<f64> {
        let mut rng = stream(seed, index);
        let size = self.geometry.len();
        let xi: Vec<f64> = (0..size).map(|_| StandardNormal.sample(&mut rng)).collect();
        (0..size)
            .map(|a| (0..=a).map(|b| self.factor[(a, b)] * xi[b]).sum())
            .collect()
    }

    pub fn sample(&self, seed: u64, index: u64) -> GmcSample {
        let cell = self.geometry.cell_area();
        let g = self.gamma_prime;
        let weights = self
            .sample_field(seed, index)
            .iter()
            .zip(&self.variance)
            .map(|(y, v)| cell * (g * y - 0.5 * g * g * v).exp())
            .collect();
        GmcSample { geometry: self.geometry, weights }
    }

    /// `Var M(K) = Σ_{a,b} m_a m_b (e^{γ'² C_ab} - 1)` for the discretized
    /// measure over the cells in `mask`.
    pub fn exact_mass_variance(&self, mask: impl Fn(Complex64) -> bool) -> f64 {
        let cell = self.geometry.cell_area();
        let g2 = self.gamma_prime * self.gamma_prime;
        let inside: Vec<usize> = (0..self.geometry.len()).filter(|a| mask(self.geometry.node(*a))).collect();
        let mut acc = 0.0;
        for &a in &inside {
            for &b in &inside {
                let k = a.min(b);
                let mut c: f64 = (0..=k).map(|t| self.factor[(a, t)] * self.factor[(b, t)]).sum();
                if a == b {
                    c -= DIAGONAL_JITTER;
                }
                acc += (g2 * c).exp_m1();
            }
        }
        acc * cell * cell
    }
}

/// One sample of the reference chaos on `geometry`.
pub fn reference_gmc_sample(
    geometry: GridGeometry,
    gamma_prime: f64,
    capacity: f64,
    epsilon: f64,
    seed: u64,
) -> Result<GmcSample> {
    Ok(ReferenceGmc::new(geometry, gamma_prime, capacity, epsilon)?.sample(seed, 0))
}

/// `∬_{A×A} (e^{γ'²(ln(1/|z - w|) + s)} - 1) dm(z) dm(w)` for a square `A` of
/// the given side, the mass variance of the unmollified chaos.
pub fn analytic_square_mass_variance(side: f64, gamma_prime: f64, capacity: f64) -> Result<f64> {
    let g2 = gamma_prime * gamma_prime;
    if !(0.0..2.0).contains(&g2) {
        return Err(Error::Domain(format!("mass variance is infinite for gamma' = {gamma_prime}")));
    }
    let a = side;
    let scale = (g2 * capacity).exp();
    let tol = Tolerance::new(1e-12 * a.powi(4), 1e-10);
    // The difference z - w has density (a - |x|)(a - |y|) on [-a, a]²; by
    // symmetry integrate over the octant 0 ≤ θ ≤ π/4 in polar form.
    let mut failure = None;
    let outer = integrate(
        |t| {
            let (c, s) = (t.cos(), t.sin());
            let inner = integrate(
                |r| {
                    let g = scale * r.powf(-g2) - 1.0;
                    g * (a - r * c) * (a - r * s) * r
                },
                0.0,
                a / c,
                tol,
            );
            inner.unwrap_or_else(|e| {
                failure = Some(e);
                0.0
            })
        },
        0.0,
        FRAC_PI_4,
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(8.0 * outer),
    }
}

/// Measure weights as CSV with columns `x,y,weight`.
pub fn write_gmc_csv<W: Write + ?Sized>(out: &mut W, sample: &GmcSample, preamble: Option<&str>) -> Result<()> {
    if let Some(p) = preamble {
        writeln!(out, "# {p}")?;
    }
    writeln!(out, "x,y,weight")?;
    for (i, w) in sample.weights.iter().enumerate() {
        let z = sample.geometry.node(i);
        writeln!(out, "{},{},{}", fmt_float(z.re), fmt_float(z.im), fmt_float(*w))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{eval_field, Centering};
    use crate::potential::PotentialSpec;
    use crate::sampler::sample_ginibre_spectrum;
    use crate::stats::{mean, variance};

    #[test]
    fn covariance_matches_log_outside_and_is_continuous() {
        let eps = 0.1;
        assert_eq!(mollified_covariance(0.3, eps).unwrap(), -(0.3f64).ln());
        let below = mollified_covariance(0.2 - 1e-6, eps).unwrap();
        assert!((below + (0.2f64 - 1e-6).ln()).abs() < 1e-9, "{below}");
        // monotone decreasing in d
        let vals: Vec<f64> = [0.0, 0.05, 0.1, 0.15].iter().map(|d| mollified_covariance(*d, eps).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        // bounded by the single mollification at zero
        assert!(vals[0] < -(eps.ln() + crate::potential::mollifier_log_constant()));
    }

    #[test]
    fn gamma_zero_is_lebesgue() {
        let s = sample_ginibre_spectrum(16, 1).unwrap();
        let g = GridGeometry::square(Complex64::new(0.0, 0.0), 0.3, 5);
        let f = eval_field(&s, &g, &Centering::analytic(&PotentialSpec::Ginibre, &g, 16).unwrap()).unwrap();
        let m = matrix_gmc_measure(&f, 0.0).unwrap();
        assert!((m.total_mass() - g.area()).abs() < 1e-14);
        assert!(matches!(matrix_gmc_measure(&f, 3.0), Err(Error::Phase(_))));
    }

    #[test]
    fn reference_field_has_target_covariance() {
        let g = GridGeometry::square(Complex64::new(0.0, 0.0), 0.2, 6);
        let eps = 2.0 * g.dx();
        let r = ReferenceGmc::new(g, 0.5, 0.0, eps).unwrap();
        let samples: Vec<Vec<f64>> = (0..4000).map(|i| r.sample_field(9, i)).collect();
        let col = |a: usize| samples.iter().map(|y| y[a]).collect::<Vec<f64>>();
        let (y0, y35) = (col(0), col(35));
        assert!(mean(&y0).abs() < 4.0 * (r.variance[0] / 4000.0).sqrt());
        let expected = mollified_covariance(0.0, eps).unwrap();
        assert!((variance(&y0) - expected).abs() < 0.1 * expected);
        let d = (g.node(0) - g.node(35)).norm();
        let c = crate::stats::covariance(&y0, &y35);
        assert!((c + d.ln()).abs() < 0.1, "{c} vs {}", -d.ln());
    }

    #[test]
    fn reference_measure_has_unit_mean_density() {
        let g = GridGeometry::square(Complex64::new(0.0, 0.0), 0.2, 6);
        let r = ReferenceGmc::new(g, 0.5, 0.0, 2.0 * g.dx()).unwrap();
        let masses: Vec<f64> = (0..4000).map(|i| r.sample(4, i).total_mass()).collect();
        let se = (variance(&masses) / 4000.0).sqrt();
        assert!((mean(&masses) - g.area()).abs() < 4.0 * se);
        let exact = r.exact_mass_variance(|_| true);
        assert!((variance(&masses) - exact).abs() < 0.2 * exact);
    }

    #[test]
    fn rejects_fine_mollifier_and_supercritical_gamma() {
        let g = GridGeometry::square(Complex64::new(0.0, 0.0), 0.2, 6);
        assert!(ReferenceGmc::new(g, 0.5, 0.0, g.dx()).is_err());
        assert!(ReferenceGmc::new(g, 2.0, 0.0, 2.0 * g.dx()).is_err());
    }

    #[test]
    fn square_variance_zero_and_small_gamma() {
        assert_eq!(analytic_square_mass_variance(0.5, 0.0, 0.0).unwrap(), 0.0);
        // First order in γ'²: ∬ ln(1/|z - w|) over the unit square, by a
        // Cartesian route on the difference density 4(1 - x)(1 - y).
        let g = 1e-3;
        let v = analytic_square_mass_variance(1.0, g, 0.0).unwrap() / (g * g);
        let tol = Tolerance::new(1e-13, 1e-12);
        let closed = integrate(
            |x| {
                integrate(|y| -0.5 * (x * x + y * y).ln() * 4.0 * (1.0 - x) * (1.0 - y), 0.0, 1.0, tol).unwrap()
            },
            0.0,
            1.0,
            tol,
        )
        .unwrap();
        assert!((v - closed).abs() < 1e-4, "{v} vs {closed}");
    }
}
