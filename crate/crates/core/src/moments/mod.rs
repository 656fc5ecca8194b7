//! Asymptotic formulas for joint moments of the characteristic polynomial
//! and their Monte Carlo counterparts.

mod ward;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{
    equilibrium_droplet, fourier_coefficients, h_half_norm, EquilibriumMeasure, HarmonicExtension, PotentialSpec,
    TestFn, K_MAX,
};
use crate::quad::{polar_integral, AngularRule, Tolerance};
use crate::rng::par_map;
use crate::sampler::Spectrum;
use crate::specfun::{log_barnes_g, LogValue};
use crate::stats::{effective_sample_size, jackknife_log_mean_exp, log_mean_exp};

pub use ward::{isotropy_statistic, ward_statistic, WardFn};

/// Default mesoscopic exponent `κ` of the separation scale `n^{-1/2+κ}`.
pub const DEFAULT_KAPPA: f64 = 0.05;

/// Smallest effective sample size accepted by [`mc_moment`].
pub const MIN_ESS: f64 = 10.0;

const F_TOL: Tolerance = Tolerance::new(1e-11, 1e-11);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Singularity {
    pub zeta: Complex64,
    pub gamma: f64,
}

fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}

fn default_test_fn() -> TestFn {
    TestFn::Zero
}

/// Root singularities `|z - ζ_j|^{γ_j}`, a smooth linear statistic `f` and
/// the number of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentQuery {
    #[serde(default)]
    pub singularities: Vec<Singularity>,
    #[serde(default = "default_test_fn")]
    pub test_fn: TestFn,
    pub n: usize,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
}

impl MomentQuery {
    pub fn new(singularities: Vec<Singularity>, test_fn: TestFn, n: usize) -> Self {
        Self { singularities, test_fn, n, kappa: DEFAULT_KAPPA }
    }

    pub fn single(zeta: Complex64, gamma: f64, n: usize) -> Self {
        Self::new(vec![Singularity { zeta, gamma }], TestFn::Zero, n)
    }

    /// Separation scale `n^{-1/2+κ}`.
    pub fn separation(&self) -> f64 {
        (self.n as f64).powf(-0.5 + self.kappa)
    }

    /// Checks the singularities against a disk droplet of radius `radius`:
    /// distance to the boundary and pairwise distances above
    /// [`Self::separation`], exponents finite and nonnegative.
    pub fn validate(&self, radius: f64) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Hypothesis("n must be positive".into()));
        }
        if !(self.kappa > 0.0 && self.kappa < 0.5) {
            return Err(Error::Hypothesis(format!("kappa = {} must lie in (0, 1/2)", self.kappa)));
        }
        let sep = self.separation();
        for (j, s) in self.singularities.iter().enumerate() {
            if !(s.gamma >= 0.0 && s.gamma.is_finite()) {
                return Err(Error::Hypothesis(format!("gamma_{j} = {} must be finite and nonnegative", s.gamma)));
            }
            let dist = radius - s.zeta.norm();
            if !(dist > sep) {
                return Err(Error::Hypothesis(format!(
                    "zeta_{j} = {} is within {sep:.4} of the droplet boundary",
                    s.zeta
                )));
            }
            for (k, t) in self.singularities.iter().enumerate().take(j) {
                if !((s.zeta - t.zeta).norm() > sep) {
                    return Err(Error::Hypothesis(format!("zeta_{k} and zeta_{j} are closer than {sep:.4}")));
                }
            }
        }
        Ok(())
    }
}

/// Log-mean-exp estimate of a moment with its jackknife standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub log_mean: f64,
    /// Standard error of `log_mean`, i.e. the relative error of the mean.
    pub rel_stderr: f64,
    pub samples: usize,
    pub ess: f64,
}

/// One emitted moment record.
#[derive(Debug, Clone, Serialize)]
pub struct MomentRecord {
    pub query: MomentQuery,
    pub log_rhs: f64,
    pub log_mc: f64,
    pub rel_stderr: f64,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
}

/// `(γ/4) ln 2π - ln G(1 + γ/2) + (γ²/8) ln n`, shared by every singularity.
fn singularity_constant(gamma: f64, n: usize) -> Result<f64> {
    Ok(gamma * gamma / 8.0 * (n as f64).ln() + gamma / 4.0 * (2.0 * PI).ln() - log_barnes_g(1.0 + gamma / 2.0)?)
}

fn cross_terms(query: &MomentQuery, capacity: f64) -> f64 {
    let s = &query.singularities;
    let mut acc = 0.0;
    for j in 0..s.len() {
        for k in 0..j {
            let gg = s[j].gamma * s[k].gamma;
            acc += -gg / 2.0 * (s[j].zeta - s[k].zeta).norm().ln() + gg / 2.0 * capacity;
        }
    }
    acc
}

fn disk_breaks(f: &TestFn, radius: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    b.extend(f.radial_breakpoints().into_iter().filter(|r| *r > 0.0 && *r < radius));
    b.push(radius);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

fn disk_integral<G: Fn(Complex64) -> f64>(g: G, f: &TestFn, radius: f64) -> Result<f64> {
    polar_integral(g, Complex64::new(0.0, 0.0), &disk_breaks(f, radius), AngularRule::Trapezoid, F_TOL)
}

/// Log of the asymptotic joint moment for the Ginibre potential `|z|²`.
pub fn fh_rhs_ginibre(query: &MomentQuery) -> Result<LogValue> {
    query.validate(1.0)?;
    let n = query.n;
    let nf = n as f64;
    let f = &query.test_fn;
    let mut total = 0.0;
    let mut f_hat0 = 0.0;
    if !f.is_zero() {
        let mean_f = disk_integral(|z| f.value(z), f, 1.0)?;
        let grad = disk_integral(|z| f.gradient(z).norm_sqr(), f, 1.0)?;
        let lap = disk_integral(|z| f.laplacian(z), f, 1.0)?;
        let boundary = fourier_coefficients(|t| f.value(Complex64::from_polar(1.0, t)), K_MAX);
        f_hat0 = boundary.get(0).re;
        total += nf / PI * mean_f + grad / (8.0 * PI) + h_half_norm(&boundary) / 4.0 + lap / (8.0 * PI);
    }
    for s in &query.singularities {
        let g = s.gamma;
        total += g / 2.0 * nf * (s.zeta.norm_sqr() - 1.0) + singularity_constant(g, n)?;
        if !f.is_zero() {
            total += g / 2.0 * (f_hat0 - f.value(s.zeta));
        }
    }
    total += cross_terms(query, 0.0);
    LogValue::new(total)
}

/// Pieces of the general formula that depend on the potential only.
struct RadialData {
    eq: EquilibriumMeasure,
    radius: f64,
    capacity: f64,
    l_inf: f64,
}

impl RadialData {
    fn new(potential: &PotentialSpec) -> Result<Self> {
        let (droplet, eq) = equilibrium_droplet(potential)?;
        let radius = eq.radius();
        Ok(Self { capacity: droplet.capacity_log, l_inf: eq.log_density_factor_at_infinity(), radius, eq })
    }

    fn log_density_factor(&self, zeta: Complex64) -> Result<f64> {
        let l = self.eq.log_density_factor(zeta.norm());
        if l.is_finite() {
            Ok(l)
        } else {
            Err(Error::Hypothesis(format!("the Laplacian of the potential vanishes at zeta = {zeta}")))
        }
    }

    /// Log of the single-singularity factor at `ζ` without the `f` terms.
    fn singularity_factor(&self, zeta: Complex64, gamma: f64, n: usize) -> Result<f64> {
        if gamma == 0.0 {
            return Ok(0.0);
        }
        let l = self.log_density_factor(zeta)?;
        Ok(gamma * n as f64 * self.eq.eq_log_potential_closed_form(zeta)
            + singularity_constant(gamma, n)?
            + gamma / 4.0 * (l - self.l_inf)
            + gamma * gamma / 8.0 * (l + 2.0 * self.capacity))
    }
}

/// Log of the asymptotic joint moment for a radial potential, assembled
/// from the equilibrium measure, the capacity, the density factor
/// `L = ln(ΔV/4)` and the exterior harmonic extension of `f`.
pub fn fh_rhs_general(potential: &PotentialSpec, query: &MomentQuery) -> Result<LogValue> {
    let data = RadialData::new(potential)?;
    query.validate(data.radius)?;
    let n = query.n;
    let f = &query.test_fn;
    let mut total = 0.0;
    let mut boundary_mean = 0.0;
    if !f.is_zero() {
        let r = data.radius;
        let eq = &data.eq;
        let mass = disk_integral(|z| f.value(z) * eq.density(z.norm()), f, r)?;
        let grad = disk_integral(|z| f.gradient(z).norm_sqr(), f, r)?;
        let lap = disk_integral(|z| f.laplacian(z), f, r)?;
        // ∫_C Δf L^S = ∫_S Δf (L - L(R)) since L^S ≡ L(R) outside and ∫_C Δf = 0
        let lap_l = disk_integral(|z| f.laplacian(z) * (eq.log_density_factor(z.norm()) - data.l_inf), f, r)?;
        let ext = HarmonicExtension::from_fn(&eq.droplet, |z| f.value(z));
        boundary_mean = ext.harmonic_measure_mean();
        total += n as f64 * mass + (grad + ext.exterior_dirichlet_energy() + lap + lap_l) / (8.0 * PI);
    }
    for s in &query.singularities {
        total += data.singularity_factor(s.zeta, s.gamma, n)?;
        if !f.is_zero() {
            total += s.gamma / 2.0 * (boundary_mean - f.value(s.zeta));
        }
    }
    total += cross_terms(query, data.capacity);
    LogValue::new(total)
}

/// Log of the asymptotic `E|det(M - ζ)|^γ` for a radial potential with
/// `f = 0`, without hypothesis checks. Used for pointwise GMC normalization.
pub fn log_single_moment(potential: &PotentialSpec, zeta: Complex64, gamma: f64, n: usize) -> Result<f64> {
    RadialData::new(potential)?.singularity_factor(zeta, gamma, n)
}

/// Evaluator of [`log_single_moment`] at many points, with the potential
/// data computed once.
pub struct SingleMoment {
    data: RadialData,
    gamma: f64,
    n: usize,
}

impl SingleMoment {
    pub fn new(potential: &PotentialSpec, gamma: f64, n: usize) -> Result<Self> {
        Ok(Self { data: RadialData::new(potential)?, gamma, n })
    }

    pub fn log_value(&self, zeta: Complex64) -> Result<f64> {
        self.data.singularity_factor(zeta, self.gamma, self.n)
    }
}

/// Per-sample log-weights `Σ_i f(z_i) + Σ_j γ_j Σ_i ln|z_i - ζ_j|`.
pub fn log_weights(spectra: &[Spectrum], query: &MomentQuery) -> Result<Vec<f64>> {
    let f = &query.test_fn;
    let origin_only = query.singularities.iter().all(|s| s.zeta == Complex64::new(0.0, 0.0)) && f.is_radial();
    if let Some(s) = spectra.iter().find(|s| !s.has_angles) {
        if !origin_only {
            return Err(Error::Domain(format!(
                "moduli-only spectrum (stream {}) needs singularities at 0 and a radial test function",
                s.stream
            )));
        }
    }
    Ok(par_map(spectra.len(), |i| {
        let s = &spectra[i];
        let mut w = 0.0;
        if !f.is_zero() {
            w += if s.has_angles {
                s.points.iter().map(|z| f.value(*z)).sum::<f64>()
            } else {
                s.points.iter().map(|z| f.value(Complex64::new(z.re, 0.0))).sum::<f64>()
            };
        }
        for sg in &query.singularities {
            if sg.gamma != 0.0 {
                w += sg.gamma * s.log_abs_char_poly(sg.zeta);
            }
        }
        w
    }))
}

/// Monte Carlo estimate of `E[e^{Σ f(z_i)} ∏_j ∏_i |z_i - ζ_j|^{γ_j}]` by
/// log-mean-exp over the batch, with jackknife error.
///
/// When every sample has the same weight (for instance `γ = 0`, `f = 0`)
/// the estimate is exact and any batch size is accepted.
pub fn mc_moment(spectra: &[Spectrum], query: &MomentQuery) -> Result<MCEstimate> {
    if spectra.is_empty() {
        return Err(Error::Domain("empty batch".into()));
    }
    let w = log_weights(spectra, query)?;
    let samples = w.len();
    if w.iter().all(|x| *x == w[0]) {
        return Ok(MCEstimate { log_mean: w[0], rel_stderr: 0.0, samples, ess: samples as f64 });
    }
    let ess = effective_sample_size(&w);
    if samples < 2 || ess < MIN_ESS {
        return Err(Error::DegenerateEstimate { ess, min: MIN_ESS });
    }
    Ok(MCEstimate { log_mean: log_mean_exp(&w), rel_stderr: jackknife_log_mean_exp(&w), samples, ess })
}

/// Variance of the linear statistic `Σ f(z_i)` for the Ginibre ensemble:
/// `(1/4π) ∫_𝔻 |∇f|² dm + (1/2) ‖f|_{∂𝔻}‖²_{H^{1/2}}`.
pub fn linear_stat_variance_prediction(f: &TestFn) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let grad = disk_integral(|z| f.gradient(z).norm_sqr(), f, 1.0)?;
    let boundary = fourier_coefficients(|t| f.value(Complex64::from_polar(1.0, t)), K_MAX);
    Ok(grad / (4.0 * PI) + 0.5 * h_half_norm(&boundary))
}
