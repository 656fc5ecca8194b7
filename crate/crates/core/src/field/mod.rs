//! The centered log-characteristic polynomial `X_n(z) = Σ ln|z - z_i| - E[…]`
//! on grids, its multiplicative chaos, and extreme-value statistics.
//!
//! The field is unscaled: its covariance is `½ ln(1/|z - w|) + O(1)`, so
//! statements about chaos with a log-correlated field of covariance
//! `ln(1/|z - w|)` use `γ' = γ/√2`.

mod gmc;

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_float;
use crate::potential::{equilibrium_droplet, EquilibriumMeasure, PotentialSpec};
use crate::rng::par_map;
use crate::sampler::Spectrum;
use crate::stats::{covariance, mean};

pub use gmc::{
    analytic_square_mass_variance, matrix_gmc_measure, mollified_covariance, reference_gmc_sample,
    write_gmc_csv, GmcSample, ReferenceGmc,
};

/// Distance below which a node is treated as sitting on an eigenvalue.
const SINGULAR_NODE: f64 = 1e-14;
const NODE_JITTER: f64 = 1e-12;

/// A `resolution × resolution` grid of cell centers over the rectangle
/// `[x0, x1] × [y0, y1]`, row-major in `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridGeometry {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub resolution: usize,
}

impl GridGeometry {
    /// Square `[-h, h]²` centered at `c`.
    pub fn square(c: Complex64, half_side: f64, resolution: usize) -> Self {
        Self { x0: c.re - half_side, x1: c.re + half_side, y0: c.im - half_side, y1: c.im + half_side, resolution }
    }

    pub fn len(&self) -> usize {
        self.resolution * self.resolution
    }

    pub fn is_empty(&self) -> bool {
        self.resolution == 0
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.resolution as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / self.resolution as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn node(&self, index: usize) -> Complex64 {
        let (iy, ix) = (index / self.resolution, index % self.resolution);
        Complex64::new(self.x0 + (ix as f64 + 0.5) * self.dx(), self.y0 + (iy as f64 + 0.5) * self.dy())
    }

    pub fn nodes(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution == 0 || !(self.x1 > self.x0) || !(self.y1 > self.y0) {
            return Err(Error::Domain(format!("degenerate grid {self:?}")));
        }
        Ok(())
    }

    /// Checks that the rectangle stays at distance `margin` inside the disk
    /// of radius `radius`.
    pub fn check_margin(&self, radius: f64, margin: f64) -> Result<()> {
        self.validate()?;
        let far = [self.x0, self.x1].iter().map(|x| x * x).fold(0.0, f64::max)
            + [self.y0, self.y1].iter().map(|y| y * y).fold(0.0, f64::max);
        if far.sqrt() > radius - margin {
            return Err(Error::Hypothesis(format!(
                "grid region reaches |z| = {:.4}, beyond {radius} - {margin}",
                far.sqrt()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenteringMode {
    AnalyticAsymptotic,
    EmpiricalMean,
}

/// Per-node values subtracted from `Σ ln|z - z_i|`.
#[derive(Debug, Clone)]
pub struct Centering {
    pub mode: CenteringMode,
    pub values: Vec<f64>,
}

struct CenteringFn {
    eq: EquilibriumMeasure,
    l_inf: f64,
    n: f64,
}

impl CenteringFn {
    fn new(potential: &PotentialSpec, n: usize) -> Result<Self> {
        let (_, eq) = equilibrium_droplet(potential)?;
        Ok(Self { l_inf: eq.log_density_factor_at_infinity(), eq, n: n as f64 })
    }

    fn eval(&self, z: Complex64) -> Result<f64> {
        let l = self.eq.log_density_factor(z.norm());
        if !l.is_finite() {
            return Err(Error::Hypothesis(format!("the Laplacian of the potential vanishes at {z}")));
        }
        Ok(self.n * self.eq.eq_log_potential_closed_form(z) + 0.25 + 0.25 * (l - self.l_inf))
    }
}

/// Asymptotic `E Σ ln|z - z_i| ≈ n ∫ ln|z - w| dμ_V(w) + 1/4 + (L(z) - L^S(∞))/4`.
pub fn field_centering(potential: &PotentialSpec, z: Complex64, n: usize) -> Result<f64> {
    CenteringFn::new(potential, n)?.eval(z)
}

impl Centering {
    pub fn analytic(potential: &PotentialSpec, geometry: &GridGeometry, n: usize) -> Result<Self> {
        let c = CenteringFn::new(potential, n)?;
        let values = geometry.nodes().into_iter().map(|z| c.eval(z)).collect::<Result<Vec<_>>>()?;
        Ok(Self { mode: CenteringMode::AnalyticAsymptotic, values })
    }

    /// Node-wise sample mean of `Σ ln|z - z_i|` over a batch.
    pub fn empirical(spectra: &[Spectrum], geometry: &GridGeometry) -> Result<Self> {
        if spectra.is_empty() {
            return Err(Error::Domain("empirical centering needs at least one spectrum".into()));
        }
        let mut values = vec![0.0; geometry.len()];
        for s in spectra {
            let (raw, _) = raw_field(s, geometry)?;
            for (v, r) in values.iter_mut().zip(raw) {
                *v += r;
            }
        }
        for v in &mut values {
            *v /= spectra.len() as f64;
        }
        Ok(Self { mode: CenteringMode::EmpiricalMean, values })
    }

    pub fn zero(geometry: &GridGeometry) -> Self {
        Self { mode: CenteringMode::EmpiricalMean, values: vec![0.0; geometry.len()] }
    }
}

/// Values of the centered field on a grid, for one spectrum.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub geometry: GridGeometry,
    pub values: Vec<f64>,
    pub centering: Centering,
    pub potential: PotentialSpec,
    pub n: usize,
    /// Nodes moved by `1e-12` because they sat on an eigenvalue.
    pub jittered: Vec<usize>,
}

/// `Σ_i ln|z - z_i|`, computed from products of squared distances to
/// limit the number of logarithms.
pub fn log_abs_char_poly(points: &[Complex64], z: Complex64) -> f64 {
    let mut acc = 0.0;
    for chunk in points.chunks(8) {
        let p: f64 = chunk.iter().map(|w| (z - w).norm_sqr()).product();
        acc += p.ln();
    }
    0.5 * acc
}

fn raw_field(spectrum: &Spectrum, geometry: &GridGeometry) -> Result<(Vec<f64>, Vec<usize>)> {
    geometry.validate()?;
    if !spectrum.has_angles {
        return Err(Error::Domain("field evaluation needs full points".into()));
    }
    let m = geometry.resolution;
    let rows = par_map(m, |iy| {
        let mut vals = Vec::with_capacity(m);
        let mut moved = Vec::new();
        for ix in 0..m {
            let idx = iy * m + ix;
            let mut z = geometry.node(idx);
            if spectrum.points.iter().any(|w| (z - w).norm() < SINGULAR_NODE) {
                z += NODE_JITTER;
                moved.push(idx);
            }
            vals.push(log_abs_char_poly(&spectrum.points, z));
        }
        (vals, moved)
    });
    let mut values = Vec::with_capacity(geometry.len());
    let mut jittered = Vec::new();
    for (v, j) in rows {
        values.extend(v);
        jittered.extend(j);
    }
    Ok((values, jittered))
}

/// `X_n` at the grid nodes.
pub fn eval_field(spectrum: &Spectrum, geometry: &GridGeometry, centering: &Centering) -> Result<FieldGrid> {
    if centering.values.len() != geometry.len() {
        return Err(Error::Domain("centering does not match the grid".into()));
    }
    let (raw, jittered) = raw_field(spectrum, geometry)?;
    let values = raw.iter().zip(&centering.values).map(|(r, c)| r - c).collect();
    Ok(FieldGrid {
        geometry: *geometry,
        values,
        centering: centering.clone(),
        potential: spectrum.potential.clone(),
        n: spectrum.n,
        jittered,
    })
}

/// Empirical and predicted covariance of `(X_n(ζ_1), …, X_n(ζ_m))`, both
/// divided by `ln n`.
#[derive(Debug, Clone, Serialize)]
pub struct CltCovariance {
    pub empirical: Vec<Vec<f64>>,
    pub predicted: Vec<Vec<f64>>,
}

/// Predicted entries are `1/4` on the diagonal and
/// `-ln|ζ_j - ζ_k| / (2 ln n)` off it.
pub fn clt_covariance(spectra: &[Spectrum], zetas: &[Complex64]) -> Result<CltCovariance> {
    let first = spectra.first().ok_or_else(|| Error::Domain("empty batch".into()))?;
    let n = first.n;
    let ln_n = (n as f64).ln();
    let sep = (n as f64).powf(-0.5 + crate::moments::DEFAULT_KAPPA);
    for j in 0..zetas.len() {
        for k in 0..j {
            if (zetas[j] - zetas[k]).norm() < sep {
                return Err(Error::Hypothesis(format!("points {k} and {j} are closer than {sep:.4}")));
            }
        }
    }
    let samples: Vec<Vec<f64>> = zetas
        .iter()
        .map(|z| spectra.iter().map(|s| s.log_abs_char_poly(*z)).collect())
        .collect();
    let m = zetas.len();
    let mut empirical = vec![vec![0.0; m]; m];
    let mut predicted = vec![vec![0.0; m]; m];
    for j in 0..m {
        for k in 0..m {
            empirical[j][k] = covariance(&samples[j], &samples[k]) / ln_n;
            predicted[j][k] = if j == k { 0.25 } else { -(zetas[j] - zetas[k]).norm().ln() / (2.0 * ln_n) };
        }
    }
    Ok(CltCovariance { empirical, predicted })
}

/// Area of `{z ∈ K : X_n(z) ≥ γ ln n}`, counted in grid cells.
pub fn thick_points(field: &FieldGrid, gamma: f64) -> Result<f64> {
    if !(0.0..std::f64::consts::FRAC_1_SQRT_2).contains(&gamma) {
        return Err(Error::Domain(format!("thick-point level gamma = {gamma} must lie in [0, 1/sqrt 2)")));
    }
    let level = gamma * (field.n as f64).ln();
    let count = field.values.iter().filter(|v| **v >= level).count();
    Ok(count as f64 * field.geometry.cell_area())
}

/// `ln(n ∫_K e^{γ X_n} dm) / (γ ln n)`, with the integral as a cell sum.
pub fn free_energy_stat(field: &FieldGrid, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("free energy needs gamma > 0, got {gamma}")));
    }
    let top = field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = field.values.iter().map(|v| (gamma * (v - top)).exp()).sum();
    let ln_n = (field.n as f64).ln();
    Ok((ln_n + field.geometry.cell_area().ln() + gamma * top + s.ln()) / (gamma * ln_n))
}

/// `max_K X_n / ln n` over the grid nodes.
pub fn field_max_stat(field: &FieldGrid) -> f64 {
    field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max) / (field.n as f64).ln()
}

/// Limit in probability of `free_energy_stat`: `1/γ + γ/8` below the
/// freezing threshold `γ = 2√2` and `1/√2` above it.
pub fn freezing_limit(gamma: f64) -> f64 {
    if gamma < 2.0 * std::f64::consts::SQRT_2 {
        1.0 / gamma + gamma / 8.0
    } else {
        std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Field values as CSV with columns `x,y,value`.
pub fn write_field_csv<W: Write + ?Sized>(out: &mut W, field: &FieldGrid, preamble: Option<&str>) -> Result<()> {
    if let Some(p) = preamble {
        writeln!(out, "# {p}")?;
    }
    writeln!(out, "x,y,value")?;
    for (i, v) in field.values.iter().enumerate() {
        let z = field.geometry.node(i);
        writeln!(out, "{},{},{}", fmt_float(z.re), fmt_float(z.im), fmt_float(*v))?;
    }
    Ok(())
}

/// Mean of the field over the grid, a quick centering diagnostic.
pub fn field_mean(field: &FieldGrid) -> f64 {
    mean(&field.values)
}
