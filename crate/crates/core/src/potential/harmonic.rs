use std::f64::consts::PI;

use num_complex::Complex64;

use super::Droplet;
use crate::error::{Error, Result};

/// Number of retained Fourier modes on each side.
pub const K_MAX: usize = 256;

const TAIL_WARNING: f64 = 1e-8;

/// Fourier coefficients `Ĝ_k`, `|k| ≤ kmax`, of a real boundary function
/// written in the map parameter θ.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierData {
    kmax: usize,
    coeffs: Vec<Complex64>,
    /// `Σ |Ĝ_k|²` over `kmax < |k| < 2 kmax`, from the oversampled transform.
    pub tail_energy: f64,
}

impl FourierData {
    /// Builds data from explicit coefficients `Ĝ_0, Ĝ_1, …` of a real
    /// function (so `Ĝ_{-k} = conj Ĝ_k`).
    pub fn from_nonnegative(coeffs: &[Complex64]) -> Self {
        let kmax = coeffs.len().saturating_sub(1);
        let mut all = vec![Complex64::new(0.0, 0.0); 2 * kmax + 1];
        for (k, c) in coeffs.iter().enumerate() {
            all[kmax + k] = *c;
            all[kmax - k] = c.conj();
        }
        all[kmax] = Complex64::new(coeffs.first().map_or(0.0, |c| c.re), 0.0);
        Self { kmax, coeffs: all, tail_energy: 0.0 }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// `Ĝ_k`, zero beyond the retained modes.
    pub fn get(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.kmax {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.kmax as i64) as usize]
        }
    }

    pub fn truncation_warning(&self) -> bool {
        self.tail_energy > TAIL_WARNING
    }

    /// Evaluates the truncated series at θ.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.get(0).re;
        for k in 1..=self.kmax {
            acc += 2.0 * (self.get(k as i64) * Complex64::from_polar(1.0, k as f64 * theta)).re;
        }
        acc
    }
}

/// Fourier coefficients of `g` sampled at `4·kmax` equispaced angles.
pub fn fourier_coefficients<F: Fn(f64) -> f64>(g: F, kmax: usize) -> FourierData {
    let m = 4 * kmax.max(1);
    let samples: Vec<f64> = (0..m).map(|j| g(2.0 * PI * j as f64 / m as f64)).collect();
    let top = 2 * kmax.max(1) - 1;
    let mut pos = vec![Complex64::new(0.0, 0.0); top + 1];
    for (k, slot) in pos.iter_mut().enumerate() {
        let step = Complex64::from_polar(1.0, -2.0 * PI * k as f64 / m as f64);
        let mut tw = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            if j % 64 == 0 {
                // refresh the twiddle to keep rounding from accumulating
                tw = Complex64::from_polar(1.0, -2.0 * PI * (k * j % m) as f64 / m as f64);
            }
            acc += tw * s;
            tw *= step;
        }
        *slot = acc / m as f64;
    }
    let tail_energy = 2.0 * pos[kmax + 1..].iter().map(|c| c.norm_sqr()).sum::<f64>();
    let mut data = FourierData::from_nonnegative(&pos[..=kmax]);
    data.tail_energy = tail_energy;
    data
}

/// `‖f‖²_{H^{1/2}} = Σ |k| |f̂_k|²` over the retained modes.
pub fn h_half_norm(data: &FourierData) -> f64 {
    2.0 * (1..=data.kmax).map(|k| k as f64 * data.get(k as i64).norm_sqr()).sum::<f64>()
}

/// Bounded harmonic extension of boundary data to the exterior of a droplet,
/// `g^S = G_out ∘ φ` with `G_out(w) = Σ_{k≥0} Ĝ_{-k} w^{-k} + Σ_{k≥1} Ĝ_k w̄^{-k}`.
#[derive(Debug, Clone)]
pub struct HarmonicExtension {
    pub droplet: Droplet,
    pub data: FourierData,
}

impl HarmonicExtension {
    /// Extension of `f` restricted to the boundary, with `K_MAX` modes.
    pub fn from_fn<F: Fn(Complex64) -> f64>(droplet: &Droplet, f: F) -> Self {
        let data = fourier_coefficients(|t| f(droplet.boundary_point(t)), K_MAX);
        Self { droplet: droplet.clone(), data }
    }

    pub fn from_fourier(droplet: &Droplet, data: FourierData) -> Self {
        Self { droplet: droplet.clone(), data }
    }

    /// `g^S(∞) = Ĝ_0`.
    pub fn at_infinity(&self) -> f64 {
        self.data.get(0).re
    }

    fn outer_parameter(&self, z: Complex64) -> Result<Complex64> {
        let w = self.droplet.phi(z)?;
        if w.norm() < 1.0 - 1e-12 {
            return Err(Error::Domain(format!("{z} lies inside the droplet")));
        }
        Ok(w)
    }

    /// `(g_+, g_-)` at `z`: the holomorphic part `Σ_{k≥0} Ĝ_{-k} w^{-k}` and
    /// the antiholomorphic part `Σ_{k≥1} Ĝ_k w̄^{-k}`.
    pub fn split(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let w = self.outer_parameter(z)?;
        let inv = w.inv();
        let mut plus = Complex64::new(0.0, 0.0);
        let mut minus = Complex64::new(0.0, 0.0);
        for k in (1..=self.data.kmax()).rev() {
            plus = (plus + self.data.get(-(k as i64))) * inv;
            minus = (minus + self.data.get(k as i64)) * inv.conj();
        }
        Ok((plus + self.data.get(0), minus))
    }

    /// `g^S(z)` for `z` outside the droplet.
    pub fn eval(&self, z: Complex64) -> Result<f64> {
        let (p, m) = self.split(z)?;
        Ok(p.re + m.re)
    }

    /// Evaluates `G_out` at a point of the closed exterior disk `|w| ≥ 1`.
    pub fn eval_outer(&self, w: Complex64) -> f64 {
        let inv = w.inv();
        let mut p = Complex64::new(0.0, 0.0);
        for k in (1..=self.data.kmax()).rev() {
            p = (p + self.data.get(-(k as i64))) * inv;
        }
        self.data.get(0).re + 2.0 * p.re
    }

    /// Gradient `(g_x, g_y)` packed as `g_x + i g_y`.
    pub fn gradient(&self, z: Complex64) -> Result<Complex64> {
        let w = self.outer_parameter(z)?;
        let inv = w.inv();
        // P'(w) for P(w) = Σ_{k≥1} Ĝ_{-k} w^{-k}
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (1..=self.data.kmax()).rev() {
            dp = dp * inv - k as f64 * self.data.get(-(k as i64));
        }
        dp *= inv * inv;
        let dg = dp / self.droplet.psi_prime(w);
        Ok(2.0 * dg.conj())
    }

    /// `∫_{S^c} |∇g^S|² dm = 2π Σ |k| |Ĝ_k|²` (conformal invariance of the
    /// Dirichlet integral).
    pub fn exterior_dirichlet_energy(&self) -> f64 {
        2.0 * PI * h_half_norm(&self.data)
    }

    /// `∫ g dω^∞` over the boundary: the mean of the boundary data.
    pub fn harmonic_measure_mean(&self) -> f64 {
        self.at_infinity()
    }
}

fn richardson<F: FnMut(f64) -> f64>(mut d: F, h: f64) -> f64 {
    let half = d(0.5 * h);
    2.0 * half - d(h)
}

/// `𝒩(g)(θ) = ∂_n g|_S - ∂_n g^S|_{S^c}` at the boundary point of map
/// parameter θ, by one-sided differences with one Richardson step.
pub fn neumann_jump<F: Fn(Complex64) -> f64>(
    interior: F,
    extension: &HarmonicExtension,
    theta: f64,
) -> Result<f64> {
    let droplet = &extension.droplet;
    let p = droplet.boundary_point(theta);
    let n = droplet.outward_normal(theta);
    let h = 1e-6 * droplet.diameter();
    let g0 = interior(p);
    let inside = richardson(|s| (g0 - interior(p - n * s)) / s, h);
    let w0 = Complex64::from_polar(1.0, theta);
    let e0 = extension.eval_outer(w0);
    let mut failure = None;
    let outside = richardson(
        |s| match extension.droplet.phi(p + n * s) {
            Ok(w) => (extension.eval_outer(w) - e0) / s,
            Err(e) => {
                failure = Some(e.to_string());
                0.0
            }
        },
        h,
    );
    if let Some(msg) = failure {
        return Err(Error::NoRoot(msg));
    }
    Ok(inside - outside)
}

/// Neumann jump of a radial function on a disk: the exterior extension is
/// constant, so the jump is the interior radial derivative at the rim.
pub fn neumann_jump_radial<F: Fn(f64) -> f64>(radius: f64, radial_derivative: F) -> f64 {
    radial_derivative(radius)
}
