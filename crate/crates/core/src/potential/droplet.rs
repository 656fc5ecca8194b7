use std::f64::consts::PI;

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PotentialSpec;
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, integrate_breaks, Tolerance};

/// Geometry of a droplet.
///
/// `ExteriorMap { coefficients }` lists `c_1, c_0, c_{-1}, …, c_{-m}` of the
/// exterior map `ψ(w) = c_1 w + c_0 + Σ_k c_{-k} w^{-k}` from `|w| > 1` onto
/// the complement of the droplet; `c_1` is real and positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DropletShape {
    Disk { radius: f64 },
    ExteriorMap { coefficients: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Droplet {
    #[serde(flatten)]
    pub shape: DropletShape,
    pub capacity_log: f64,
}

impl Droplet {
    pub fn disk(radius: f64) -> Result<Self> {
        if radius > 0.0 && radius.is_finite() {
            Ok(Self { shape: DropletShape::Disk { radius }, capacity_log: radius.ln() })
        } else {
            Err(Error::Domain(format!("disk radius must be positive, got {radius}")))
        }
    }

    /// Droplet bounded by the image of the unit circle under `ψ`. Requires
    /// `Σ_k k |c_{-k}| < c_1`, which makes `ψ` univalent on `|w| > 1`.
    pub fn exterior_map(coefficients: Vec<Complex64>) -> Result<Self> {
        let c1 = coefficients.first().copied().unwrap_or_default();
        if !(c1.im == 0.0 && c1.re > 0.0) {
            return Err(Error::Domain(format!("leading map coefficient must be real and positive, got {c1}")));
        }
        let tail: f64 = coefficients
            .iter()
            .skip(2)
            .enumerate()
            .map(|(k, c)| (k + 1) as f64 * c.norm())
            .sum();
        if tail >= c1.re {
            return Err(Error::Domain(format!(
                "exterior map is not univalent: Σ k|c_(-k)| = {tail} >= c_1 = {}",
                c1.re
            )));
        }
        let capacity_log = c1.re.ln();
        Ok(Self { shape: DropletShape::ExteriorMap { coefficients }, capacity_log })
    }

    /// Filled ellipse with semi-axes `a ≥ b` along the coordinate axes.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a >= b && b > 0.0) {
            return Err(Error::Domain(format!("ellipse needs a >= b > 0, got ({a}, {b})")));
        }
        Self::exterior_map(vec![
            Complex64::new(0.5 * (a + b), 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5 * (a - b), 0.0),
        ])
    }

    /// Exterior map `ψ(w)`.
    pub fn psi(&self, w: Complex64) -> Complex64 {
        match &self.shape {
            DropletShape::Disk { radius } => w * radius,
            DropletShape::ExteriorMap { coefficients } => {
                let inv = w.inv();
                let mut acc = Complex64::new(0.0, 0.0);
                for c in coefficients.iter().skip(1).rev() {
                    acc = acc * inv + c;
                }
                coefficients[0] * w + acc
            }
        }
    }

    /// `ψ'(w)`.
    pub fn psi_prime(&self, w: Complex64) -> Complex64 {
        match &self.shape {
            DropletShape::Disk { radius } => Complex64::new(*radius, 0.0),
            DropletShape::ExteriorMap { coefficients } => {
                let inv = w.inv();
                let mut acc = Complex64::new(0.0, 0.0);
                let mut p = inv * inv;
                for (k, c) in coefficients.iter().enumerate().skip(2) {
                    acc -= (k - 1) as f64 * c * p;
                    p *= inv;
                }
                coefficients[0] + acc
            }
        }
    }

    /// Center of the map, `c_0` (the origin for disks).
    pub fn center(&self) -> Complex64 {
        match &self.shape {
            DropletShape::Disk { .. } => Complex64::new(0.0, 0.0),
            DropletShape::ExteriorMap { coefficients } => {
                coefficients.get(1).copied().unwrap_or_default()
            }
        }
    }

    /// `φ = ψ^{-1}` for `z` outside the closed droplet, by damped Newton.
    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        match &self.shape {
            DropletShape::Disk { radius } => Ok(z / radius),
            DropletShape::ExteriorMap { coefficients } => {
                let c1 = coefficients[0].re;
                let mut w = (z - self.center()) / c1;
                if w.norm() < 1.05 {
                    w = w.unscale(w.norm().max(1e-300)) * 1.05;
                }
                let mut res = self.psi(w) - z;
                for _ in 0..100 {
                    if res.norm() <= 1e-14 * (1.0 + z.norm()) {
                        return Ok(w);
                    }
                    let dw = res / self.psi_prime(w);
                    let mut t = 1.0;
                    loop {
                        let cand = w - dw * t;
                        let r = self.psi(cand) - z;
                        if r.norm() < res.norm() || t < 1e-6 {
                            w = cand;
                            res = r;
                            break;
                        }
                        t *= 0.5;
                    }
                }
                if res.norm() <= 1e-10 * (1.0 + z.norm()) {
                    Ok(w)
                } else {
                    Err(Error::NoRoot(format!("inverse exterior map did not converge at {z}")))
                }
            }
        }
    }

    /// Boundary point with map parameter θ, `ψ(e^{iθ})`.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        self.psi(Complex64::from_polar(1.0, theta))
    }

    /// Outward unit normal at map parameter θ.
    pub fn outward_normal(&self, theta: f64) -> Complex64 {
        let w = Complex64::from_polar(1.0, theta);
        let n = w * self.psi_prime(w);
        n / n.norm()
    }

    /// Maximum distance from the center to the boundary.
    pub fn outer_radius(&self) -> f64 {
        match &self.shape {
            DropletShape::Disk { radius } => *radius,
            DropletShape::ExteriorMap { .. } => {
                let c = self.center();
                (0..1024)
                    .map(|i| (self.boundary_point(2.0 * PI * i as f64 / 1024.0) - c).norm())
                    .fold(0.0, f64::max)
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.shape {
            DropletShape::Disk { radius } => 2.0 * radius,
            DropletShape::ExteriorMap { .. } => {
                let pts: Vec<Complex64> =
                    (0..256).map(|i| self.boundary_point(2.0 * PI * i as f64 / 256.0)).collect();
                let mut d: f64 = 0.0;
                for a in &pts {
                    for b in &pts {
                        d = d.max((a - b).norm());
                    }
                }
                d
            }
        }
    }
}

/// Equilibrium measure of a radial potential: density `ΔV/(4π)` on the
/// centered disk of radius `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumMeasure {
    pub droplet: Droplet,
    pub coefficients: Vec<f64>,
}

impl EquilibriumMeasure {
    pub fn radius(&self) -> f64 {
        match self.droplet.shape {
            DropletShape::Disk { radius } => radius,
            DropletShape::ExteriorMap { .. } => unreachable!("radial measures live on disks"),
        }
    }

    /// `ρ_V(r) = Δv(r) / (4π)` inside the droplet, zero outside.
    pub fn density(&self, r: f64) -> f64 {
        if r > self.radius() {
            0.0
        } else {
            PotentialSpec::radial_laplacian(&self.coefficients, r) / (4.0 * PI)
        }
    }

    /// Radial mass density `2πr ρ_V(r) = 2 Σ k² a_k r^{2k-1}`.
    pub fn radial_density(&self, r: f64) -> f64 {
        2.0 * PI * r * self.density(r)
    }

    /// `μ_V(B(0, r)) = Σ k a_k r^{2k}` for `r ≤ R`.
    pub fn cumulative(&self, r: f64) -> f64 {
        cumulative_mass(&self.coefficients, r.min(self.radius()))
    }

    /// `L(r) = ln(Δv(r)/4)`.
    pub fn log_density_factor(&self, r: f64) -> f64 {
        (PotentialSpec::radial_laplacian(&self.coefficients, r) / 4.0).ln()
    }

    /// `L^S(∞)`: the exterior harmonic extension of `L` is the constant `L(R)`.
    pub fn log_density_factor_at_infinity(&self) -> f64 {
        self.log_density_factor(self.radius())
    }

    /// Total mass by quadrature; 1 up to quadrature error.
    pub fn total_mass(&self) -> Result<f64> {
        integrate_breaks(|r| self.radial_density(r), &[0.0, self.radius()], Tolerance::rel(1e-13))
    }

    /// `∫ ln|ζ - z| dμ_V(z)` by quadrature of the shell reduction
    /// `∫ ln max(|ζ|, r) dμ_V(r)`.
    pub fn eq_log_potential(&self, zeta: Complex64) -> Result<f64> {
        let rho = zeta.norm();
        let r_max = self.radius();
        if rho >= r_max {
            let mass = self.total_mass()?;
            return Ok(rho.ln() * mass);
        }
        let inner = if rho > 0.0 { rho.ln() * self.cumulative(rho) } else { 0.0 };
        let outer = integrate_breaks(
            |r| r.ln() * self.radial_density(r),
            &[rho, r_max],
            Tolerance::abs(1e-13),
        )?;
        Ok(inner + outer)
    }

    /// Closed form of [`Self::eq_log_potential`] from
    /// `∫ r^{2k-1} ln r dr = r^{2k} (ln r/(2k) - 1/(4k²))`.
    pub fn eq_log_potential_closed_form(&self, zeta: Complex64) -> f64 {
        let rho = zeta.norm();
        let r_max = self.radius();
        if rho >= r_max {
            return rho.ln();
        }
        let anti = |r: f64| -> f64 {
            if r == 0.0 {
                return 0.0;
            }
            let lr = r.ln();
            self.coefficients
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let k = (i + 1) as f64;
                    2.0 * k * k * a * r.powf(2.0 * k) * (lr / (2.0 * k) - 1.0 / (4.0 * k * k))
                })
                .sum()
        };
        let inner = if rho > 0.0 { rho.ln() * self.cumulative(rho) } else { 0.0 };
        inner + anti(r_max) - anti(rho)
    }
}

fn cumulative_mass(coefficients: &[f64], r: f64) -> f64 {
    let s = r * r;
    let mut acc = 0.0;
    for (i, a) in coefficients.iter().enumerate().rev() {
        acc = (acc + (i + 1) as f64 * a) * s;
    }
    acc
}

/// Droplet and equilibrium measure of a radial potential.
pub fn equilibrium_droplet(potential: &PotentialSpec) -> Result<(Droplet, EquilibriumMeasure)> {
    potential.validate()?;
    let coefficients = potential
        .radial_coefficients()
        .ok_or_else(|| Error::Domain("equilibrium droplets are computed for radial potentials only".into()))?;
    let mass = |r: f64| cumulative_mass(&coefficients, r);
    let mut hi = 1.0;
    while mass(hi) < 1.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::NoRoot("normalization of the equilibrium measure has no solution".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if mass(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    for j in 1..=256 {
        let r = radius * j as f64 / 256.0;
        if PotentialSpec::radial_laplacian(&coefficients, r) <= 0.0 {
            return Err(Error::NoRoot(format!(
                "Laplacian of the potential is not positive at r = {r}; the droplet is not a disk"
            )));
        }
    }
    let droplet = Droplet::disk(radius)?;
    Ok((droplet.clone(), EquilibriumMeasure { droplet, coefficients }))
}

/// `𝔰 = ln cap(S̄)`.
pub fn capacity(droplet: &Droplet) -> f64 {
    match &droplet.shape {
        DropletShape::Disk { radius } => radius.ln(),
        DropletShape::ExteriorMap { coefficients } => coefficients[0].re.ln(),
    }
}

/// `∫_0^ℓ ln|p - (a + t u)| dt` for the segment from `a` with unit
/// direction `u` and length `ℓ`.
fn segment_log_integral(p: Complex64, a: Complex64, u: Complex64, len: f64) -> f64 {
    let d = (p - a) * u.conj();
    let s0 = d.re;
    let h = d.im.abs();
    let anti = |x: f64| -> f64 {
        let q = x * x + h * h;
        let log_part = if q > 0.0 { 0.5 * x * q.ln() } else { 0.0 };
        let atan_part = if h > 0.0 { h * (x / h).atan() } else { 0.0 };
        log_part - x + atan_part
    };
    anti(len - s0) - anti(-s0)
}

/// Logarithmic capacity by minimizing the discrete energy
/// `I(μ) = ∬ ln(1/|z - w|) dμ dμ` over measures with piecewise-constant
/// density on a `points`-gon inscribed in the boundary.
pub fn capacity_energy_estimate(droplet: &Droplet, points: usize) -> Result<f64> {
    let m = points;
    let verts: Vec<Complex64> =
        (0..m).map(|i| droplet.boundary_point(2.0 * PI * i as f64 / m as f64)).collect();
    // Rescale so the kernel is positive definite (capacity below one).
    let scale = 2.0 * droplet.diameter();
    let verts: Vec<Complex64> = verts.iter().map(|v| v / scale).collect();
    let (gx, gw) = gauss_legendre(16);
    let edges: Vec<(Complex64, Complex64, f64)> = (0..m)
        .map(|i| {
            let a = verts[i];
            let b = verts[(i + 1) % m];
            let len = (b - a).norm();
            (a, (b - a) / len, len)
        })
        .collect();
    let a = Mat::<f64>::from_fn(m, m, |i, j| {
        let (ai, ui, li) = edges[i];
        let (aj, uj, lj) = edges[j];
        if i == j {
            return -li.ln() + 1.5;
        }
        let mut acc = 0.0;
        for (x, w) in gx.iter().zip(&gw) {
            let t = 0.5 * li * (x + 1.0);
            acc += w * segment_log_integral(ai + ui * t, aj, uj, lj);
        }
        -0.5 * acc / lj
    });
    let ones = Mat::<f64>::from_fn(m, 1, |_, _| 1.0);
    let llt = a
        .llt(Side::Lower)
        .map_err(|e| Error::NotPositiveDefinite(format!("energy matrix: {e:?}")))?;
    let x = llt.solve(&ones);
    let denom: f64 = (0..m).map(|i| x[(i, 0)]).sum();
    Ok(-1.0 / denom + scale.ln())
}

/// Density of the harmonic measure at infinity with respect to the map
/// parameter θ: the uniform density `1/(2π)`.
pub fn harmonic_measure_density(_droplet: &Droplet, _theta: f64) -> f64 {
    1.0 / (2.0 * PI)
}

/// Density of the harmonic measure at infinity with respect to arclength at
/// the boundary point of map parameter θ: `1 / (2π |ψ'(e^{iθ})|)`.
pub fn harmonic_measure_arclength_density(droplet: &Droplet, theta: f64) -> f64 {
    let w = Complex64::from_polar(1.0, theta);
    1.0 / (2.0 * PI * droplet.psi_prime(w).norm())
}

/// `|∫ ln|z - ζ| dω^∞(z) - 𝔰|` for ζ in the closed droplet, where the
/// identity holds exactly.
pub fn poisson_jensen_residual(droplet: &Droplet, zeta: Complex64) -> Result<f64> {
    let v = crate::quad::integrate(
        |t| (droplet.boundary_point(t) - zeta).norm().ln() * harmonic_measure_density(droplet, t),
        0.0,
        2.0 * PI,
        Tolerance::abs(1e-13),
    )?;
    Ok((v - capacity(droplet)).abs())
}
