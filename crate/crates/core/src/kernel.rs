//! Correlation kernel of the radial Coulomb gas at β = 2.
//!
//! For a radial potential `V(z) = v(|z|)` the monic orthogonal polynomials
//! are the monomials `z^k`, with squared norms
//! `h_k = 2π ∫ r^{2k+1} e^{-n v(r)} dr`, and
//! `K_n(z, w) = Σ_{k<n} (z w̄)^k / h_k`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::fmt_float;
use crate::potential::{equilibrium_droplet, PotentialSpec};
use crate::quad::{integrate_breaks, polar_integral, AngularRule, Tolerance};

/// Drop in the log-integrand beyond which the weight is treated as zero.
const LOG_CUTOFF: f64 = 750.0;

#[derive(Debug, Clone)]
pub struct PlanarKernel {
    pub potential: PotentialSpec,
    pub n: usize,
    /// `ln h_0, …, ln h_{n-1}`.
    pub log_norms: Vec<f64>,
    coefficients: Vec<f64>,
    radius: f64,
}

/// Shape of the radial integrand `(2k+1) ln r - n v(r)`: its mode and an
/// interval outside which it has dropped by more than [`LOG_CUTOFF`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialProfile {
    pub mode: f64,
    pub log_peak: f64,
    pub width: f64,
    pub lo: f64,
    pub hi: f64,
}

pub(crate) fn radial_log_weight(coefficients: &[f64], n: usize, k: usize, r: f64) -> f64 {
    if r == 0.0 {
        return f64::NEG_INFINITY;
    }
    (2 * k + 1) as f64 * r.ln() - n as f64 * PotentialSpec::radial_value(coefficients, r)
}

/// `r v'(r)` and `v''(r)`.
fn radial_derivatives(coefficients: &[f64], r: f64) -> (f64, f64) {
    let s = r * r;
    let (mut d1, mut d2) = (0.0, 0.0);
    for (i, a) in coefficients.iter().enumerate().rev() {
        let j = (i + 1) as f64;
        d1 = d1 * s + 2.0 * j * a;
        d2 = d2 * s + 2.0 * j * (2.0 * j - 1.0) * a;
    }
    (d1 * s, d2)
}

pub(crate) fn radial_profile(coefficients: &[f64], n: usize, k: usize) -> Result<RadialProfile> {
    let nf = n as f64;
    let target = (2 * k + 1) as f64;
    // n r v'(r) = 2k + 1 at the mode
    let g = |r: f64| nf * radial_derivatives(coefficients, r).0 - target;
    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e100 {
            return Err(Error::Quadrature(format!("weight r^{} e^(-n v) is not integrable", 2 * k + 1)));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mode = 0.5 * (lo + hi);
    let curvature = target / (mode * mode) + nf * radial_derivatives(coefficients, mode).1;
    let width = 1.0 / curvature.max(target / (mode * mode)).sqrt();
    let log_peak = radial_log_weight(coefficients, n, k, mode);
    let drop = |r: f64| log_peak - radial_log_weight(coefficients, n, k, r);
    let mut step = width;
    let mut hi = mode + step;
    while drop(hi) < LOG_CUTOFF {
        step *= 2.0;
        hi = mode + step;
    }
    let mut step = width;
    let mut lo = (mode - step).max(0.0);
    while lo > 0.0 && drop(lo) < LOG_CUTOFF {
        step *= 2.0;
        lo = (mode - step).max(0.0);
    }
    Ok(RadialProfile { mode, log_peak, width, lo, hi })
}

fn log_norm(coefficients: &[f64], n: usize, k: usize) -> Result<f64> {
    let p = radial_profile(coefficients, n, k)?;
    let mut breaks = vec![p.lo];
    for t in [-8.0, -3.0, 0.0, 3.0, 8.0] {
        let r = p.mode + t * p.width;
        if r > p.lo && r < p.hi {
            breaks.push(r);
        }
    }
    breaks.push(p.hi);
    let integral = integrate_breaks(
        |r| (radial_log_weight(coefficients, n, k, r) - p.log_peak).exp(),
        &breaks,
        Tolerance::rel(1e-12),
    )?;
    Ok((2.0 * PI).ln() + p.log_peak + integral.ln())
}

/// Builds the kernel of the `n`-point process for a radial potential.
pub fn build_kernel(potential: &PotentialSpec, n: usize) -> Result<PlanarKernel> {
    if n == 0 {
        return Err(Error::Domain("kernel needs n >= 1".into()));
    }
    let (_, eq) = equilibrium_droplet(potential)?;
    let coefficients = eq.coefficients.clone();
    let log_norms = (0..n).map(|k| log_norm(&coefficients, n, k)).collect::<Result<Vec<_>>>()?;
    Ok(PlanarKernel { potential: potential.clone(), n, log_norms, coefficients, radius: eq.radius() })
}

impl PlanarKernel {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Droplet radius.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn weight_exponent(&self, z: Complex64) -> f64 {
        self.n as f64 * PotentialSpec::radial_value(&self.coefficients, z.norm())
    }

    /// `(ln |K|, arg K)` of the (optionally weighted) kernel.
    pub fn eval_log(&self, z: Complex64, w: Complex64, weighted: bool) -> Result<(f64, f64)> {
        let limit = 10.0 * self.radius;
        if z.norm() > limit || w.norm() > limit {
            return Err(Error::Overflow(z.norm().max(w.norm())));
        }
        let p = z * w.conj();
        let (lp, theta) = (p.norm().ln(), p.arg());
        let mag = |k: usize| if k == 0 { -self.log_norms[0] } else { k as f64 * lp - self.log_norms[k] };
        let top = (0..self.n).map(mag).fold(f64::NEG_INFINITY, f64::max);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..self.n {
            let m = mag(k) - top;
            if m > -745.0 {
                sum += Complex64::from_polar(m.exp(), k as f64 * theta);
            }
        }
        let mut log_abs = top + sum.norm().ln();
        if weighted {
            log_abs -= 0.5 * (self.weight_exponent(z) + self.weight_exponent(w));
        }
        Ok((log_abs, sum.arg()))
    }

    /// `K_n(z, w)`, or `𝐊_n(z, w) = K_n(z, w) e^{-n(V(z)+V(w))/2}` when
    /// `weighted`.
    pub fn eval(&self, z: Complex64, w: Complex64, weighted: bool) -> Result<Complex64> {
        let (l, a) = self.eval_log(z, w, weighted)?;
        if l > 709.0 {
            return Err(Error::Overflow(l));
        }
        Ok(Complex64::from_polar(l.exp(), a))
    }

    /// Weighted one-point intensity `𝐊_n(z, z)`.
    pub fn intensity(&self, z: Complex64) -> Result<f64> {
        Ok(self.eval(z, z, true)?.re)
    }

    /// Weighted orthonormal basis `z^k e^{-nV(z)/2} / √h_k`, `k < n`.
    pub fn basis(&self, z: Complex64) -> Vec<Complex64> {
        let half_weight = 0.5 * self.weight_exponent(z);
        let (lr, theta) = (z.norm().ln(), z.arg());
        (0..self.n)
            .map(|k| {
                let l = if k == 0 { 0.0 } else { k as f64 * lr } - 0.5 * self.log_norms[k] - half_weight;
                if l < -745.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(l.exp(), k as f64 * theta)
                }
            })
            .collect()
    }
}

pub fn kernel_eval(kernel: &PlanarKernel, z: Complex64, w: Complex64, weighted: bool) -> Result<Complex64> {
    kernel.eval(z, w, weighted)
}

/// Weighted bulk approximation `(n/π) ∂₁∂₂V(z, w̄) e^{n V(z, w̄)} e^{-n(V(z)+V(w))/2}`
/// built from the polarized potential.
pub fn bulk_approx_eval(kernel: &PlanarKernel, z: Complex64, w: Complex64) -> Complex64 {
    let nf = kernel.n as f64;
    let u = w.conj();
    let pol = kernel.potential.polarized(z, u).expect("kernel potentials are radial");
    let mixed = kernel.potential.polarized_mixed(z, u).expect("kernel potentials are radial");
    let exponent = nf * pol - 0.5 * Complex64::from(kernel.weight_exponent(z) + kernel.weight_exponent(w));
    mixed * (nf / PI) * exponent.exp()
}

/// `(d, ln |𝐊_n(z, z + d·u)|)` along the ray from `z` in direction
/// `u = z/|z|` (`u = 1` at the origin).
pub fn decay_profile(kernel: &PlanarKernel, z: Complex64, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let dir = if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) };
    radii.iter().map(|&d| Ok((d, kernel.eval_log(z, z + dir * d, true)?.0))).collect()
}

/// Residual of the reproducing identity
/// `∫ K(z, ξ) K(ξ, w) e^{-nV(ξ)} dm(ξ) = K(z, w)`, by polar quadrature,
/// relative to `√(K(z, z) K(w, w))`.
pub fn reproducing_residual(kernel: &PlanarKernel, z: Complex64, w: Complex64) -> Result<f64> {
    let kzw = kernel.eval(z, w, false)?;
    let (lzz, _) = kernel.eval_log(z, z, false)?;
    let (lww, _) = kernel.eval_log(w, w, false)?;
    let log_scale = 0.5 * (lzz + lww);
    let integrand = |xi: Complex64| -> Complex64 {
        let (l1, a1) = kernel.eval_log(z, xi, false).expect("inside the validated domain");
        let (l2, a2) = kernel.eval_log(xi, w, false).expect("inside the validated domain");
        let l = l1 + l2 - kernel.weight_exponent(xi) - log_scale;
        Complex64::from_polar(l.exp(), a1 + a2)
    };
    let r_max = outer_radius(kernel);
    let radius = kernel.radius;
    let breaks = [0.0, 0.5 * radius, radius, 0.5 * (radius + r_max), r_max];
    let tol = Tolerance::abs(1e-12);
    let re = polar_integral(|xi| integrand(xi).re, Complex64::new(0.0, 0.0), &breaks, AngularRule::Trapezoid, tol)?;
    let im = polar_integral(|xi| integrand(xi).im, Complex64::new(0.0, 0.0), &breaks, AngularRule::Trapezoid, tol)?;
    Ok((Complex64::new(re, im) - kzw / log_scale.exp()).norm())
}

/// Radius beyond which the weighted diagonal is below `e^{-60}`.
fn outer_radius(kernel: &PlanarKernel) -> f64 {
    let mut r = kernel.radius;
    while kernel.eval_log(Complex64::new(r, 0.0), Complex64::new(r, 0.0), true).is_ok_and(|v| v.0 > -60.0) {
        r += 0.05 * kernel.radius;
    }
    r
}

/// Kernel norms as CSV with columns `k,ln_h`.
pub fn write_norms_csv<W: Write + ?Sized>(out: &mut W, kernel: &PlanarKernel, preamble: Option<&str>) -> Result<()> {
    if let Some(p) = preamble {
        writeln!(out, "# {p}")?;
    }
    writeln!(out, "k,ln_h")?;
    for (k, l) in kernel.log_norms.iter().enumerate() {
        writeln!(out, "{k},{}", fmt_float(*l))?;
    }
    Ok(())
}
