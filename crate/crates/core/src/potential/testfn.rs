use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mollify::bump;

/// Real test functions with analytic gradient and Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestFn {
    Zero,
    Constant {
        value: f64,
    },
    /// `a · Re z^k`.
    HarmonicRe {
        k: u32,
        amplitude: f64,
    },
    /// `a · exp(-|z - c|² / (2τ²))`.
    GaussianBump {
        center: [f64; 2],
        scale: f64,
        amplitude: f64,
    },
    /// `a · χ(|z - c| / ρ)` with the compactly supported bump `χ`.
    CompactBump {
        center: [f64; 2],
        radius: f64,
        amplitude: f64,
    },
    Sum {
        terms: Vec<TestFn>,
    },
}

fn center(c: &[f64; 2]) -> Complex64 {
    Complex64::new(c[0], c[1])
}

/// `F(s) = exp(-1/(1-s))` and its first two derivatives in `s`.
fn bump_profile(s: f64) -> (f64, f64, f64) {
    if s >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let u = 1.0 - s;
    let f = (-1.0 / u).exp();
    let u2 = u * u;
    let fs = -f / u2;
    let fss = f / (u2 * u2) - 2.0 * f / (u2 * u);
    (f, fs, fss)
}

impl TestFn {
    pub fn value(&self, z: Complex64) -> f64 {
        match self {
            TestFn::Zero => 0.0,
            TestFn::Constant { value } => *value,
            TestFn::HarmonicRe { k, amplitude } => amplitude * z.powu(*k).re,
            TestFn::GaussianBump { center: c, scale, amplitude } => {
                amplitude * (-(z - center(c)).norm_sqr() / (2.0 * scale * scale)).exp()
            }
            TestFn::CompactBump { center: c, radius, amplitude } => {
                amplitude * bump((z - center(c)).norm() / radius)
            }
            TestFn::Sum { terms } => terms.iter().map(|t| t.value(z)).sum(),
        }
    }

    /// Gradient `(f_x, f_y)` packed as `f_x + i f_y`.
    pub fn gradient(&self, z: Complex64) -> Complex64 {
        match self {
            TestFn::Zero | TestFn::Constant { .. } => Complex64::new(0.0, 0.0),
            TestFn::HarmonicRe { k, amplitude } => {
                // f_x - i f_y = a k z^{k-1}
                (*amplitude * *k as f64 * z.powu(k - 1)).conj()
            }
            TestFn::GaussianBump { center: c, scale, .. } => {
                let d = z - center(c);
                -self.value(z) * d / (scale * scale)
            }
            TestFn::CompactBump { center: c, radius, amplitude } => {
                let d = z - center(c);
                let (_, fs, _) = bump_profile(d.norm_sqr() / (radius * radius));
                amplitude * fs * 2.0 * d / (radius * radius)
            }
            TestFn::Sum { terms } => terms.iter().map(|t| t.gradient(z)).sum(),
        }
    }

    /// `∂f = (f_x - i f_y) / 2`.
    pub fn partial(&self, z: Complex64) -> Complex64 {
        0.5 * self.gradient(z).conj()
    }

    pub fn laplacian(&self, z: Complex64) -> f64 {
        match self {
            TestFn::Zero | TestFn::Constant { .. } | TestFn::HarmonicRe { .. } => 0.0,
            TestFn::GaussianBump { center: c, scale, .. } => {
                let t2 = scale * scale;
                self.value(z) * ((z - center(c)).norm_sqr() / (t2 * t2) - 2.0 / t2)
            }
            TestFn::CompactBump { center: c, radius, amplitude } => {
                let r2 = radius * radius;
                let s = (z - center(c)).norm_sqr() / r2;
                let (_, fs, fss) = bump_profile(s);
                amplitude * 4.0 / r2 * (s * fss + fs)
            }
            TestFn::Sum { terms } => terms.iter().map(|t| t.laplacian(z)).sum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TestFn::Zero => true,
            TestFn::Constant { value } => *value == 0.0,
            TestFn::HarmonicRe { amplitude, .. }
            | TestFn::GaussianBump { amplitude, .. }
            | TestFn::CompactBump { amplitude, .. } => *amplitude == 0.0,
            TestFn::Sum { terms } => terms.iter().all(TestFn::is_zero),
        }
    }

    /// True when `f(z)` depends only on `|z|`.
    pub fn is_radial(&self) -> bool {
        match self {
            TestFn::Zero | TestFn::Constant { .. } => true,
            TestFn::HarmonicRe { amplitude, .. } => *amplitude == 0.0,
            TestFn::GaussianBump { center, .. } | TestFn::CompactBump { center, .. } => {
                center[0] == 0.0 && center[1] == 0.0
            }
            TestFn::Sum { terms } => terms.iter().all(TestFn::is_radial),
        }
    }

    /// Smallest length scale of the function, if it has one.
    pub fn length_scale(&self) -> Option<f64> {
        match self {
            TestFn::GaussianBump { scale, .. } => Some(*scale),
            TestFn::CompactBump { radius, .. } => Some(*radius),
            TestFn::Sum { terms } => terms
                .iter()
                .filter_map(TestFn::length_scale)
                .min_by(f64::total_cmp),
            _ => None,
        }
    }

    /// Radii across which the function changes character (support edges),
    /// used as quadrature breakpoints. Relative to the origin.
    pub fn radial_breakpoints(&self) -> Vec<f64> {
        match self {
            TestFn::GaussianBump { center: c, scale, .. } => {
                let d = center(c).norm();
                vec![(d - 6.0 * scale).max(0.0), d, d + 6.0 * scale]
            }
            TestFn::CompactBump { center: c, radius, .. } => {
                let d = center(c).norm();
                vec![(d - radius).max(0.0), d, d + radius]
            }
            TestFn::Sum { terms } => terms.iter().flat_map(TestFn::radial_breakpoints).collect(),
            _ => Vec::new(),
        }
    }
}
