use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, TestFn};
use crate::sampler::Spectrum;

/// Test functions `h: ℂ → ℂ` for the Ward statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WardFn {
    /// `h(z) = z^k`.
    Monomial { k: u32 },
    /// `h(z) = c`.
    Constant { value: Complex64 },
    /// A real test function from the catalog.
    Real { f: TestFn },
}

impl WardFn {
    pub fn value(&self, z: Complex64) -> Complex64 {
        match self {
            WardFn::Monomial { k } => z.powu(*k),
            WardFn::Constant { value } => *value,
            WardFn::Real { f } => Complex64::new(f.value(z), 0.0),
        }
    }

    /// `∂h = (h_x - i h_y)/2`.
    pub fn partial(&self, z: Complex64) -> Complex64 {
        match self {
            WardFn::Monomial { k: 0 } | WardFn::Constant { .. } => Complex64::new(0.0, 0.0),
            WardFn::Monomial { k } => *k as f64 * z.powu(k - 1),
            WardFn::Real { f } => f.partial(z),
        }
    }
}

/// `W = Σ_{j<k} (h(z_j) - h(z_k))/(z_j - z_k) + Σ_j ∂h(z_j) - n Σ_j h(z_j) ∂V(z_j)`,
/// which has mean zero under the Coulomb gas with potential `V`.
pub fn ward_statistic(spectrum: &Spectrum, h: &WardFn, potential: &PotentialSpec) -> Result<Complex64> {
    if !spectrum.has_angles {
        return Err(Error::Domain("the Ward statistic needs full points".into()));
    }
    let z = &spectrum.points;
    let hv: Vec<Complex64> = z.iter().map(|p| h.value(*p)).collect();
    let mut pairs = Complex64::new(0.0, 0.0);
    for j in 0..z.len() {
        for k in 0..j {
            let d = z[j] - z[k];
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::CoincidentPoints(k, j));
            }
            pairs += (hv[j] - hv[k]) / d;
        }
    }
    let nf = spectrum.n as f64;
    let mut local = Complex64::new(0.0, 0.0);
    for (p, hp) in z.iter().zip(&hv) {
        local += h.partial(*p) - nf * hp * potential.partial(*p);
    }
    Ok(pairs + local)
}

/// `Σ_{i≠j} g(z_i) (z̄_i - z̄_j)/(z_i - z_j) e^{-|z_i - z_j|²/δ²}`; pairs of
/// coincident points contribute zero, as the diagonal does.
pub fn isotropy_statistic(spectrum: &Spectrum, g: &TestFn, delta: f64) -> Complex64 {
    let z = &spectrum.points;
    let inv = 1.0 / (delta * delta);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, zi) in z.iter().enumerate() {
        let gi = g.value(*zi);
        if gi == 0.0 {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for (j, zj) in z.iter().enumerate() {
            let d = zi - zj;
            let r2 = d.norm_sqr();
            if i == j || r2 == 0.0 {
                continue;
            }
            let e = (-r2 * inv).exp();
            if e > 0.0 {
                row += d.conj() / d * e;
            }
        }
        acc += gi * row;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{Method, Spectrum};

    fn spectrum(points: Vec<Complex64>) -> Spectrum {
        Spectrum {
            n: points.len(),
            points,
            potential: PotentialSpec::Ginibre,
            seed: 0,
            stream: 0,
            method: Method::GinibreDense,
            has_angles: true,
            acceptance_rate: None,
        }
    }

    #[test]
    fn identity_function_closed_form() {
        // h = z, V = |z|²: W = n(n-1)/2 + n - n Σ|z_j|²
        let pts: Vec<Complex64> = (0..7).map(|k| Complex64::from_polar(0.2 + 0.1 * k as f64, 1.3 * k as f64)).collect();
        let s = spectrum(pts.clone());
        let w = ward_statistic(&s, &WardFn::Monomial { k: 1 }, &PotentialSpec::Ginibre).unwrap();
        let sum: f64 = pts.iter().map(|z| z.norm_sqr()).sum();
        let expected = 21.0 + 7.0 - 7.0 * sum;
        assert!((w.re - expected).abs() < 1e-12 && w.im.abs() < 1e-12);
        let one = spectrum(vec![Complex64::new(0.3, 0.4)]);
        let w1 = ward_statistic(&one, &WardFn::Monomial { k: 1 }, &PotentialSpec::Ginibre).unwrap();
        assert!((w1.re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn coincident_points_are_rejected() {
        let s = spectrum(vec![Complex64::new(0.1, 0.0), Complex64::new(0.1, 0.0)]);
        assert!(matches!(
            ward_statistic(&s, &WardFn::Monomial { k: 2 }, &PotentialSpec::Ginibre),
            Err(Error::CoincidentPoints(0, 1))
        ));
    }

    #[test]
    fn isotropy_single_point_and_rotation() {
        let g = TestFn::CompactBump { center: [0.0, 0.0], radius: 0.5, amplitude: 1.0 };
        assert_eq!(isotropy_statistic(&spectrum(vec![Complex64::new(0.1, 0.0)]), &g, 0.3).norm(), 0.0);
        let pts: Vec<Complex64> = (0..9).map(|k| Complex64::from_polar(0.05 * k as f64, 2.1 * k as f64)).collect();
        let rot = Complex64::from_polar(1.0, 0.77);
        let a = isotropy_statistic(&spectrum(pts.clone()), &g, 0.2);
        let b = isotropy_statistic(&spectrum(pts.iter().map(|z| z * rot).collect()), &g, 0.2);
        assert!((a.norm() - b.norm()).abs() < 1e-12);
    }
}
