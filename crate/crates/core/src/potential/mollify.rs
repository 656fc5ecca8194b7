use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, Tolerance};

/// The radial bump `χ(t) = exp(-1/(1 - t²))` for `t < 1`, zero otherwise.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// Mollification scale for `log_ε = log|·| * χ_ε / ‖χ_ε‖₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifierParams {
    pub epsilon: f64,
}

impl MollifierParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon.is_finite() {
            Ok(Self { epsilon })
        } else {
            Err(Error::Domain(format!("mollifier scale must be positive, got {epsilon}")))
        }
    }
}

fn bump_mass() -> f64 {
    static M: OnceLock<f64> = OnceLock::new();
    *M.get_or_init(|| {
        integrate_breaks(|t| bump(t) * t, &[0.0, 1.0], Tolerance::rel(1e-14))
            .expect("bump mass quadrature")
    })
}

/// `c_χ = ∫ log|u| χ(u) dm(u) / ∫ χ dm`, so that `log_ε(0) = ln ε + c_χ`.
pub fn mollifier_log_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let num = integrate_breaks(|t| t.ln() * bump(t) * t, &[0.0, 1.0], Tolerance::rel(1e-14))
            .expect("bump log-moment quadrature");
        num / bump_mass()
    })
}

/// `log_ε(z)`: the logarithm convolved with the normalized bump at scale ε.
///
/// Equal to `ln|z|` for `|z| ≥ ε`. Inside, the convolution of a radial
/// measure with `ln|·|` reduces to a one-dimensional shell integral
/// `∫ ln max(|z|, s) χ_ε(s) 2πs ds`.
pub fn mollified_log(params: MollifierParams, z: Complex64) -> f64 {
    let eps = params.epsilon;
    let r = z.norm();
    if r >= eps {
        return r.ln();
    }
    let t = r / eps;
    // In units of ε: ∫_0^1 ln max(t, s) χ(s) s ds / ∫ χ s ds
    let inner = integrate_breaks(|s| bump(s) * s, &[0.0, t], Tolerance::abs(1e-15))
        .expect("bump partial mass");
    let outer = integrate_breaks(|s| s.ln() * bump(s) * s, &[t, 1.0], Tolerance::abs(1e-15))
        .expect("bump partial log-moment");
    let ln_t_part = if t > 0.0 { t.ln() * inner } else { 0.0 };
    eps.ln() + (ln_t_part + outer) / bump_mass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{polar_integral, AngularRule};

    fn params(eps: f64) -> MollifierParams {
        MollifierParams::new(eps).unwrap()
    }

    #[test]
    fn exact_outside_the_ball() {
        let z = Complex64::new(0.2, 0.0);
        assert_eq!(mollified_log(params(0.1), z), 0.2f64.ln());
        assert_eq!(mollified_log(params(0.1), Complex64::new(0.06, 0.08)), 0.1f64.ln());
    }

    #[test]
    fn value_at_origin() {
        for eps in [0.01, 0.3, 2.0] {
            let v = mollified_log(params(eps), Complex64::new(0.0, 0.0));
            assert!((v - eps.ln() - mollifier_log_constant()).abs() < 1e-12);
        }
        // independent 2D quadrature of c_χ
        let num = polar_integral(
            |u| if u.norm() < 1.0 { u.norm().ln() * bump(u.norm()) } else { 0.0 },
            Complex64::new(0.0, 0.0),
            &[0.0, 1.0],
            AngularRule::Trapezoid,
            Tolerance::abs(1e-13),
        )
        .unwrap();
        let den = polar_integral(
            |u| bump(u.norm()),
            Complex64::new(0.0, 0.0),
            &[0.0, 1.0],
            AngularRule::Trapezoid,
            Tolerance::abs(1e-13),
        )
        .unwrap();
        assert!((num / den - mollifier_log_constant()).abs() < 1e-10);
    }

    #[test]
    fn matches_two_dimensional_convolution() {
        let eps = 0.2;
        for &r in &[0.0, 0.05, 0.11, 0.19] {
            let z = Complex64::new(r * 0.6, r * 0.8);
            // ∫ ln|z - u| χ_ε(u) dm(u), polar around the origin with the
            // singular radius as a breakpoint
            let mut breaks = vec![0.0, eps];
            if r > 0.0 {
                breaks.insert(1, r);
            }
            let num = polar_integral(
                |u| bump(u.norm() / eps) * (z - u).norm().ln(),
                Complex64::new(0.0, 0.0),
                &breaks,
                AngularRule::Adaptive,
                Tolerance::abs(1e-12),
            )
            .unwrap();
            let den = polar_integral(
                |u| bump(u.norm() / eps),
                Complex64::new(0.0, 0.0),
                &[0.0, eps],
                AngularRule::Trapezoid,
                Tolerance::abs(1e-14),
            )
            .unwrap();
            let v = mollified_log(params(eps), z);
            assert!((v - num / den).abs() < 1e-8, "r = {r}: {v} vs {}", num / den);
        }
    }

    #[test]
    fn dominates_log_and_decreases_with_epsilon() {
        let z = Complex64::new(0.03, -0.01);
        let mut prev = f64::INFINITY;
        for eps in [0.5, 0.2, 0.1, 0.05, 0.02, 0.01] {
            let v = mollified_log(params(eps), z);
            assert!(v >= z.norm().ln() - 1e-14);
            assert!(v <= prev + 1e-14);
            prev = v;
        }
        assert_eq!(prev, z.norm().ln());
    }
}
