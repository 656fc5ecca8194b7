use num_complex::Complex64;
use proptest::prelude::*;

use fhlab::field::{
    eval_field, field_max_stat, free_energy_stat, mollified_covariance, thick_points, Centering, GridGeometry,
};
use fhlab::potential::PotentialSpec;
use fhlab::sampler::{Method, Spectrum};
use fhlab::stats::{ks_two_sample, linear_fit, log_mean_exp};

fn spectrum(points: Vec<(f64, f64)>) -> Spectrum {
    let n = points.len();
    Spectrum {
        points: points.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect(),
        potential: PotentialSpec::Ginibre,
        n,
        seed: 0,
        stream: 0,
        method: Method::GinibreDense,
        has_angles: true,
        acceptance_rate: None,
    }
}

fn points() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..1.0f64, 0.0..std::f64::consts::TAU), 4..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thick_point_area_nonincreasing(pts in points(), g1 in 0.0..0.7f64, g2 in 0.0..0.7f64) {
        let s = spectrum(pts);
        let geom = GridGeometry::square(Complex64::new(0.0, 0.0), 0.5, 12);
        let f = eval_field(&s, &geom, &Centering::analytic(&PotentialSpec::Ginibre, &geom, s.n).unwrap()).unwrap();
        let (lo, hi) = if g1 < g2 { (g1, g2) } else { (g2, g1) };
        prop_assert!(thick_points(&f, hi).unwrap() <= thick_points(&f, lo).unwrap());
    }

    #[test]
    fn max_grows_under_refinement(pts in points()) {
        let s = spectrum(pts);
        let c = Complex64::new(0.05, -0.02);
        // Cell centers of a 3m grid contain those of the m grid.
        let coarse = GridGeometry::square(c, 0.4, 5);
        let fine = GridGeometry::square(c, 0.4, 15);
        let mc = field_max_stat(&eval_field(&s, &coarse, &Centering::analytic(&PotentialSpec::Ginibre, &coarse, s.n).unwrap()).unwrap());
        let mf = field_max_stat(&eval_field(&s, &fine, &Centering::analytic(&PotentialSpec::Ginibre, &fine, s.n).unwrap()).unwrap());
        prop_assert!(mf >= mc - 1e-12);
    }

    #[test]
    fn free_energy_brackets_the_maximum(pts in points(), gamma in 0.2..6.0f64) {
        let s = spectrum(pts);
        let geom = GridGeometry::square(Complex64::new(0.0, 0.0), 0.5, 10);
        let f = eval_field(&s, &geom, &Centering::analytic(&PotentialSpec::Ginibre, &geom, s.n).unwrap()).unwrap();
        let ln_n = (s.n as f64).ln();
        let stat = free_energy_stat(&f, gamma).unwrap();
        let max = field_max_stat(&f);
        let lo = max + (s.n as f64 * geom.cell_area()).ln() / (gamma * ln_n);
        let hi = max + (s.n as f64 * geom.area()).ln() / (gamma * ln_n);
        prop_assert!(stat >= lo - 1e-9 && stat <= hi + 1e-9);
    }

    #[test]
    fn field_is_additive(pts in points()) {
        let s = spectrum(pts);
        let geom = GridGeometry::square(Complex64::new(0.0, 0.0), 0.45, 7);
        let zero = Centering::zero(&geom);
        let k = s.n / 2;
        let a = spectrum_from(&s.points[..k]);
        let b = spectrum_from(&s.points[k..]);
        let whole = eval_field(&s, &geom, &zero).unwrap();
        let fa = eval_field(&a, &geom, &zero).unwrap();
        let fb = eval_field(&b, &geom, &zero).unwrap();
        for i in 0..geom.len() {
            if !(whole.jittered.contains(&i) || fa.jittered.contains(&i) || fb.jittered.contains(&i)) {
                prop_assert!((whole.values[i] - fa.values[i] - fb.values[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn mollified_covariance_is_bounded_by_log(d in 1e-4..1.0f64, eps in 0.01..0.2f64) {
        let c = mollified_covariance(d, eps).unwrap();
        prop_assert!(c.is_finite());
        if d >= 2.0 * eps {
            prop_assert!((c + d.ln()).abs() < 1e-12);
        } else {
            prop_assert!(c <= mollified_covariance(0.0, eps).unwrap() + 1e-9);
        }
    }

    #[test]
    fn ks_is_a_symmetric_distance(a in prop::collection::vec(-5.0..5.0f64, 1..60), b in prop::collection::vec(-5.0..5.0f64, 1..60)) {
        let d = ks_two_sample(&a, &b);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!((d - ks_two_sample(&b, &a)).abs() < 1e-15);
        prop_assert!(ks_two_sample(&a, &a) == 0.0);
    }

    #[test]
    fn log_mean_exp_is_shift_equivariant(w in prop::collection::vec(-50.0..50.0f64, 1..50), c in -300.0..300.0f64) {
        let shifted: Vec<f64> = w.iter().map(|x| x + c).collect();
        prop_assert!((log_mean_exp(&shifted) - log_mean_exp(&w) - c).abs() < 1e-9);
    }

    #[test]
    fn linear_fit_recovers_lines(a in -5.0..5.0f64, b in -5.0..5.0f64) {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|t| a * t + b).collect();
        let fit = linear_fit(&x, &y);
        prop_assert!((fit.slope - a).abs() < 1e-9 && (fit.intercept - b).abs() < 1e-9);
    }
}

fn spectrum_from(points: &[Complex64]) -> Spectrum {
    let mut s = spectrum(vec![]);
    s.points = points.to_vec();
    s.n = points.len();
    s
}
