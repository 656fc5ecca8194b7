mod common;

use num_complex::Complex64;

use fhlab::moments::{
    fh_rhs_general, fh_rhs_ginibre, linear_stat_variance_prediction, mc_moment, ward_statistic, MomentQuery,
    Singularity, WardFn,
};
use fhlab::potential::{PotentialSpec, TestFn};
use fhlab::sampler::{ginibre_batch, kostlan_batch};
use fhlab::specfun::{origin_moment_asymptotic, origin_moment_exact};
use fhlab::stats::{mean, stderr};
use fhlab::Error;

#[test]
fn exact_origin_moment_matches_gamma_product() {
    for n in [1, 7, 64, 500] {
        for gamma in [0.3, 1.0, 2.5] {
            let lib = origin_moment_exact(n, gamma).unwrap().get();
            let oracle = common::ginibre_origin_moment(n, gamma);
            assert!((lib - oracle).abs() < 1e-9 * (1.0 + oracle.abs()), "n={n} γ={gamma}: {lib} vs {oracle}");
        }
    }
}

#[test]
fn ginibre_rhs_at_origin_is_the_origin_asymptotic() {
    for gamma in [0.5, 1.0, 2.0] {
        let q = MomentQuery::single(Complex64::new(0.0, 0.0), gamma, 300);
        let rhs = fh_rhs_ginibre(&q).unwrap().get();
        let asym = origin_moment_asymptotic(300, gamma).unwrap().get();
        assert!((rhs - asym).abs() < 1e-9, "γ={gamma}: {rhs} vs {asym}");
    }
}

#[test]
fn general_route_agrees_with_ginibre_closed_form() {
    let q = MomentQuery::new(
        vec![
            Singularity { zeta: Complex64::new(0.35, 0.1), gamma: 1.0 },
            Singularity { zeta: Complex64::new(-0.2, -0.3), gamma: 0.5 },
        ],
        TestFn::CompactBump { center: [0.1, 0.0], radius: 0.4, amplitude: 0.7 },
        200,
    );
    let closed = fh_rhs_ginibre(&q).unwrap().get();
    let general = fh_rhs_general(&PotentialSpec::monomial(1, 1.0), &q).unwrap().get();
    assert!((closed - general).abs() < 1e-6, "{closed} vs {general}");
}

#[test]
fn harmonic_linear_statistic_variances() {
    // Var Σ Re z^k → k/2: interior Dirichlet energy k/4 plus boundary k/4.
    for k in 1..=4 {
        let v = linear_stat_variance_prediction(&TestFn::HarmonicRe { k, amplitude: 1.0 }).unwrap();
        assert!((v - k as f64 / 2.0).abs() < 1e-8, "k={k}: {v}");
    }
}

#[test]
fn empty_query_gives_unit_moment() {
    let spectra = kostlan_batch(32, 5, 1);
    let est = mc_moment(&spectra, &MomentQuery::new(vec![], TestFn::Zero, 32)).unwrap();
    assert_eq!(est.log_mean, 0.0);
}

#[test]
fn close_singularities_are_a_hypothesis_error() {
    let q = MomentQuery::new(
        vec![
            Singularity { zeta: Complex64::new(0.0, 0.0), gamma: 1.0 },
            Singularity { zeta: Complex64::new(0.001, 0.0), gamma: 1.0 },
        ],
        TestFn::Zero,
        64,
    );
    let e = fh_rhs_ginibre(&q).unwrap_err();
    assert!(matches!(e, Error::Hypothesis(_)));
    assert_eq!(e.exit_code(), 4);
}

#[test]
fn ward_statistic_has_mean_zero() {
    let spectra = ginibre_batch(48, 600, 21).unwrap();
    for h in [WardFn::Monomial { k: 1 }, WardFn::Monomial { k: 2 }] {
        let w: Vec<Complex64> = spectra.iter().map(|s| ward_statistic(s, &h, &PotentialSpec::Ginibre).unwrap()).collect();
        for part in [w.iter().map(|c| c.re).collect::<Vec<_>>(), w.iter().map(|c| c.im).collect()] {
            let se = stderr(&part);
            assert!(mean(&part).abs() <= 4.0 * se.max(1e-12), "{h:?}: mean {} se {se}", mean(&part));
        }
    }
}
