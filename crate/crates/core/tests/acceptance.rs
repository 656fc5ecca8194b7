//! Desk-scale acceptance checks. Each test prints one PASS/FAIL line and
//! asserts its own tolerance. Large Ginibre batches are shared.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use common::{ginibre_origin_moment, log_modulus_variance, report, square_chaos_variance};
use fhlab::field::{
    analytic_square_mass_variance, eval_field, field_max_stat, free_energy_stat, freezing_limit, matrix_gmc_measure,
    thick_points, Centering, FieldGrid, GridGeometry, ReferenceGmc,
};
use fhlab::kernel::{build_kernel, bulk_approx_eval, decay_profile, kernel_eval, reproducing_residual};
use fhlab::moments::{fh_rhs_ginibre, mc_moment, ward_statistic, MomentQuery, Singularity, WardFn};
use fhlab::potential::{
    brownian_hitting_estimate, capacity, capacity_energy_estimate, poisson_jensen_residual, Droplet, PotentialSpec,
    TestFn,
};
use fhlab::sampler::{dpp_batch, ginibre_batch, kostlan_batch, mala_chain, radial_moduli_batch, MalaOptions, Spectrum};
use fhlab::specfun::{origin_moment_asymptotic, origin_moment_exact};
use fhlab::stats::{
    batch_means_stderr, ks_one_sample, ks_two_sample, linear_fit, mean, median, stderr, variance, variance_stderr,
};

fn init() {
    faer::set_global_parallelism(faer::Par::Seq);
}

fn shared(cell: &'static OnceLock<Vec<Spectrum>>, n: usize, count: usize, seed: u64) -> &'static [Spectrum] {
    cell.get_or_init(|| {
        init();
        ginibre_batch(n, count, seed).expect("dense Ginibre batch")
    })
}

fn batch64() -> &'static [Spectrum] {
    static B: OnceLock<Vec<Spectrum>> = OnceLock::new();
    shared(&B, 64, 5000, 64)
}

fn batch128() -> &'static [Spectrum] {
    static B: OnceLock<Vec<Spectrum>> = OnceLock::new();
    shared(&B, 128, 2000, 128)
}

fn batch256() -> &'static [Spectrum] {
    static B: OnceLock<Vec<Spectrum>> = OnceLock::new();
    shared(&B, 256, 5000, 256)
}

fn batch512() -> &'static [Spectrum] {
    static B: OnceLock<Vec<Spectrum>> = OnceLock::new();
    shared(&B, 512, 2000, 512)
}

fn batch1024() -> &'static [Spectrum] {
    static B: OnceLock<Vec<Spectrum>> = OnceLock::new();
    shared(&B, 1024, 50, 1024)
}

/// The largest square inside |z| ≤ 0.9, at 256² nodes.
fn bulk_square() -> GridGeometry {
    GridGeometry::square(Complex64::new(0.0, 0.0), 0.9 * FRAC_1_SQRT_2, 256)
}

fn fields(spectra: &[Spectrum], n: usize) -> Vec<FieldGrid> {
    let g = bulk_square();
    let c = Centering::analytic(&PotentialSpec::Ginibre, &g, n).unwrap();
    spectra.iter().map(|s| eval_field(s, &g, &c).unwrap()).collect()
}

fn fields1024() -> &'static [FieldGrid] {
    static F: OnceLock<Vec<FieldGrid>> = OnceLock::new();
    F.get_or_init(|| fields(batch1024(), 1024))
}

#[test]
fn origin_moment_exact_vs_asymptotic() {
    let n = 1000;
    let mut worst: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    for gamma in [0.5, 1.0, 2.0] {
        let exact = origin_moment_exact(n, gamma).unwrap().get();
        let asym = origin_moment_asymptotic(n, gamma).unwrap().get();
        worst = worst.max((exact - asym).exp_m1().abs());
        oracle_gap = oracle_gap.max((exact - ginibre_origin_moment(n, gamma)).abs());
    }
    let pass = worst <= 5.0 / n as f64 && oracle_gap < 1e-8;
    report(1, "origin moment exact vs asymptotic", pass, &format!("max |ratio - 1| = {worst:.3e} (bound {:.1e}), exact vs oracle {oracle_gap:.1e}", 5.0 / n as f64));
    assert!(pass);
}

#[test]
fn origin_moment_monte_carlo_vs_exact() {
    let n = 64;
    let spectra = kostlan_batch(n, 20_000, 2);
    let mc = mc_moment(&spectra, &MomentQuery::single(Complex64::new(0.0, 0.0), 1.0, n)).unwrap();
    let exact = ginibre_origin_moment(n, 1.0);
    let z = (mc.log_mean - exact).abs() / mc.rel_stderr;
    let pass = z <= 3.0;
    report(2, "origin moment Monte Carlo vs exact", pass, &format!("ln mc {:.5} ± {:.5}, exact {exact:.5}, |z| = {z:.2}", mc.log_mean, mc.rel_stderr));
    assert!(pass);
}

fn moment_ratio(spectra: &[Spectrum], q: &MomentQuery) -> (f64, f64) {
    let mc = mc_moment(spectra, q).unwrap();
    ((mc.log_mean - fh_rhs_ginibre(q).unwrap().get()).exp(), mc.rel_stderr)
}

#[test]
fn off_origin_moment_ratio() {
    let zeta = Complex64::new(0.5, 0.0);
    let (r256, se256) = moment_ratio(batch256(), &MomentQuery::single(zeta, 1.0, 256));
    let (r64, _) = moment_ratio(batch64(), &MomentQuery::single(zeta, 1.0, 64));
    let pass = (0.85..=1.15).contains(&r256) && (r256 - 1.0).abs() < (r64 - 1.0).abs();
    report(3, "off-origin moment ratio", pass, &format!("ratio n=256 {r256:.4} (± {se256:.4}), n=64 {r64:.4}"));
    assert!(pass);
}

#[test]
fn cross_singularity_factor() {
    let n = 256;
    let (a, b) = (Complex64::new(0.3, 0.0), Complex64::new(-0.3, 0.0));
    let spectra = batch256();
    let single = |z| mc_moment(spectra, &MomentQuery::single(z, 1.0, n)).unwrap().log_mean;
    let joint = MomentQuery::new(
        vec![Singularity { zeta: a, gamma: 1.0 }, Singularity { zeta: b, gamma: 1.0 }],
        TestFn::Zero,
        n,
    );
    let ratio = (mc_moment(spectra, &joint).unwrap().log_mean - single(a) - single(b)).exp();
    let target = (a - b).norm().powf(-0.5);
    let rel = (ratio / target - 1.0).abs();
    let pass = rel <= 0.15;
    report(4, "cross-singularity factor", pass, &format!("joint/(single·single) = {ratio:.4}, |Δζ|^(-1/2) = {target:.4}, rel err {rel:.3}"));
    assert!(pass);
}

#[test]
fn ward_identity_mean_zero() {
    let spectra = &batch128()[..2000];
    let fns = [
        WardFn::Monomial { k: 1 },
        WardFn::Monomial { k: 2 },
        WardFn::Real { f: TestFn::CompactBump { center: [0.0, 0.0], radius: 0.5, amplitude: 1.0 } },
    ];
    let mut worst: f64 = 0.0;
    for h in &fns {
        let w: Vec<Complex64> = spectra.iter().map(|s| ward_statistic(s, h, &PotentialSpec::Ginibre).unwrap()).collect();
        for part in [w.iter().map(|c| c.re).collect::<Vec<_>>(), w.iter().map(|c| c.im).collect()] {
            let se = stderr(&part);
            let m = mean(&part);
            if se > 0.0 {
                worst = worst.max(m.abs() / se);
            } else {
                assert!(m.abs() < 1e-9, "zero spread with nonzero mean {m}");
            }
        }
    }
    let pass = worst <= 3.0;
    report(5, "Ward identity", pass, &format!("max |mean|/stderr over h and Re/Im = {worst:.2}"));
    assert!(pass);
}

#[test]
fn linear_statistic_variance() {
    let stats: Vec<f64> = batch512().iter().map(|s| s.points.iter().map(|z| z.re).sum()).collect();
    // Σ Re z_k = Re Tr M, a centered Gaussian with variance 1/2.
    let v = variance(&stats);
    let pass = (v / 0.5 - 1.0).abs() <= 0.1;
    report(6, "linear statistic variance", pass, &format!("Var Σ Re z = {v:.4} ± {:.4}, target 0.5", variance_stderr(&stats)));
    assert!(pass);
}

#[test]
fn log_modulus_clt() {
    let n = 2048;
    let sums: Vec<f64> = kostlan_batch(n, 20_000, 7)
        .iter()
        .map(|s| s.log_abs_char_poly(Complex64::new(0.0, 0.0)))
        .collect();
    let v = variance(&sums);
    let se = variance_stderr(&sums);
    let exact = log_modulus_variance(n);
    let normalized = 4.0 * v / (n as f64).ln();
    let z = (v - exact).abs() / se;
    let pass = (0.8..=1.2).contains(&normalized) && z <= 3.0;
    report(
        7,
        "log-modulus CLT",
        pass,
        &format!("4 Var/ln n = {normalized:.4} (exact finite-n {:.4}), |Var - exact|/se = {z:.2}", 4.0 * exact / (n as f64).ln()),
    );
    assert!(pass);
}

#[test]
fn kernel_reproducing_property() {
    let k = build_kernel(&PotentialSpec::monomial(2, 1.0), 64).unwrap();
    let r = k.radius();
    let mut rng = fhlab::rng::stream(8, 0);
    let mut point = || Complex64::from_polar(0.9 * r * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>());
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (z, w) = (point(), point());
        worst = worst.max(reproducing_residual(&k, z, w).unwrap());
    }
    let pass = worst <= 1e-8;
    report(8, "kernel reproducing property", pass, &format!("max residual over 10 pairs = {worst:.2e}"));
    assert!(pass);
}

fn bulk_error(n: usize) -> f64 {
    let k = build_kernel(&PotentialSpec::Ginibre, n).unwrap();
    let g = GridGeometry::square(Complex64::new(0.0, 0.0), 0.6 * k.radius(), 16);
    let h = (n as f64).powf(-0.5);
    let mut worst: f64 = 0.0;
    for z in g.nodes() {
        for w in [z, z + h, z + Complex64::new(0.0, h)] {
            let e = (kernel_eval(&k, z, w, true).unwrap() - bulk_approx_eval(&k, z, w)).norm() / n as f64;
            worst = worst.max(e);
        }
    }
    worst
}

#[test]
fn kernel_bulk_approximation() {
    let (e64, e256) = (bulk_error(64), bulk_error(256));
    let pass = e256 / e64 <= 0.7;
    report(9, "kernel bulk approximation", pass, &format!("max |K - K#|/n: n=64 {e64:.3e}, n=256 {e256:.3e}, ratio {:.3e}", e256 / e64));
    assert!(pass);
}

#[test]
fn kernel_off_diagonal_decay() {
    let n = 256;
    let sn = (n as f64).sqrt();
    let k = build_kernel(&PotentialSpec::Ginibre, n).unwrap();
    let radii: Vec<f64> = (1..=40).map(|i| 0.6 * i as f64 / 40.0).collect();
    let prof = decay_profile(&k, Complex64::new(0.0, 0.0), &radii).unwrap();
    let x: Vec<f64> = prof.iter().map(|(d, _)| (sn * d).powi(2)).collect();
    let y: Vec<f64> = prof.iter().map(|(_, l)| -l).collect();
    let slope = linear_fit(&x, &y).slope;

    // |z|⁴ has vanishing density at the origin, so the profile starts at a
    // bulk point and spans distances from n^{-1/2+κ} to the droplet edge.
    let q = build_kernel(&PotentialSpec::monomial(2, 1.0), n).unwrap();
    let z0 = Complex64::new(0.5 * q.radius(), 0.0);
    let d0 = (n as f64).powf(-0.45);
    let d1 = q.radius() - z0.re;
    let radii: Vec<f64> = (0..40).map(|i| d0 + (d1 - d0) * i as f64 / 39.0).collect();
    let prof = decay_profile(&q, z0, &radii).unwrap();
    let monotone = prof.windows(2).all(|w| w[1].1 < w[0].1);
    let x: Vec<f64> = prof.iter().map(|(d, _)| sn * d).collect();
    let y: Vec<f64> = prof.iter().map(|(_, l)| -l).collect();
    let r2 = linear_fit(&x, &y).r_squared;
    let pass = (slope / 0.5 - 1.0).abs() <= 0.05 && monotone && r2 >= 0.95;
    report(10, "kernel off-diagonal decay", pass, &format!("Ginibre slope {slope:.5} (target 0.5); |z|^4 monotone {monotone}, R² {r2:.4}"));
    assert!(pass);
}

#[test]
fn harmonic_measure_and_capacity() {
    let disk = Droplet::disk(1.0).unwrap();
    let hit = brownian_hitting_estimate(&disk, 100_000, 4.0 * disk.diameter(), 1e-3 * disk.diameter(), 11).unwrap();
    let unit: Vec<f64> = hit.params.iter().map(|t| t / (2.0 * PI)).collect();
    let ks = ks_one_sample(&unit, |u| u.clamp(0.0, 1.0));

    let ellipse = Droplet::ellipse(2.0, 1.0).unwrap();
    let target = 1.5f64.ln();
    let by_map = capacity(&ellipse);
    let by_energy = capacity_energy_estimate(&ellipse, 512).unwrap();
    let cap_err = ((by_map / target - 1.0).abs()).max((by_energy / target - 1.0).abs());

    let mut pj: f64 = 0.0;
    for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2), Complex64::new(-0.3, -0.7), Complex64::new(0.9, 0.0)] {
        pj = pj.max(poisson_jensen_residual(&disk, z).unwrap());
    }
    let pass = ks <= 0.02 && cap_err <= 0.01 && pj <= 1e-8;
    report(
        11,
        "harmonic measure and capacity",
        pass,
        &format!("disk KS {ks:.4}; ellipse log-capacity map {by_map:.6}, energy {by_energy:.6} (ln 1.5 = {target:.6}); Poisson–Jensen {pj:.1e}"),
    );
    assert!(pass);
}

#[test]
fn thick_point_scaling() {
    let gamma = 0.4;
    let sets: [(usize, &[Spectrum]); 4] = [
        (128, &batch128()[..50]),
        (256, &batch256()[..50]),
        (512, &batch512()[..50]),
        (1024, batch1024()),
    ];
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut detail = String::new();
    for (n, spectra) in sets {
        let owned;
        let fs: &[FieldGrid] = if n == 1024 {
            fields1024()
        } else {
            owned = fields(spectra, n);
            &owned
        };
        let areas: Vec<f64> = fs.iter().map(|f| thick_points(f, gamma).unwrap()).collect();
        let m = mean(&areas);
        detail += &format!("n={n} area {m:.4}; ");
        xs.push((n as f64).ln());
        ys.push(m.ln());
    }
    let slope = linear_fit(&xs, &ys).slope;
    let pass = (-0.48..=-0.16).contains(&slope);
    report(12, "thick-point scaling", pass, &format!("{detail}slope {slope:.4} (target {:.2})", -2.0 * gamma * gamma));
    assert!(pass);
}

#[test]
fn freezing_transition() {
    let fs = fields1024();
    let mut ok = true;
    let mut detail = String::new();
    for gamma in [1.0, 4.0] {
        let v: Vec<f64> = fs.iter().map(|f| free_energy_stat(f, gamma).unwrap()).collect();
        let med = median(&v);
        let target = freezing_limit(gamma);
        ok &= (med - target).abs() <= 0.1;
        detail += &format!("γ={gamma}: median {med:.4} vs {target:.4}; ");
    }
    assert!((freezing_limit(1.0) - 1.125).abs() < 1e-15 && (freezing_limit(4.0) - FRAC_1_SQRT_2).abs() < 1e-15);
    report(13, "freezing transition", ok, detail.trim_end_matches("; "));
    assert!(ok);
}

#[test]
fn field_maximum() {
    let v: Vec<f64> = fields1024().iter().map(field_max_stat).collect();
    let med = median(&v);
    let pass = (0.55..=0.85).contains(&med);
    report(14, "field maximum", pass, &format!("median max X/ln n = {med:.4} (1/√2 = {FRAC_1_SQRT_2:.4})"));
    assert!(pass);
}

#[test]
fn gmc_normalization_and_variance() {
    let side = 0.4;
    let g = GridGeometry::square(Complex64::new(0.0, 0.0), 0.5 * side, 16);
    let area = g.area();
    let c = Centering::analytic(&PotentialSpec::Ginibre, &g, 512).unwrap();
    let masses: Vec<f64> = batch512()
        .iter()
        .map(|s| matrix_gmc_measure(&eval_field(s, &g, &c).unwrap(), 1.0).unwrap().total_mass())
        .collect();
    let gp = FRAC_1_SQRT_2;
    let target = analytic_square_mass_variance(side, gp, 0.0).unwrap();
    let oracle = square_chaos_variance(side, gp * gp, 0.0);
    assert!((target / oracle - 1.0).abs() < 1e-6, "variance integral {target} vs oracle {oracle}");
    let (m, se, v) = (mean(&masses), stderr(&masses), variance(&masses));
    let matrix_ok = (m - area).abs() <= 3.0 * se && (v / target - 1.0).abs() <= 0.15;

    let gp = 0.5;
    let reference = ReferenceGmc::new(g, gp, 0.0, 2.0 * g.dx()).unwrap();
    let rm: Vec<f64> = (0..4000).map(|i| reference.sample(15, i).total_mass()).collect();
    let rtarget = analytic_square_mass_variance(side, gp, 0.0).unwrap();
    let (m2, se2, v2) = (mean(&rm), stderr(&rm), variance(&rm));
    let reference_ok = (m2 - area).abs() <= 3.0 * se2 && (v2 / rtarget - 1.0).abs() <= 0.1;
    let pass = matrix_ok && reference_ok;
    report(
        15,
        "chaos normalization and second moment",
        pass,
        &format!(
            "matrix: mean {m:.4} ± {se:.4} (|A| {area:.2}), Var/target {:.3}; reference: mean {m2:.4} ± {se2:.4}, Var/target {:.3}",
            v / target,
            v2 / rtarget
        ),
    );
    assert!(pass);
}

#[test]
fn sampler_cross_validation() {
    init();
    let n = 128;
    let count = 50_000usize.div_ceil(n);
    let dense: Vec<f64> = ginibre_batch(n, count, 16).unwrap().iter().flat_map(|s| s.moduli()).collect();
    let kostlan: Vec<f64> = kostlan_batch(n, count, 17).iter().flat_map(|s| s.moduli()).collect();
    let ks_dense = ks_two_sample(&dense, &kostlan);

    let quartic = PotentialSpec::monomial(2, 1.0);
    let dpp: Vec<f64> = dpp_batch(&quartic, 32, 1000, 18).unwrap().iter().flat_map(|s| s.moduli()).collect();
    let radial: Vec<f64> = radial_moduli_batch(&quartic, 32, 1000, 19).unwrap().iter().flat_map(|s| s.moduli()).collect();
    let ks_dpp = ks_two_sample(&dpp, &radial);

    let m = 32;
    let opts = MalaOptions { burn_in: 5_000, ..Default::default() };
    let mut trace = Vec::new();
    mala_chain(&PotentialSpec::Ginibre, m, 45_000, 0.01, 20, opts, |_, z| {
        trace.push(z.iter().map(|p| p.norm_sqr()).sum::<f64>());
    })
    .unwrap();
    let (tm, tse) = (mean(&trace), batch_means_stderr(&trace, 20));
    let target = (m + 1) as f64 / 2.0;
    let pass = ks_dense <= 0.02 && ks_dpp <= 0.02 && (tm - target).abs() <= 3.0 * tse;
    report(
        16,
        "sampler cross-validation",
        pass,
        &format!("KS dense/Kostlan {ks_dense:.4}; KS DPP/radial {ks_dpp:.4}; MALA mean Σ|z|² {tm:.3} ± {tse:.3} vs {target}"),
    );
    assert!(pass);
}
