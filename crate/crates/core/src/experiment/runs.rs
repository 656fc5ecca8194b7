use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{Check, Emitter, ExperimentConfig, Outcome};
use crate::error::{Error, Result};
use crate::field::{
    analytic_square_mass_variance, clt_covariance, eval_field, field_max_stat, free_energy_stat, freezing_limit, matrix_gmc_measure,
    thick_points, write_field_csv, write_gmc_csv, Centering, CenteringMode, FieldGrid, GridGeometry, ReferenceGmc,
};
use crate::io::fmt_float;
use crate::kernel::{build_kernel, bulk_approx_eval, decay_profile, kernel_eval, reproducing_residual, write_norms_csv};
use crate::moments::{
    fh_rhs_general, fh_rhs_ginibre, isotropy_statistic, linear_stat_variance_prediction, mc_moment, ward_statistic,
    MomentQuery, MomentRecord, WardFn,
};
use crate::potential::{
    brownian_hitting_estimate, capacity, capacity_energy_estimate, equilibrium_droplet, poisson_jensen_residual,
    Droplet, PotentialSpec, TestFn, HISTOGRAM_BINS,
};
use crate::sampler::{
    dpp_batch, ginibre_batch, kostlan_batch, mala_chain, radial_moduli_batch, MalaOptions, Method, Spectrum,
};
use crate::stats::{ks_one_sample, linear_fit, mean, median, stderr, variance};

fn f(x: f64) -> String {
    fmt_float(x)
}

fn droplet_radius(p: &PotentialSpec) -> Result<f64> {
    Ok(equilibrium_droplet(p)?.1.radius())
}

fn default_method(p: &PotentialSpec, need_angles: bool) -> Method {
    match (p.is_ginibre(), need_angles) {
        (true, true) => Method::GinibreDense,
        (_, false) => Method::KostlanModuli,
        (false, true) => Method::RadialDpp,
    }
}

/// `count` configurations of size `n`, sample `i` on stream `i`.
fn batch(cfg: &ExperimentConfig, n: usize, need_angles: bool) -> Result<Vec<Spectrum>> {
    let p = &cfg.potential;
    let count = cfg.samples;
    match cfg.sampler.unwrap_or_else(|| default_method(p, need_angles)) {
        Method::GinibreDense => {
            if !p.is_ginibre() {
                return Err(Error::Config("ginibre_dense samples only the Ginibre potential".into()));
            }
            ginibre_batch(n, count, cfg.seed)
        }
        Method::KostlanModuli => {
            if need_angles {
                return Err(Error::Config("this experiment needs full points, not moduli".into()));
            }
            if p.is_ginibre() {
                Ok(kostlan_batch(n, count, cfg.seed))
            } else {
                radial_moduli_batch(p, n, count, cfg.seed)
            }
        }
        Method::RadialDpp => dpp_batch(p, n, count, cfg.seed),
        Method::Mala => {
            let m = cfg.mala.unwrap_or_default();
            let thin = m.thin.max(1);
            let opts = MalaOptions { burn_in: m.burn_in, ..Default::default() };
            let mut snaps = Vec::with_capacity(count);
            let steps = m.burn_in + count * thin;
            let (_, summary) = mala_chain(p, n, steps, m.step_size, cfg.seed, opts, |sweep, z| {
                if (sweep + 1 - m.burn_in).is_multiple_of(thin) {
                    snaps.push(z.to_vec());
                }
            })?;
            Ok(snaps
                .into_iter()
                .enumerate()
                .map(|(i, points)| Spectrum {
                    points,
                    potential: p.clone(),
                    n,
                    seed: cfg.seed,
                    stream: i as u64,
                    method: Method::Mala,
                    has_angles: true,
                    acceptance_rate: Some(summary.acceptance_rate),
                })
                .collect())
        }
    }
}

/// The grid from the config, or the largest square inside `|z| ≤ 0.9 R`.
fn grid(cfg: &ExperimentConfig, resolution: usize) -> Result<GridGeometry> {
    let r = droplet_radius(&cfg.potential)?;
    let g = cfg.grid.unwrap_or_else(|| GridGeometry::square(Complex64::new(0.0, 0.0), 0.9 * r * FRAC_1_SQRT_2, resolution));
    g.check_margin(r, 0.1)?;
    Ok(g)
}

fn centering(cfg: &ExperimentConfig, spectra: &[Spectrum], g: &GridGeometry, n: usize) -> Result<Centering> {
    match cfg.centering.unwrap_or(CenteringMode::AnalyticAsymptotic) {
        CenteringMode::AnalyticAsymptotic => Centering::analytic(&cfg.potential, g, n),
        CenteringMode::EmpiricalMean => Centering::empirical(spectra, g),
    }
}

fn fields(cfg: &ExperimentConfig, n: usize, default_res: usize) -> Result<Vec<FieldGrid>> {
    let g = grid(cfg, default_res)?;
    let spectra = batch(cfg, n, true)?;
    let c = centering(cfg, &spectra, &g, n)?;
    spectra.iter().map(|s| eval_field(s, &g, &c)).collect()
}

fn z_score(values: &[f64]) -> f64 {
    let m = mean(values);
    let se = stderr(values);
    if se == 0.0 {
        if m == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        m.abs() / se
    }
}

pub(super) fn moments(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let tol = cfg.tolerance.unwrap_or(0.15);
    let sweep_id = cfg.hash()[..12].to_string();
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for n in cfg.size_list() {
        let mut query = MomentQuery::new(cfg.singularities.clone(), cfg.test_fn.clone(), n);
        query.kappa = cfg.kappa;
        let log_rhs = if cfg.potential.is_ginibre() {
            fh_rhs_ginibre(&query)?
        } else {
            fh_rhs_general(&cfg.potential, &query)?
        }
        .get();
        let need_angles = query.singularities.iter().any(|s| s.zeta.norm() > 0.0) || !cfg.test_fn.is_radial();
        let spectra = batch(cfg, n, need_angles)?;
        let est = mc_moment(&spectra, &query)?;
        let ratio = (est.log_mean - log_rhs).exp();
        let record = MomentRecord {
            query,
            log_rhs,
            log_mc: est.log_mean,
            rel_stderr: est.rel_stderr,
            n,
            samples: est.samples,
            seed: cfg.seed,
        };
        rows.push(vec![n.to_string(), f(log_rhs), f(est.log_mean), f(est.rel_stderr), f(ratio)]);
        checks.push(Check::within(format!("moment_ratio_n{n}"), ratio, 1.0, tol));
        records.push(json!({ "sweep_id": sweep_id, "record": record, "ratio": ratio, "ess": est.ess }));
    }
    emit.table("moments.csv", "n,log_rhs,log_mc,rel_stderr,ratio", &rows)?;
    Ok(Outcome { results: json!({ "sweep_id": sweep_id, "records": records }), checks })
}

pub(super) fn ward(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let fns = if cfg.ward_fns.is_empty() { vec![WardFn::Monomial { k: 1 }] } else { cfg.ward_fns.clone() };
    let spectra = batch(cfg, cfg.n, true)?;
    let tol = cfg.tolerance.unwrap_or(3.0);
    let mut rows = Vec::new();
    let mut out = Vec::new();
    let mut checks = Vec::new();
    for (j, h) in fns.iter().enumerate() {
        let w = spectra.iter().map(|s| ward_statistic(s, h, &cfg.potential)).collect::<Result<Vec<_>>>()?;
        let re: Vec<f64> = w.iter().map(|c| c.re).collect();
        let im: Vec<f64> = w.iter().map(|c| c.im).collect();
        for (i, c) in w.iter().enumerate() {
            rows.push(vec![j.to_string(), i.to_string(), f(c.re), f(c.im)]);
        }
        let z = z_score(&re).max(z_score(&im));
        checks.push(Check::at_most(format!("ward_zscore_h{j}"), z, tol));
        out.push(json!({
            "h": h,
            "mean": [mean(&re), mean(&im)],
            "stderr": [stderr(&re), stderr(&im)],
            "z_score": z,
        }));
    }
    emit.table("ward.csv", "h_index,sample,re,im", &rows)?;
    Ok(Outcome { results: json!({ "statistics": out }), checks })
}

pub(super) fn isotropy(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let r = droplet_radius(&cfg.potential)?;
    let g = if cfg.test_fn.is_zero() {
        TestFn::CompactBump { center: [0.0, 0.0], radius: 0.5 * r, amplitude: 1.0 }
    } else {
        cfg.test_fn.clone()
    };
    let delta = cfg.delta.unwrap_or_else(|| (cfg.n as f64).powf(-0.5 + cfg.kappa));
    let spectra = batch(cfg, cfg.n, true)?;
    let vals: Vec<Complex64> = spectra.iter().map(|s| isotropy_statistic(s, &g, delta)).collect();
    let re: Vec<f64> = vals.iter().map(|c| c.re).collect();
    let im: Vec<f64> = vals.iter().map(|c| c.im).collect();
    let rows: Vec<Vec<String>> = vals.iter().enumerate().map(|(i, c)| vec![i.to_string(), f(c.re), f(c.im)]).collect();
    emit.table("isotropy.csv", "sample,re,im", &rows)?;
    Ok(Outcome {
        results: json!({
            "g": g,
            "delta": delta,
            "mean": [mean(&re), mean(&im)],
            "stderr": [stderr(&re), stderr(&im)],
        }),
        checks: Vec::new(),
    })
}

pub(super) fn clt(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let n = cfg.n;
    let zetas = if cfg.zetas.is_empty() {
        vec![Complex64::new(0.0, 0.0), Complex64::new((n as f64).powf(-0.25), 0.0)]
    } else {
        cfg.zetas.clone()
    };
    let need_angles = zetas.iter().any(|z| z.norm() > 0.0) || !cfg.test_fn.is_radial();
    let spectra = batch(cfg, n, need_angles)?;
    let cov = clt_covariance(&spectra, &zetas)?;
    let tol = cfg.tolerance.unwrap_or(0.08);
    let m = zetas.len();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for j in 0..m {
        for k in 0..m {
            rows.push(vec![j.to_string(), k.to_string(), f(cov.empirical[j][k]), f(cov.predicted[j][k])]);
            if j != k {
                worst = worst.max((cov.empirical[j][k] - cov.predicted[j][k]).abs());
            }
        }
    }
    emit.table("covariance.csv", "j,k,empirical,predicted", &rows)?;
    let mut checks = Vec::new();
    if m > 1 {
        checks.push(Check::at_most("clt_offdiagonal_max_error", worst, tol));
    }
    let mut results = json!({ "zetas": zetas, "covariance": cov });
    if !cfg.test_fn.is_zero() {
        let stats: Vec<f64> = spectra.iter().map(|s| s.points.iter().map(|z| cfg.test_fn.value(*z)).sum()).collect();
        let var = variance(&stats);
        let pred = linear_stat_variance_prediction(&cfg.test_fn)?;
        checks.push(Check::within("linear_statistic_variance_ratio", var / pred, 1.0, 0.1));
        results["linear_statistic"] = json!({ "variance": var, "predicted": pred });
    }
    Ok(Outcome { results, checks })
}

pub(super) fn field(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let fields = fields(cfg, cfg.n, 64)?;
    let first = &fields[0];
    let name = format!("field_{}.csv", cfg.seed);
    emit.csv(&name, |w, p| write_field_csv(w, first, Some(p)))?;
    let grid_means: Vec<f64> = fields.iter().map(|g| mean(&g.values)).collect();
    let maxima: Vec<f64> = fields.iter().map(field_max_stat).collect();
    let jittered: usize = fields.iter().map(|g| g.jittered.len()).sum();
    let mut checks = Vec::new();
    if fields.len() > 1 {
        checks.push(Check::at_most("field_mean_zscore", z_score(&grid_means), cfg.tolerance.unwrap_or(3.0)));
    }
    Ok(Outcome {
        results: json!({
            "grid": first.geometry,
            "centering": first.centering.mode,
            "mean_of_grid_means": mean(&grid_means),
            "median_max_over_ln_n": median(&maxima),
            "jittered_nodes": jittered,
        }),
        checks,
    })
}

/// Side of `g` if it is a square.
fn square_side(g: &GridGeometry) -> Option<f64> {
    let (w, h) = (g.x1 - g.x0, g.y1 - g.y0);
    ((w - h).abs() <= 1e-12 * w).then_some(w)
}

fn mass_checks(label: &str, masses: &[f64], area: f64, var_target: Option<f64>, var_tol: f64) -> (Value, Vec<Check>) {
    let m = mean(masses);
    let se = stderr(masses);
    let v = variance(masses);
    let mut checks = vec![Check::within(format!("{label}_mean_mass"), m, area, 3.0 * se)];
    if let Some(t) = var_target {
        checks.push(Check::within(format!("{label}_mass_variance_ratio"), v / t, 1.0, var_tol));
    }
    (json!({ "mean_mass": m, "stderr": se, "area": area, "variance": v, "variance_target": var_target }), checks)
}

pub(super) fn gmc(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let gammas = if cfg.gammas.is_empty() { vec![1.0] } else { cfg.gammas.clone() };
    let fields = fields(cfg, cfg.n, 32)?;
    let g = fields[0].geometry;
    let s = capacity(&equilibrium_droplet(&cfg.potential)?.0);
    let mut out = Vec::new();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (j, &gamma) in gammas.iter().enumerate() {
        let measures = fields.iter().map(|fg| matrix_gmc_measure(fg, gamma)).collect::<Result<Vec<_>>>()?;
        if j == 0 {
            let name = format!("gmc_{}.csv", cfg.seed);
            emit.csv(&name, |w, p| write_gmc_csv(w, &measures[0], Some(p)))?;
        }
        let masses: Vec<f64> = measures.iter().map(|m| m.total_mass()).collect();
        for (i, m) in masses.iter().enumerate() {
            rows.push(vec![f(gamma), "matrix".into(), i.to_string(), f(*m)]);
        }
        let gp = gamma / SQRT_2;
        let target = match square_side(&g) {
            Some(side) if gp * gp < 2.0 => Some(analytic_square_mass_variance(side, gp, s)?),
            _ => None,
        };
        let (summary, c) = mass_checks(&format!("matrix_gamma{gamma}"), &masses, g.area(), target, cfg.tolerance.unwrap_or(0.15));
        checks.extend(c);
        let mut entry = json!({ "gamma": gamma, "gamma_prime": gp, "matrix": summary });
        if let Some(eps) = cfg.epsilon {
            if gp < 2.0 {
                let reference = ReferenceGmc::new(g, gp, s, eps)?;
                let masses: Vec<f64> = (0..cfg.samples).map(|i| reference.sample(cfg.seed, i as u64).total_mass()).collect();
                for (i, m) in masses.iter().enumerate() {
                    rows.push(vec![f(gamma), "reference".into(), i.to_string(), f(*m)]);
                }
                let exact = reference.exact_mass_variance(|_| true);
                let (summary, c) = mass_checks(&format!("reference_gamma{gamma}"), &masses, g.area(), Some(exact), 0.1);
                checks.extend(c);
                entry["reference"] = summary;
            }
        }
        out.push(entry);
    }
    emit.table("masses.csv", "gamma,measure,sample,mass", &rows)?;
    Ok(Outcome { results: json!({ "grid": g, "capacity_log": s, "gammas": out }), checks })
}

pub(super) fn kernel(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let n = cfg.n;
    let k = build_kernel(&cfg.potential, n)?;
    let r = k.radius();
    emit.csv("norms.csv", |w, p| write_norms_csv(w, &k, Some(p)))?;
    let z0 = cfg.zetas.first().copied().unwrap_or(Complex64::new(0.0, 0.0));
    let reach = (0.9 * r - z0.norm()).max(0.1 * r);
    let radii: Vec<f64> = (1..=64).map(|i| reach * i as f64 / 64.0).collect();
    let profile = decay_profile(&k, z0, &radii)?;
    let rows: Vec<Vec<String>> = profile.iter().map(|(d, l)| vec![f(*d), f(*l)]).collect();
    emit.table("decay.csv", "distance,log_abs_kernel", &rows)?;
    // reproducing property at fixed bulk pairs
    let pts: Vec<Complex64> = if cfg.zetas.len() >= 2 {
        cfg.zetas.clone()
    } else {
        (0..6).map(|i| Complex64::from_polar(0.12 * r * (i + 1) as f64, 1.3 * i as f64)).collect()
    };
    let mut residuals = Vec::new();
    for i in 0..pts.len() {
        residuals.push(reproducing_residual(&k, pts[i], pts[(i + 1) % pts.len()])?);
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let mut checks = vec![Check::at_most("reproducing_residual_max", worst, cfg.tolerance.unwrap_or(1e-8))];
    // bulk approximation on the diagonal and at distance δ_N/2
    let g = GridGeometry::square(Complex64::new(0.0, 0.0), 0.6 * r, 16);
    let dn = (n as f64).ln().powi(2) / (n as f64).sqrt();
    let mut bulk: f64 = 0.0;
    if cfg.potential.polarized(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_some() {
        for z in g.nodes() {
            for w in [z, z + 0.5 * dn] {
                let exact = kernel_eval(&k, z, w, true)?;
                bulk = bulk.max((exact - bulk_approx_eval(&k, z, w)).norm() / n as f64);
            }
        }
    }
    let trace_check = crate::quad::polar_integral(
        |z| k.intensity(z).unwrap_or(0.0),
        Complex64::new(0.0, 0.0),
        &[0.0, 0.5 * r, r, 1.5 * r, 2.0 * r],
        crate::quad::AngularRule::Trapezoid,
        crate::quad::Tolerance::new(1e-9, 1e-10),
    )?;
    checks.push(Check::within("kernel_trace", trace_check, n as f64, 1e-6 * n as f64));
    Ok(Outcome {
        results: json!({
            "radius": r,
            "reproducing_residuals": residuals,
            "bulk_max_error_over_n": bulk,
            "trace": trace_check,
        }),
        checks,
    })
}

pub(super) fn harmonic(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let droplet: Droplet = match &cfg.droplet {
        Some(d) => d.clone(),
        None => equilibrium_droplet(&cfg.potential)?.0,
    };
    let s = capacity(&droplet);
    let energy = capacity_energy_estimate(&droplet, 512)?;
    let diam = droplet.diameter();
    let walkers = cfg.walkers.unwrap_or(10_000);
    let step = cfg.tau.unwrap_or(1e-3 * diam);
    let hit = brownian_hitting_estimate(&droplet, walkers, 4.0 * diam, step, cfg.seed)?;
    let unit: Vec<f64> = hit.params.iter().map(|t| t / (2.0 * PI)).collect();
    let ks = ks_one_sample(&unit, |u| u.clamp(0.0, 1.0));
    let expected = walkers as f64 / HISTOGRAM_BINS as f64;
    let rows: Vec<Vec<String>> = hit
        .histogram
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let w = 2.0 * PI / HISTOGRAM_BINS as f64;
            vec![i.to_string(), f(i as f64 * w), f((i + 1) as f64 * w), c.to_string(), f(expected)]
        })
        .collect();
    emit.table("harmonic.csv", "bin,theta_lo,theta_hi,count,expected", &rows)?;
    let zetas = if cfg.zetas.is_empty() { vec![droplet.center()] } else { cfg.zetas.clone() };
    let pj = zetas.iter().map(|z| poisson_jensen_residual(&droplet, *z)).collect::<Result<Vec<_>>>()?;
    let pj_max = pj.iter().copied().fold(0.0, f64::max);
    let mut checks = vec![
        Check::at_most("hitting_ks", ks, cfg.tolerance.unwrap_or(0.02)),
        Check::within("capacity_energy_vs_map", energy.exp() / s.exp(), 1.0, 0.01),
        Check::at_most("poisson_jensen_residual_max", pj_max, 1e-8),
    ];
    let mut results = json!({
        "droplet": droplet,
        "capacity_log": s,
        "capacity_log_energy": energy,
        "hitting_ks": ks,
        "total_steps": hit.total_steps,
        "poisson_jensen_residuals": pj,
    });
    if !cfg.test_fn.is_zero() && cfg.potential.is_ginibre() {
        let v = linear_stat_variance_prediction(&cfg.test_fn)?;
        results["linear_statistic_variance"] = json!(v);
        checks.push(Check::at_most("linear_statistic_variance_nonnegative", -v, 0.0));
    }
    Ok(Outcome { results, checks })
}

pub(super) fn freezing(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let gammas = if cfg.gammas.is_empty() { vec![1.0, 4.0] } else { cfg.gammas.clone() };
    let fields = fields(cfg, cfg.n, 256)?;
    let tol = cfg.tolerance.unwrap_or(0.1);
    let mut rows = Vec::new();
    let mut out = Vec::new();
    let mut checks = Vec::new();
    for &gamma in &gammas {
        let vals = fields.iter().map(|fg| free_energy_stat(fg, gamma)).collect::<Result<Vec<_>>>()?;
        for (i, v) in vals.iter().enumerate() {
            rows.push(vec![f(gamma), i.to_string(), f(*v)]);
        }
        let med = median(&vals);
        checks.push(Check::within(format!("freezing_gamma{gamma}"), med, freezing_limit(gamma), tol));
        out.push(json!({ "gamma": gamma, "median": med, "limit": freezing_limit(gamma) }));
    }
    emit.table("freezing.csv", "gamma,sample,value", &rows)?;
    Ok(Outcome { results: json!({ "statistics": out }), checks })
}

pub(super) fn thickpoints(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let gamma = cfg.gammas.first().copied().unwrap_or(0.4);
    let sizes = if cfg.sizes.is_empty() { vec![128, 256, 512, 1024] } else { cfg.sizes.clone() };
    let mut rows = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut per_n = Vec::new();
    for &n in &sizes {
        let fields = fields(cfg, n, 128)?;
        let areas = fields.iter().map(|fg| thick_points(fg, gamma)).collect::<Result<Vec<_>>>()?;
        for (i, a) in areas.iter().enumerate() {
            rows.push(vec![n.to_string(), i.to_string(), f(*a)]);
        }
        let m = mean(&areas);
        per_n.push(json!({ "n": n, "mean_area": m, "median_area": median(&areas) }));
        xs.push((n as f64).ln());
        ys.push(m.ln());
    }
    emit.table("thickpoints.csv", "n,sample,area", &rows)?;
    let target = -2.0 * gamma * gamma;
    let mut checks = Vec::new();
    let mut results = json!({ "gamma": gamma, "target_slope": target, "sizes": per_n });
    if sizes.len() >= 2 && ys.iter().all(|y| y.is_finite()) {
        let fit = linear_fit(&xs, &ys);
        checks.push(Check::within("thick_point_slope", fit.slope, target, cfg.tolerance.unwrap_or(0.5) * target.abs()));
        results["slope"] = json!(fit.slope);
    }
    Ok(Outcome { results, checks })
}

pub(super) fn max(cfg: &ExperimentConfig, emit: &mut Emitter) -> Result<Outcome> {
    let fields = fields(cfg, cfg.n, 256)?;
    let vals: Vec<f64> = fields.iter().map(field_max_stat).collect();
    let rows: Vec<Vec<String>> = vals.iter().enumerate().map(|(i, v)| vec![i.to_string(), f(*v)]).collect();
    emit.table("max.csv", "sample,value", &rows)?;
    let med = median(&vals);
    Ok(Outcome {
        results: json!({ "median": med, "target": FRAC_1_SQRT_2 }),
        checks: vec![Check::within("field_max_median", med, 0.7, cfg.tolerance.unwrap_or(0.15))],
    })
}
