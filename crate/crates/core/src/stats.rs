//! Small statistics toolkit used by the estimators and the checks.

/// Sample mean; NaN for an empty slice.
pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Standard error of the sample mean.
pub fn stderr(x: &[f64]) -> f64 {
    (variance(x) / x.len() as f64).sqrt()
}

/// Standard error of the unbiased sample variance, from the fourth central
/// moment: `Var(s²) ≈ (μ₄ - σ⁴ (n-3)/(n-1)) / n`.
pub fn variance_stderr(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = mean(x);
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
}

/// Covariance of paired samples (unbiased).
pub fn covariance(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (x.len() as f64 - 1.0)
}

pub fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `ln((1/n) Σ e^{w_i})`, computed with a max shift.
pub fn log_mean_exp(w: &[f64]) -> f64 {
    let m = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let s: f64 = w.iter().map(|x| (x - m).exp()).sum();
    m + (s / w.len() as f64).ln()
}

/// Jackknife standard error of [`log_mean_exp`]. To first order this is the
/// relative standard error of the mean of `e^{w}`.
pub fn jackknife_log_mean_exp(w: &[f64]) -> f64 {
    let n = w.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let m = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = w.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    let loo: Vec<f64> = e
        .iter()
        .map(|ei| {
            let rest = (s - ei).max(f64::MIN_POSITIVE);
            (rest / (n - 1) as f64).ln()
        })
        .collect();
    let lm = mean(&loo);
    let ss: f64 = loo.iter().map(|v| (v - lm).powi(2)).sum();
    ((n - 1) as f64 / n as f64 * ss).sqrt()
}

/// Kish effective sample size `(Σ e^{w})² / Σ e^{2w}` of log-weights.
pub fn effective_sample_size(w: &[f64]) -> f64 {
    let m = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut s1, mut s2) = (0.0, 0.0);
    for x in w {
        let e = (x - m).exp();
        s1 += e;
        s2 += e * e;
    }
    s1 * s1 / s2
}

/// Standard error of the mean of a correlated series by non-overlapping
/// batch means.
pub fn batch_means_stderr(x: &[f64], batches: usize) -> f64 {
    let b = batches.max(2).min(x.len());
    let size = x.len() / b;
    let means: Vec<f64> = (0..b).map(|i| mean(&x[i * size..(i + 1) * size])).collect();
    stderr(&means)
}

/// Least-squares line `y = slope·x + intercept` and its coefficient of
/// determination.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LinearFit { slope, intercept, r_squared }
}

/// One-sample Kolmogorov–Smirnov distance between the empirical law of `x`
/// and the continuous CDF `cdf`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(x: &[f64], cdf: F) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, xi) in v.iter().enumerate() {
        let f = cdf(*xi);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample KS distance at level
/// `alpha`: `sqrt(-ln(alpha/2)/2) · sqrt((n+m)/(n m))`.
pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}
