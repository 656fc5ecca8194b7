use std::f64::consts::PI;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::kernel::{radial_log_weight, radial_profile};
use crate::rng::Rng;

const CELLS: usize = 256;
const CHECK_NODES: usize = 4096;

/// Exact sampler for the radial law with density `∝ r^{2k+1} e^{-n v(r)}`,
/// by rejection from a piecewise-constant envelope on a grid around the
/// mode. The envelope is exact because the density is unimodal, which is
/// verified when the sampler is built.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    coefficients: Vec<f64>,
    n: usize,
    k: usize,
    log_peak: f64,
    edges: Vec<f64>,
    bounds: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RadialSampler {
    pub fn new(coefficients: &[f64], n: usize, k: usize) -> Result<Self> {
        let p = radial_profile(coefficients, n, k)?;
        let lw = |r: f64| radial_log_weight(coefficients, n, k, r);
        // unimodal iff n r v'(r) crosses 2k+1 once; check log-weight increments
        let h = (p.hi - p.lo) / CHECK_NODES as f64;
        let mut decreasing = false;
        let mut prev = lw(p.lo);
        for i in 1..=CHECK_NODES {
            let cur = lw(p.lo + i as f64 * h);
            if cur < prev {
                decreasing = true;
            } else if decreasing && cur > prev + 1e-12 * cur.abs().max(1.0) {
                return Err(Error::Domain(format!(
                    "radial weight r^{} e^(-n v) is not unimodal",
                    2 * k + 1
                )));
            }
            prev = cur;
        }
        let edges: Vec<f64> = (0..=CELLS).map(|i| p.lo + (p.hi - p.lo) * i as f64 / CELLS as f64).collect();
        let bounds: Vec<f64> = edges
            .windows(2)
            .map(|e| {
                let top = if e[0] <= p.mode && p.mode <= e[1] {
                    p.log_peak
                } else if e[1] < p.mode {
                    lw(e[1])
                } else {
                    lw(e[0])
                };
                (top - p.log_peak).exp()
            })
            .collect();
        let mut cumulative = Vec::with_capacity(CELLS);
        let mut acc = 0.0;
        for (b, e) in bounds.iter().zip(edges.windows(2)) {
            acc += b * (e[1] - e[0]);
            cumulative.push(acc);
        }
        Ok(Self { coefficients: coefficients.to_vec(), n, k, log_peak: p.log_peak, edges, bounds, cumulative })
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let total = *self.cumulative.last().expect("cells");
        loop {
            let u = rng.random::<f64>() * total;
            let cell = self.cumulative.partition_point(|c| *c < u).min(CELLS - 1);
            let r = self.edges[cell] + rng.random::<f64>() * (self.edges[cell + 1] - self.edges[cell]);
            let w = (radial_log_weight(&self.coefficients, self.n, self.k, r) - self.log_peak).exp();
            if rng.random::<f64>() * self.bounds[cell] < w {
                return r;
            }
        }
    }

    /// A point with this modulus law and a uniform angle.
    pub fn sample_point(&self, rng: &mut Rng) -> num_complex::Complex64 {
        let r = self.sample(rng);
        num_complex::Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
    }
}
