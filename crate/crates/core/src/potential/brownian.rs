use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::{Droplet, DropletShape};
use crate::error::{Error, Result};
use crate::rng::{par_map, stream, Rng};

const STEP_CAP: u64 = 100_000_000;
const INDEX_VERTICES: usize = 2048;
const INDEX_GRID: usize = 128;
/// Bins of the hitting histogram over [0, 2π).
pub const HISTOGRAM_BINS: usize = 64;

/// Polygonal approximation of a droplet boundary with a uniform grid of
/// distance lower bounds, for fast inside tests and boundary distances.
#[derive(Debug, Clone)]
pub struct BoundaryIndex {
    vertices: Vec<Complex64>,
    center: Complex64,
    outer_radius: f64,
    slack: f64,
    origin: Complex64,
    cell: f64,
    /// Distance from each cell center to the nearest vertex.
    node_distance: Vec<f64>,
    /// Index of that vertex.
    node_vertex: Vec<usize>,
}

impl BoundaryIndex {
    pub fn new(droplet: &Droplet) -> Self {
        let m = INDEX_VERTICES;
        let vertices: Vec<Complex64> =
            (0..m).map(|i| droplet.boundary_point(2.0 * PI * i as f64 / m as f64)).collect();
        let center = droplet.center();
        let outer_radius = vertices.iter().map(|v| (v - center).norm()).fold(0.0, f64::max);
        let max_edge = (0..m).map(|i| (vertices[(i + 1) % m] - vertices[i]).norm()).fold(0.0, f64::max);
        // Any curve point lies within half an edge plus the sagitta of a vertex.
        let slack = max_edge;
        let half = 1.25 * outer_radius;
        let origin = center - Complex64::new(half, half);
        let cell = 2.0 * half / INDEX_GRID as f64;
        let mut node_distance = Vec::with_capacity(INDEX_GRID * INDEX_GRID);
        let mut node_vertex = Vec::with_capacity(INDEX_GRID * INDEX_GRID);
        for iy in 0..INDEX_GRID {
            for ix in 0..INDEX_GRID {
                let p = origin + Complex64::new((ix as f64 + 0.5) * cell, (iy as f64 + 0.5) * cell);
                let (k, d) = vertices
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (k, (p - v).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("polygon has vertices");
                node_distance.push(d);
                node_vertex.push(k);
            }
        }
        Self { vertices, center, outer_radius, slack, origin, cell, node_distance, node_vertex }
    }

    fn cell_of(&self, z: Complex64) -> Option<usize> {
        let d = z - self.origin;
        let ix = (d.re / self.cell).floor();
        let iy = (d.im / self.cell).floor();
        let g = INDEX_GRID as f64;
        if ix < 0.0 || iy < 0.0 || ix >= g || iy >= g {
            None
        } else {
            Some(iy as usize * INDEX_GRID + ix as usize)
        }
    }

    /// A lower bound on the distance from `z` to the boundary curve.
    pub fn distance_lower_bound(&self, z: Complex64) -> f64 {
        match self.cell_of(z) {
            None => (z - self.center).norm() - self.outer_radius - self.slack,
            Some(c) => self.node_distance[c] - self.cell * std::f64::consts::FRAC_1_SQRT_2 - self.slack,
        }
    }

    /// Nearest polygon vertex, searched in a window around the cell's
    /// nearest vertex (or globally outside the grid).
    fn nearest_vertex(&self, z: Complex64) -> usize {
        let m = self.vertices.len();
        let dist = |k: usize| (z - self.vertices[k % m]).norm();
        match self.cell_of(z) {
            None => (0..m).min_by(|a, b| dist(*a).total_cmp(&dist(*b))).expect("vertices"),
            Some(c) => {
                let guess = self.node_vertex[c];
                let window = 4 * m / INDEX_GRID + 8;
                (guess + m - window..=guess + m + window)
                    .min_by(|a, b| dist(*a).total_cmp(&dist(*b)))
                    .expect("window")
                    % m
            }
        }
    }

    /// Closest point on the polygon near vertex `k`, as (map parameter,
    /// signed offset along the outward side; positive outside).
    fn project(&self, z: Complex64) -> (f64, f64) {
        let m = self.vertices.len();
        let k = self.nearest_vertex(z);
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for e in [(k + m - 1) % m, k] {
            let a = self.vertices[e];
            let b = self.vertices[(e + 1) % m];
            let ab = b - a;
            let t = (((z - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
            let q = a + ab * t;
            let d = (z - q).norm();
            if d < best.0 {
                // counterclockwise boundary: the outward normal is -i·ab
                let outward = (-Complex64::i() * ab / ab.norm()).conj();
                let side = ((z - q) * outward).re;
                let side = if t > 0.0 && t < 1.0 {
                    side
                } else {
                    // at a vertex use the average of the adjacent normals
                    let prev = self.vertices[(k + m - 1) % m];
                    let next = self.vertices[(k + 1) % m];
                    let tangent = next - prev;
                    ((z - q) * (-Complex64::i() * tangent).conj()).re
                };
                best = (d, 2.0 * PI * (e as f64 + t) / m as f64, side);
            }
        }
        (best.1.rem_euclid(2.0 * PI), best.2)
    }
}

/// Boundary parameters (map parameter θ ∈ [0, 2π)) at which the walkers
/// first entered the droplet, plus their histogram.
#[derive(Debug, Clone)]
pub struct HittingSample {
    pub params: Vec<f64>,
    pub histogram: Vec<u64>,
    pub total_steps: u64,
}

enum Geometry<'a> {
    Disk(f64),
    Map(&'a BoundaryIndex),
}

impl Geometry<'_> {
    fn distance_lower_bound(&self, z: Complex64) -> f64 {
        match self {
            Geometry::Disk(r) => z.norm() - r,
            Geometry::Map(ix) => ix.distance_lower_bound(z),
        }
    }

    /// `Some(θ)` when `z` is inside the closed droplet.
    fn entry(&self, z: Complex64) -> Option<f64> {
        match self {
            Geometry::Disk(r) => (z.norm() <= *r).then(|| z.arg().rem_euclid(2.0 * PI)),
            Geometry::Map(ix) => {
                let (theta, side) = ix.project(z);
                (side <= 0.0).then_some(theta)
            }
        }
    }

    fn param(&self, z: Complex64) -> f64 {
        match self {
            Geometry::Disk(_) => z.arg().rem_euclid(2.0 * PI),
            Geometry::Map(ix) => ix.project(z).0,
        }
    }
}

fn walk(
    geom: &Geometry<'_>,
    center: Complex64,
    start_radius: f64,
    step: f64,
    rng: &mut Rng,
    walker: usize,
) -> Result<(f64, u64)> {
    let mut z = center + Complex64::from_polar(start_radius, 2.0 * PI * rng.random::<f64>());
    let mut steps = 0u64;
    loop {
        if steps >= STEP_CAP {
            return Err(Error::NonTermination { walker, cap: STEP_CAP });
        }
        steps += 1;
        let rel = z - center;
        let r = rel.norm();
        if r > 2.0 * start_radius {
            // Return to the launch circle with the exterior Poisson kernel,
            // a wrapped Cauchy law centered at arg z with parameter r0/r.
            let a = start_radius / r;
            let u: f64 = rng.random();
            let offset = 2.0 * (((1.0 - a) / (1.0 + a)) * (PI * (u - 0.5)).tan()).atan();
            z = center + Complex64::from_polar(start_radius, rel.arg() + offset);
            continue;
        }
        let d = geom.distance_lower_bound(z);
        if d >= 5.0 * step {
            // Exit point of the largest disk around z avoiding the droplet.
            z += Complex64::from_polar(d, 2.0 * PI * rng.random::<f64>());
            continue;
        }
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        let next = z + Complex64::new(dx, dy) * step;
        if geom.entry(next).is_some() {
            return Ok((geom.param(z), steps));
        }
        z = next;
    }
}

/// Simulates planar Brownian motion from the circle `|z - c_0| = start_radius`
/// until it enters the droplet, and records the boundary parameter of entry.
///
/// Far from the droplet the path is advanced by exact jumps (exit points of
/// disks avoiding the droplet, and the exterior Poisson kernel back to the
/// launch circle); within `5·step` of the boundary it takes Gaussian steps of
/// standard deviation `step`. Walker `i` uses random stream `(seed, i)`.
pub fn brownian_hitting_estimate(
    droplet: &Droplet,
    walkers: usize,
    start_radius: f64,
    step: f64,
    seed: u64,
) -> Result<HittingSample> {
    let diam = droplet.diameter();
    if !(start_radius > 3.0 * diam) {
        return Err(Error::Domain(format!(
            "start radius {start_radius} must exceed three droplet diameters ({})",
            3.0 * diam
        )));
    }
    if !(step > 0.0 && step <= 1e-2 * diam) {
        return Err(Error::Domain(format!("step {step} must lie in (0, {}]", 1e-2 * diam)));
    }
    let index;
    let geom = match droplet.shape {
        DropletShape::Disk { radius } => Geometry::Disk(radius),
        DropletShape::ExteriorMap { .. } => {
            index = BoundaryIndex::new(droplet);
            Geometry::Map(&index)
        }
    };
    let center = droplet.center();
    let results = par_map(walkers, |i| {
        let mut rng = stream(seed, i as u64);
        walk(&geom, center, start_radius, step, &mut rng, i)
    });
    let bins = HISTOGRAM_BINS;
    let mut histogram = vec![0u64; bins];
    let mut params = Vec::with_capacity(walkers);
    let mut total_steps = 0;
    for r in results {
        let (theta, s) = r?;
        let b = ((theta / (2.0 * PI) * bins as f64) as usize).min(bins - 1);
        histogram[b] += 1;
        params.push(theta);
        total_steps += s;
    }
    Ok(HittingSample { params, histogram, total_steps })
}
