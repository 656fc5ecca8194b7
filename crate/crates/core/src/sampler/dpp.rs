use rand::Rng as _;

use num_complex::Complex64;

use super::{radial::RadialSampler, Method, Spectrum};
use crate::error::{Error, Result};
use crate::kernel::{build_kernel, PlanarKernel};
use crate::potential::PotentialSpec;
use crate::rng::{par_map, stream, Rng};

const MIN_ACCEPTANCE: f64 = 1e-4;
const MIN_ATTEMPTS: u64 = 1000;

/// Exact sampler of the determinantal projection process with the
/// monomial kernel of a radial potential.
///
/// Points are drawn one at a time. With `e_1, …, e_i` an orthonormal basis of
/// the span of the basis vectors `v(x_1), …, v(x_i)`, the next point has
/// density `(|v(x)|² - Σ_j |⟨e_j, v(x)⟩|²)/(n - i)`. It is drawn by rejection
/// from `K(x, x)/n`, itself a uniform mixture of the radial laws in
/// [`RadialSampler`] with uniform angle.
#[derive(Debug, Clone)]
pub struct DppSampler {
    kernel: PlanarKernel,
    radial: Vec<RadialSampler>,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl DppSampler {
    pub fn new(potential: &PotentialSpec, n: usize) -> Result<Self> {
        let kernel = build_kernel(potential, n)?;
        let radial =
            (0..n).map(|k| RadialSampler::new(kernel.coefficients(), n, k)).collect::<Result<Vec<_>>>()?;
        Ok(Self { kernel, radial })
    }

    pub fn kernel(&self) -> &PlanarKernel {
        &self.kernel
    }

    fn points(&self, rng: &mut Rng) -> Result<Vec<Complex64>> {
        let n = self.kernel.n;
        let mut frame: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut points = Vec::with_capacity(n);
        let (mut attempts, mut accepted) = (0u64, 0u64);
        while points.len() < n {
            attempts += 1;
            let x = self.radial[rng.random_range(0..n)].sample_point(rng);
            let v = self.kernel.basis(x);
            let total: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            let captured: f64 = frame.iter().map(|e| dot(e, &v).norm_sqr()).sum();
            if rng.random::<f64>() * total < total - captured {
                accepted += 1;
                let mut u = v;
                // two Gram–Schmidt passes keep the frame orthonormal
                for _ in 0..2 {
                    for e in &frame {
                        let c = dot(e, &u);
                        for (ui, ei) in u.iter_mut().zip(e) {
                            *ui -= c * ei;
                        }
                    }
                }
                let norm = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                for ui in &mut u {
                    *ui /= norm;
                }
                frame.push(u);
                points.push(x);
            } else if attempts >= MIN_ATTEMPTS && (accepted as f64) < MIN_ACCEPTANCE * attempts as f64 {
                return Err(Error::RejectionEfficiency {
                    rate: accepted as f64 / attempts as f64,
                    floor: MIN_ACCEPTANCE,
                });
            }
        }
        Ok(points)
    }

    /// Configuration number `index` under `seed`.
    pub fn sample(&self, seed: u64, index: u64) -> Result<Spectrum> {
        let points = self.points(&mut stream(seed, index))?;
        Ok(Spectrum {
            points,
            potential: self.kernel.potential.clone(),
            n: self.kernel.n,
            seed,
            stream: index,
            method: Method::RadialDpp,
            has_angles: true,
            acceptance_rate: None,
        })
    }
}

pub fn sample_radial_dpp(potential: &PotentialSpec, n: usize, seed: u64) -> Result<Spectrum> {
    DppSampler::new(potential, n)?.sample(seed, 0)
}

pub fn dpp_batch(potential: &PotentialSpec, n: usize, count: usize, seed: u64) -> Result<Vec<Spectrum>> {
    let s = DppSampler::new(potential, n)?;
    par_map(count, |i| s.sample(seed, i as u64)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn produces_n_distinct_points() {
        let s = sample_radial_dpp(&PotentialSpec::monomial(2, 1.0), 12, 2).unwrap();
        assert_eq!(s.points.len(), 12);
        for i in 0..12 {
            for j in 0..i {
                assert!((s.points[i] - s.points[j]).norm() > 0.0);
            }
        }
    }

    #[test]
    fn single_point_follows_the_intensity() {
        // n = 1 Ginibre: |z|² ~ Exp(1)
        let s = DppSampler::new(&PotentialSpec::Ginibre, 1).unwrap();
        let x: Vec<f64> = (0..20_000).map(|i| s.sample(1, i).unwrap().points[0].norm_sqr()).collect();
        let m = crate::stats::mean(&x);
        assert!((m - 1.0).abs() < 3.0 * crate::stats::stderr(&x));
    }
}
