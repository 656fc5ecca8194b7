//! The Ward statistic has mean zero; the isotropy statistic measures local
//! angular symmetry.

use fhlab::moments::{isotropy_statistic, ward_statistic, WardFn};
use fhlab::potential::{PotentialSpec, TestFn};
use fhlab::sampler::ginibre_batch;
use fhlab::stats::{mean, stderr};

fn main() -> fhlab::Result<()> {
    let n = 96;
    let spectra = ginibre_batch(n, 500, 4)?;
    let bump = TestFn::CompactBump { center: [0.1, 0.0], radius: 0.5, amplitude: 1.0 };
    for h in [WardFn::Monomial { k: 1 }, WardFn::Monomial { k: 3 }, WardFn::Real { f: bump.clone() }] {
        let w = spectra.iter().map(|s| ward_statistic(s, &h, &PotentialSpec::Ginibre)).collect::<fhlab::Result<Vec<_>>>()?;
        let re: Vec<f64> = w.iter().map(|c| c.re).collect();
        let im: Vec<f64> = w.iter().map(|c| c.im).collect();
        println!("{h:?}: mean ({:+.3}, {:+.3}) stderr ({:.3}, {:.3})", mean(&re), mean(&im), stderr(&re), stderr(&im));
    }
    let delta = (n as f64).powf(-0.45);
    let iso: Vec<f64> = spectra.iter().map(|s| isotropy_statistic(s, &bump, delta).norm()).collect();
    println!("isotropy |I| mean {:.3} (δ = {delta:.3})", mean(&iso));
    Ok(())
}
