//! Harmonic measure at infinity from Brownian walkers started far away.

use fhlab::potential::{brownian_hitting_estimate, Droplet};
use fhlab::stats::ks_one_sample;

fn main() -> fhlab::Result<()> {
    for (name, droplet) in [("disk", Droplet::disk(1.0)?), ("ellipse", Droplet::ellipse(2.0, 1.0)?)] {
        let diam = droplet.diameter();
        let hit = brownian_hitting_estimate(&droplet, 20_000, 4.0 * diam, 1e-3 * diam, 1)?;
        // the map parameter of the hitting point is uniform under ω^∞
        let u: Vec<f64> = hit.params.iter().map(|t| t / std::f64::consts::TAU).collect();
        let ks = ks_one_sample(&u, |x| x.clamp(0.0, 1.0));
        println!("{name}: KS vs uniform {ks:.4}, {} steps", hit.total_steps);
        let peak = hit.histogram.iter().max().copied().unwrap_or(0);
        for (i, c) in hit.histogram.iter().enumerate().step_by(8) {
            println!("  bin {i:>2} {:<40} {c}", "#".repeat((40 * c / peak.max(1)) as usize));
        }
    }
    Ok(())
}
