//! Configuration-driven experiment runner behind the `fhlab` binary.
//!
//! A run reads one JSON config, draws all randomness from `(seed, index)`
//! streams and writes `results.json` plus CSV data files. Output bytes do
//! not depend on the thread count.

mod runs;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{CenteringMode, GridGeometry};
use crate::moments::{Singularity, WardFn, DEFAULT_KAPPA};
use crate::potential::{Droplet, PotentialSpec, TestFn};
use crate::sampler::Method;

/// Version string stamped into every output file. Set `FHLAB_GIT_DESCRIBE`
/// at build time to embed `git describe` output.
pub const VERSION: &str = match option_env!("FHLAB_GIT_DESCRIBE") {
    Some(v) => v,
    None => concat!("v", env!("CARGO_PKG_VERSION")),
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Moments,
    Ward,
    Isotropy,
    Clt,
    Field,
    Gmc,
    Kernel,
    Harmonic,
    Freezing,
    Thickpoints,
    Max,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(v.as_str().unwrap_or("?"))
    }
}

/// Settings for MCMC batches: snapshots of one chain every `thin` sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MalaConfig {
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_thin")]
    pub thin: usize,
    #[serde(default = "default_step")]
    pub step_size: f64,
}

fn default_burn_in() -> usize {
    crate::sampler::DEFAULT_BURN_IN
}
fn default_thin() -> usize {
    10
}
fn default_step() -> f64 {
    1e-3
}

impl Default for MalaConfig {
    fn default() -> Self {
        Self { burn_in: default_burn_in(), thin: default_thin(), step_size: default_step() }
    }
}

fn default_potential() -> PotentialSpec {
    PotentialSpec::Ginibre
}
fn default_samples() -> usize {
    1
}
fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}
fn default_test_fn() -> TestFn {
    TestFn::Zero
}

/// Experiment configuration. Keys that an experiment does not use are
/// accepted and ignored; keys outside this schema are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default = "default_potential")]
    pub potential: PotentialSpec,
    pub n: usize,
    /// Sweep over several sizes; replaces `n` where supported.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads. Not part of the hashed config since outputs do not
    /// depend on it.
    #[serde(default, skip_serializing)]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<Method>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_kappa")]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singularities: Vec<Singularity>,
    #[serde(default = "default_test_fn")]
    pub test_fn: TestFn,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ward_fns: Vec<WardFn>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gammas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridGeometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centering: Option<CenteringMode>,
    /// Mollification scale of the reference chaos.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Interaction range of the isotropy statistic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Step length of the Brownian walkers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zetas: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub droplet: Option<Droplet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walkers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mala: Option<MalaConfig>,
    /// Overrides the default tolerance of the built-in check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n == 0 && self.sizes.is_empty() {
            return bad("n must be at least 1".into());
        }
        if self.sizes.contains(&0) {
            return bad("sizes must be at least 1".into());
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        for (name, v) in [("kappa", self.kappa), ("alpha", self.alpha)] {
            if !(v > 0.0 && v < 0.5) {
                return bad(format!("{name} must lie in (0, 1/2), got {v}"));
            }
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        self.potential.validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Sizes to run: `sizes` if given, else `[n]`.
    pub fn size_list(&self) -> Vec<usize> {
        if self.sizes.is_empty() {
            vec![self.n]
        } else {
            self.sizes.clone()
        }
    }

    /// Lowercase hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Scale parameters derived from `n`, `κ` and `α`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivedScales {
    pub n: usize,
    pub kappa: f64,
    pub alpha: f64,
    /// Mesoscopic separation `n^{-1/2+κ}`.
    pub delta: f64,
    /// Microscopic scale `n^{-1/2-α}`.
    #[serde(rename = "Delta")]
    pub big_delta: f64,
    /// Bulk-kernel window `(ln n)² n^{-1/2}`.
    pub delta_n: f64,
}

impl DerivedScales {
    pub fn new(n: usize, kappa: f64, alpha: f64) -> Self {
        let nf = n as f64;
        Self {
            n,
            kappa,
            alpha,
            delta: nf.powf(-0.5 + kappa),
            big_delta: nf.powf(-0.5 - alpha),
            delta_n: nf.ln().powi(2) / nf.sqrt(),
        }
    }
}

/// Outcome of one built-in check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|value - target| ≤ tolerance`.
    pub fn within(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let pass = (value - target).abs() <= tolerance;
        Self { name: name.into(), value, target, tolerance, pass }
    }

    /// `value ≤ bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, target: 0.0, tolerance: bound, pass: value <= bound }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: value {:.6} target {:.6} tolerance {:.6}", self.name, self.value, self.target, self.tolerance)
    }
}

/// Writes files under the output directory, each stamped with provenance.
pub struct Emitter {
    dir: PathBuf,
    provenance: String,
    files: Vec<String>,
}

impl Emitter {
    fn new(dir: &Path, cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let provenance =
            format!("fhlab {VERSION} experiment={kind} seed={} config_sha256={}", cfg.seed, cfg.hash());
        Ok(Self { dir: dir.to_path_buf(), provenance, files: Vec::new() })
    }

    /// Creates `name` and hands the writer and the provenance line to `fill`.
    pub fn csv<F>(&mut self, name: &str, fill: F) -> Result<()>
    where
        F: FnOnce(&mut dyn Write, &str) -> Result<()>,
    {
        let mut w = BufWriter::new(File::create(self.dir.join(name))?);
        fill(&mut w, &self.provenance)?;
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Writes a plain CSV table with a provenance comment line.
    pub fn table(&mut self, name: &str, header: &str, rows: &[Vec<String>]) -> Result<()> {
        self.csv(name, |w, p| {
            writeln!(w, "# {p}")?;
            writeln!(w, "{header}")?;
            for r in rows {
                writeln!(w, "{}", r.join(","))?;
            }
            Ok(())
        })
    }
}

/// Results of one experiment before they are written out.
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
}

/// What a completed run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub checks: Vec<Check>,
    pub files: Vec<String>,
    pub results: Value,
}

/// Runs `kind` with `cfg`, writing into `out`.
pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig, out: &Path) -> Result<RunSummary> {
    if let Some(k) = cfg.experiment {
        if k != kind {
            return Err(Error::Config(format!("config is for experiment {k}, not {kind}")));
        }
    }
    cfg.validate()?;
    let mut emit = Emitter::new(out, cfg, kind)?;
    let outcome = match kind {
        ExperimentKind::Moments => runs::moments(cfg, &mut emit),
        ExperimentKind::Ward => runs::ward(cfg, &mut emit),
        ExperimentKind::Isotropy => runs::isotropy(cfg, &mut emit),
        ExperimentKind::Clt => runs::clt(cfg, &mut emit),
        ExperimentKind::Field => runs::field(cfg, &mut emit),
        ExperimentKind::Gmc => runs::gmc(cfg, &mut emit),
        ExperimentKind::Kernel => runs::kernel(cfg, &mut emit),
        ExperimentKind::Harmonic => runs::harmonic(cfg, &mut emit),
        ExperimentKind::Freezing => runs::freezing(cfg, &mut emit),
        ExperimentKind::Thickpoints => runs::thickpoints(cfg, &mut emit),
        ExperimentKind::Max => runs::max(cfg, &mut emit),
    }?;
    let derived: Vec<DerivedScales> =
        cfg.size_list().into_iter().map(|n| DerivedScales::new(n, cfg.kappa, cfg.alpha)).collect();
    let mut files = emit.files.clone();
    files.push("results.json".into());
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": VERSION,
        "config_sha256": cfg.hash(),
        "experiment": kind,
        "config": cfg,
        "derived": derived,
        "results": outcome.results,
        "checks": outcome.checks,
        "files": files,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    fs::write(out.join("results.json"), text)?;
    Ok(RunSummary { checks: outcome.checks, files, results: outcome.results })
}
