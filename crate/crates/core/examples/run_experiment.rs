//! Drives the experiment runner from code, as the `fhlab` binary does.

use fhlab::experiment::{run, ExperimentConfig, ExperimentKind};

fn main() -> fhlab::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{ "n": 128, "samples": 200, "seed": 1,
             "ward_fns": [{ "kind": "monomial", "k": 2 }] }"#,
    )?;
    let out = std::env::temp_dir().join("fhlab_ward");
    let summary = run(ExperimentKind::Ward, &cfg, &out)?;
    for c in &summary.checks {
        println!("{c}");
    }
    println!("files in {}: {:?}", out.display(), summary.files);
    Ok(())
}
