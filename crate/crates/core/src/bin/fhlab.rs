use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fhlab::experiment::{run, ExperimentConfig, ExperimentKind};
use fhlab::Error;

/// Run one experiment from a JSON config and write results.json plus CSV
/// files to the output directory.
#[derive(Parser, Debug)]
#[command(name = "fhlab", version)]
struct Args {
    experiment: ExperimentKind,
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory; defaults to $RESULT_DIR, then `results`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(all_pass) => {
            if !all_pass {
                eprintln!("some built-in checks failed");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<bool, Error> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    cfg.validate()?;
    let out = args
        .out
        .clone()
        .or_else(|| std::env::var_os("RESULT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    faer::set_global_parallelism(faer::Par::Seq);
    let threads = cfg.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let summary = pool.install(|| run(args.experiment, &cfg, &out))?;
    for c in &summary.checks {
        println!("{c}");
    }
    println!("wrote {} files to {}", summary.files.len(), out.display());
    Ok(summary.checks.iter().all(|c| c.pass))
}
