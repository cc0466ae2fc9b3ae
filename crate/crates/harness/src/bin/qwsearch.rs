use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qwsearch::{Guards, ProductSearch, Tolerances};
use qwsearch_harness::output::write_csv;
use qwsearch_harness::{
    measure_state, parse_state_spec, run_and_write, sweep_resource_curves, verify_suite, ExperimentConfig, CurveOptions, HarnessError, Result,
};

#[derive(Parser)]
#[command(name = "qwsearch", version, about = "Quantum-walk search on the hypercube and the resources behind its success probability")]
struct Cli {
    /// Cap on worker threads (overrides run.threads).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory that relative output paths resolve against.
    #[arg(long, global = true, env = "QWSEARCH_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a key-value config file.
    Run { config: PathBuf },
    /// Emit the f_c, E_g and C_f probability curves as one CSV.
    #[command(name = "sweep-fig4")]
    SweepCurves {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value = "curves.csv")]
        out: PathBuf,
    },
    /// Print f_c, E_g and C_f of a state, e.g. "ghz n=3".
    Measures {
        spec: String,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the oracle suite for n = 2..=max-n.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn resolve(out_dir: &Option<PathBuf>, path: PathBuf) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path,
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(HarnessError::Config("--threads must be at least 1".into()));
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| HarnessError::Config(format!("thread pool: {e}")))
}

/// Returns `Ok(false)` when a check failed without an error.
fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let (csv, json, outcome) = pool(cli.threads.or(cfg.threads))?.install(|| run_and_write(&cfg, cli.out_dir.as_deref()))?;
            let check = &outcome.summary.deviation_check;
            println!("{} rows -> {}", outcome.rows.len(), csv.display());
            println!("summary -> {}", json.display());
            println!(
                "max |p_avg - p_pred| = {:.6} (bound {:.4} = {}/sqrt({}): {})",
                check.max_abs_dev,
                check.bound,
                check.constant,
                check.vertex_count,
                if check.within_bound { "within" } else { "exceeded" }
            );
            Ok(true)
        }
        Command::SweepCurves { n, samples, seed, restarts, out } => {
            let opts = CurveOptions { n, samples, seed, restarts };
            let rows = pool(cli.threads)?.install(|| sweep_resource_curves(&opts))?;
            let out = resolve(&cli.out_dir, out);
            write_csv(&out, &rows)?;
            println!("{} rows -> {}", rows.len(), out.display());
            Ok(true)
        }
        Command::Measures { spec, restarts, seed } => {
            let (n, family) = parse_state_spec(&spec)?;
            let report = pool(cli.threads)?.install(|| measure_state(n, &family, &ProductSearch::new(restarts, seed)))?;
            print!("{}", report.to_text());
            println!("{}", serde_json::to_string(&report)?);
            Ok(true)
        }
        Command::Verify { max_n, trials, seed } => {
            let checks = pool(cli.threads)?.install(|| verify_suite(max_n, trials, seed, &Tolerances::default(), &Guards::default()))?;
            for c in &checks {
                println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                eprintln!("invariant violated: oracle suite ({failed} failed checks)");
            }
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            match &e {
                HarnessError::Invariant { .. } => eprintln!("{e}"),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
