use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nsaa::harness::{
    labelled_path, run_experiment, sweep, write_summary, write_trace, ExperimentConfig,
};
use nsaa::problems::gen_lasso;
use nsaa::RunSummary;

#[derive(Parser)]
#[command(name = "nsaa", version, about = "Anderson-accelerated nonsmooth solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Stop when the fixed-point residual is at most this value.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Seed for the problem instance and starting point.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the baseline and one accelerated run per memory size.
    Sweep {
        config: PathBuf,
        /// Comma-separated memory sizes.
        #[arg(long, value_delimiter = ',', default_value = "5,10,15")]
        memory: Vec<usize>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write a Lasso instance as `A`, `y` and `x_true` text files.
    GenLasso {
        m: usize,
        n: usize,
        seed: u64,
        /// Output directory.
        out: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        lambda: f64,
        #[arg(long, default_value_t = 1e-4)]
        noise_var: f64,
    },
}

fn load(config: &Path, o: &Overrides) -> Result<ExperimentConfig> {
    let cfg = ExperimentConfig::from_file(config)
        .with_context(|| format!("loading {}", config.display()))?;
    Ok(cfg.with_overrides(o.tol, o.max_iter, o.seed)?)
}

fn report(summaries: &[RunSummary], path: Option<&Path>) -> Result<()> {
    print!("{}", nsaa::harness::format_summaries(summaries));
    if let Some(p) = path {
        write_summary(summaries, p)?;
    }
    Ok(())
}

fn write_vector(path: &Path, v: &[f64]) -> Result<()> {
    let text: String = v.iter().map(|x| format!("{x:.16e}\n")).collect();
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            let (trace, summary) = run_experiment(&cfg)?;
            if let Some(p) = &cfg.trace_path {
                write_trace(&trace, p)?;
            }
            report(&[summary], cfg.summary_path.as_deref())?;
        }
        Command::Sweep {
            config,
            memory,
            overrides,
        } => {
            if memory.iter().any(|m| !(1..=64).contains(m)) {
                bail!("memory sizes must lie in [1, 64]");
            }
            let cfg = load(&config, &overrides)?;
            let runs = sweep(&cfg, &memory)?;
            if let Some(p) = &cfg.trace_path {
                let labels = std::iter::once("base".to_string())
                    .chain(memory.iter().map(|m| format!("m{m}")));
                for ((trace, _), label) in runs.iter().zip(labels) {
                    write_trace(trace, &labelled_path(p, &label))?;
                }
            }
            let summaries: Vec<RunSummary> = runs.into_iter().map(|(_, s)| s).collect();
            report(&summaries, cfg.summary_path.as_deref())?;
        }
        Command::GenLasso {
            m,
            n,
            seed,
            out,
            lambda,
            noise_var,
        } => {
            let inst = gen_lasso(m, n, lambda, noise_var, seed)?;
            std::fs::create_dir_all(&out)
                .with_context(|| format!("creating {}", out.display()))?;
            let rows: String = (0..inst.a.rows())
                .map(|i| {
                    let cells: Vec<String> =
                        inst.a.row(i).iter().map(|v| format!("{v:.16e}")).collect();
                    cells.join(" ") + "\n"
                })
                .collect();
            std::fs::write(out.join("A.txt"), rows).context("writing A.txt")?;
            write_vector(&out.join("y.txt"), &inst.y)?;
            write_vector(&out.join("x_true.txt"), &inst.x_true)?;
            println!("wrote {m}x{n} instance to {}", out.display());
        }
    }
    Ok(())
}
