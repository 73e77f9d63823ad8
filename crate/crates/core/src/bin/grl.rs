use anyhow::{Context, Result};
use clap::Parser;
use grl::agents::AgentKind;
use grl::harness::{aggregate, manifest, run_batch, write_csv, ExperimentConfig};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

/// Run a batch of agent-environment simulations and write CSV traces.
#[derive(Parser, Debug)]
#[command(name = "grl", version)]
struct Args {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; receives <config-stem>.csv and manifest.json.
    #[arg(long)]
    out: PathBuf,
    /// Override the number of runs.
    #[arg(long)]
    runs: Option<usize>,
    /// Override the base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the agent kind.
    #[arg(long)]
    agent: Option<AgentKind>,
    /// Suppress the summary line.
    #[arg(long)]
    quiet: bool,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();

    let mut cfg = ExperimentConfig::load(&args.config)
        .with_context(|| format!("loading config {}", args.config.display()))?;
    if let Some(runs) = args.runs {
        cfg.runs = runs;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(kind) = args.agent {
        cfg.agent.kind = kind;
    }
    cfg.validate()?;
    let setup = cfg.environment()?;

    let traces = run_batch(&cfg, &setup)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let stem = args.config.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
    let csv_name = format!("{stem}.csv");
    let csv_path = args.out.join(&csv_name);
    let mut csv = BufWriter::new(File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?);
    write_csv(&mut csv, &traces)?;
    let manifest_path = args.out.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest(&cfg, &csv_name))? + "\n")?;

    if !args.quiet {
        let agg = aggregate(&traces)?;
        let last = agg.avg_reward.mean.len() - 1;
        let explored = agg
            .explored_pct
            .as_ref()
            .map(|s| format!(", explored {:.1}% (sd {:.1})", s.mean[last], s.std[last]))
            .unwrap_or_default();
        println!(
            "{} x{}: avg reward {:.3} (sd {:.3}){} -> {}",
            cfg.agent.kind,
            cfg.runs,
            agg.avg_reward.mean[last],
            agg.avg_reward.std[last],
            explored,
            csv_path.display()
        );
    }
    Ok(())
}
