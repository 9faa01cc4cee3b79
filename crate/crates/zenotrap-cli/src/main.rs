use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use zenotrap_cli::config::DEFAULT_THRESHOLD_N_MAX;
use zenotrap_cli::run::{describe, emit_plot_script, run_scenario, write_threshold_artifact};
use zenotrap_cli::{apply_overrides, load_scenario, presets, Overrides};

/// Trapped-ion sideband dynamics under continuous measurement.
#[derive(Parser)]
#[command(name = "zenotrap", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a preset or TOML scenario; writes CSV traces and a manifest.
    Run {
        /// Preset name (see `list-presets`) or path to a scenario TOML.
        scenario: String,
        /// Directory the artifacts are written into.
        #[arg(long, default_value = "runs")]
        out_dir: PathBuf,
        /// Override the distribution truncation tolerance.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Override the number of grid samples.
        #[arg(long)]
        points: Option<usize>,
        /// Set the measurement coupling to this fraction of the critical
        /// coupling, replacing whatever the scenario specified.
        #[arg(long)]
        kappa_ratio: Option<f64>,
        /// Frame for reported coherences.
        #[arg(long, value_parser = ["paper", "lab"])]
        coherence_frame: Option<String>,
    },
    /// List the built-in presets.
    ListPresets,
    /// Write the critical-coupling map kappa_crit(n) of a scenario.
    ThresholdMap {
        /// Preset name or path to a scenario TOML.
        scenario: String,
        /// Highest manifold to include.
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long, default_value = "runs")]
        out_dir: PathBuf,
    },
    /// Generate a gnuplot script for existing CSV artifacts.
    EmitPlotScript {
        /// CSV files produced by `run` or `threshold-map`.
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        #[arg(long, default_value = "plot.gp")]
        out: PathBuf,
        #[arg(long)]
        title: Option<String>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            scenario,
            out_dir,
            epsilon,
            points,
            kappa_ratio,
            coherence_frame,
        } => {
            let (mut cfg, base_dir) =
                load_scenario(&scenario).with_context(|| format!("loading {scenario:?}"))?;
            let overrides = Overrides {
                epsilon,
                points,
                kappa_ratio,
                coherence_frame,
            };
            apply_overrides(&mut cfg, &overrides);
            let artifacts = run_scenario(&cfg, &base_dir, &out_dir)?;
            for warning in &artifacts.warnings {
                eprintln!("warning: {warning}");
            }
            println!("{}", describe(&artifacts));
        }
        Command::ListPresets => {
            for (name, summary) in presets::preset_summaries() {
                println!("{name:8} {summary}");
            }
        }
        Command::ThresholdMap {
            scenario,
            n_max,
            out_dir,
        } => {
            let (cfg, base_dir) =
                load_scenario(&scenario).with_context(|| format!("loading {scenario:?}"))?;
            let n_max = n_max
                .or(cfg.output.threshold_n_max)
                .unwrap_or(DEFAULT_THRESHOLD_N_MAX);
            let path = write_threshold_artifact(&cfg, &base_dir, &out_dir, n_max)?;
            println!("wrote {}", path.display());
        }
        Command::EmitPlotScript { csv, out, title } => {
            emit_plot_script(&csv, &out, title.as_deref())?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}
