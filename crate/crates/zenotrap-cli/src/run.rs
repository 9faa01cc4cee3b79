//! Artifact generation: traces, threshold maps, manifests, plot scripts.

use anyhow::{bail, Context, Result};
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::config::{resolve, to_manifest, ScenarioConfig, DEFAULT_THRESHOLD_N_MAX};
use zenotrap::analysis::{write_threshold_csv, zeno_threshold_map};
use zenotrap::population::{
    p_down_envelope_approx, p_down_series, p_down_series_per_manifold, write_population_csv,
};

/// Files written by [`run_scenario`], plus non-fatal warnings to surface.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub manifest: PathBuf,
    pub trace: Option<PathBuf>,
    pub threshold: Option<PathBuf>,
    pub plot_script: Option<PathBuf>,
    pub warnings: Vec<String>,
}

impl RunArtifacts {
    /// Paths in the order they should be reported.
    pub fn paths(&self) -> Vec<&PathBuf> {
        let mut all = vec![&self.manifest];
        all.extend(self.trace.iter());
        all.extend(self.threshold.iter());
        all.extend(self.plot_script.iter());
        all
    }
}

/// Resolves and simulates one scenario, writing every flagged artifact into
/// `out_dir`. The manifest is always written; it reproduces this run when
/// passed back to `run`.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    base_dir: &Path,
    out_dir: &Path,
) -> Result<RunArtifacts> {
    let resolved = resolve(cfg, base_dir)
        .with_context(|| format!("scenario {:?} did not resolve", cfg.name))?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("could not create output directory {}", out_dir.display()))?;

    let mut trace_path = None;
    if cfg.output.trace_enabled() {
        let trace = if cfg.output.per_manifold_enabled() {
            p_down_series_per_manifold(&resolved.params, &resolved.distribution, &resolved.grid)
        } else {
            p_down_series(&resolved.params, &resolved.distribution, &resolved.grid)
        }
        .context("population series failed")?;

        let envelope = if cfg.output.envelope_enabled() {
            if cfg.distribution.kind != "coherent" {
                bail!(
                    "the envelope overlay is defined for coherent ensembles, not {:?}",
                    cfg.distribution.kind
                );
            }
            let n_bar = cfg
                .distribution
                .n_bar
                .context("coherent distribution without n_bar")?;
            Some(
                p_down_envelope_approx(&resolved.params, n_bar, &resolved.grid)
                    .context("envelope approximation failed")?,
            )
        } else {
            None
        };

        let path = out_dir.join(format!("{}_trace.csv", cfg.name));
        let file = fs::File::create(&path)
            .with_context(|| format!("could not create {}", path.display()))?;
        write_population_csv(&trace, envelope.as_deref(), BufWriter::new(file))
            .with_context(|| format!("could not write {}", path.display()))?;
        trace_path = Some(path);
    }

    let mut threshold_path = None;
    if cfg.output.threshold_map_enabled() {
        let n_max = cfg
            .output
            .threshold_n_max
            .unwrap_or(DEFAULT_THRESHOLD_N_MAX);
        threshold_path = Some(write_threshold_artifact(cfg, base_dir, out_dir, n_max)?);
    }

    let mut plot_path = None;
    if cfg.output.plot_script_enabled() {
        let sources: Vec<PathBuf> = trace_path
            .iter()
            .chain(threshold_path.iter())
            .cloned()
            .collect();
        if sources.is_empty() {
            bail!("plot_script requested but the run produced no CSV artifacts");
        }
        let path = out_dir.join(format!("{}.gp", cfg.name));
        emit_plot_script(&sources, &path, Some(&cfg.name))?;
        plot_path = Some(path);
    }

    let manifest = out_dir.join(format!("{}_manifest.toml", cfg.name));
    fs::write(&manifest, to_manifest(cfg, &resolved))
        .with_context(|| format!("could not write {}", manifest.display()))?;

    Ok(RunArtifacts {
        manifest,
        trace: trace_path,
        threshold: threshold_path,
        plot_script: plot_path,
        warnings: resolved.warnings,
    })
}

/// Computes and writes `<name>_threshold.csv` for a scenario, independent of
/// the trace outputs. Used by the `threshold-map` subcommand and by runs
/// whose config flags `output.threshold_map`.
pub fn write_threshold_artifact(
    cfg: &ScenarioConfig,
    base_dir: &Path,
    out_dir: &Path,
    n_max: u32,
) -> Result<PathBuf> {
    let resolved = resolve(cfg, base_dir)
        .with_context(|| format!("scenario {:?} did not resolve", cfg.name))?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("could not create output directory {}", out_dir.display()))?;
    let points = zeno_threshold_map(&resolved.params, n_max).context("threshold map failed")?;
    let path = out_dir.join(format!("{}_threshold.csv", cfg.name));
    let file = fs::File::create(&path)
        .with_context(|| format!("could not create {}", path.display()))?;
    write_threshold_csv(&points, BufWriter::new(file))
        .with_context(|| format!("could not write {}", path.display()))?;
    Ok(path)
}

/// Writes a gnuplot script that renders the given CSV artifacts: population
/// traces (with the envelope overlay when the file carries that column) on a
/// millisecond axis, and threshold maps as log-scale stem plots. CSVs are
/// referenced by bare file name when they sit next to the script.
pub fn emit_plot_script(csvs: &[PathBuf], out: &Path, title: Option<&str>) -> Result<()> {
    if csvs.is_empty() {
        bail!("no CSV files given");
    }
    let mut stanzas = Vec::new();
    for csv in csvs {
        let header = first_line(csv)
            .with_context(|| format!("could not read data file {}", csv.display()))?;
        let columns: Vec<&str> = header.trim_end().split(',').collect();
        let reference = plot_reference(csv, out);
        if columns.first() == Some(&"n") {
            stanzas.push(threshold_stanza(&reference));
        } else {
            stanzas.push(trace_stanza(&reference, &columns));
        }
    }

    let mut script = String::new();
    script.push_str("# gnuplot script generated by zenotrap emit-plot-script\n");
    script.push_str("set datafile separator ','\n");
    script.push_str("set grid\n");
    if let Some(title) = title {
        script.push_str(&format!("set title '{title}'\n"));
    }
    let multi = stanzas.len() > 1;
    if multi {
        script.push_str(&format!("set multiplot layout {},1\n", stanzas.len()));
    }
    for stanza in &stanzas {
        script.push_str(stanza);
    }
    if multi {
        script.push_str("unset multiplot\n");
    }
    script.push_str("pause -1 'press enter to close'\n");

    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .with_context(|| format!("could not create {}", parent.display()))?;
    }
    fs::write(out, script).with_context(|| format!("could not write {}", out.display()))?;
    Ok(())
}

fn first_line(path: &Path) -> Result<String> {
    let text = fs::read_to_string(path)?;
    Ok(text.lines().next().unwrap_or_default().to_string())
}

fn plot_reference(csv: &Path, script: &Path) -> String {
    if csv.parent() == script.parent() {
        if let Some(name) = csv.file_name() {
            return name.to_string_lossy().into_owned();
        }
    }
    csv.to_string_lossy().into_owned()
}

fn trace_stanza(reference: &str, columns: &[&str]) -> String {
    let mut s = String::new();
    s.push_str("set xlabel 't (ms)'\n");
    s.push_str("set ylabel 'population'\n");
    s.push_str("set yrange [0:1.05]\n");
    s.push_str("unset logscale y\n");
    s.push_str(&format!(
        "plot '{reference}' using ($1*1e3):2 with lines lw 2 title 'p_{{down}}'"
    ));
    if let Some(column) = columns.iter().position(|&c| c == "envelope") {
        s.push_str(&format!(
            ", \\\n     '' using ($1*1e3):{} with lines dashtype 2 title 'envelope'",
            column + 1
        ));
    }
    s.push('\n');
    s
}

fn threshold_stanza(reference: &str) -> String {
    let mut s = String::new();
    s.push_str("set xlabel 'manifold n'\n");
    s.push_str("set ylabel 'kappa_{crit} (1/s)'\n");
    s.push_str("unset yrange\n");
    s.push_str("set logscale y\n");
    s.push_str(&format!(
        "plot '{reference}' using 1:2 with linespoints pt 7 title 'kappa_{{crit}}(n)'\n"
    ));
    s
}

/// Writes one "<stream>" line per artifact for the CLI to print.
pub fn describe(artifacts: &RunArtifacts) -> String {
    artifacts
        .paths()
        .iter()
        .map(|p| format!("wrote {}", p.display()))
        .collect::<Vec<_>>()
        .join("\n")
}
