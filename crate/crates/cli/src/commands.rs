//! The four subcommands: extract, classify, report, stats.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dff_core::features::to_csv;
use dff_core::pipeline::{classify_cell, extract_features, summarize_complexes, CellResult};
use dff_core::tudata::{load_dataset, LabeledGraphDataset};
use dff_core::{FeatureMatrix, ForestConfig, Variant};

use crate::config::{locate_dataset, t_tag, RunConfig};
use crate::error::{io_error, CliError};

fn load(cfg: &RunConfig) -> Result<LabeledGraphDataset, CliError> {
    let dir = locate_dataset(&cfg.dataset_dir, &cfg.dataset);
    Ok(load_dataset(&dir, &cfg.dataset)?)
}

/// Extracts feature matrices for every configured variant; the t axis of
/// each variant shares one spectral decomposition per graph.
fn extract_all(
    dataset: &LabeledGraphDataset,
    cfg: &RunConfig,
) -> Result<Vec<FeatureMatrix>, CliError> {
    let mut matrices = Vec::with_capacity(cfg.variants.len() * cfg.t_values.len());
    for &variant in &cfg.variants {
        matrices.extend(extract_features(dataset, variant, &cfg.t_values)?);
    }
    Ok(matrices)
}

fn feature_csv_path(out: &Path, m: &FeatureMatrix) -> PathBuf {
    out.join(format!(
        "{}_{}_t{}.csv",
        m.dataset,
        m.variant,
        t_tag(m.t)
    ))
}

/// Writes one CSV per matrix; on any failure every file written so far is
/// removed, so the output directory never holds a partial grid.
fn write_feature_csvs(out: &Path, matrices: &[FeatureMatrix]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    let mut written = Vec::with_capacity(matrices.len());
    for m in matrices {
        let path = feature_csv_path(out, m);
        if let Err(e) = fs::write(&path, to_csv(m)) {
            let failed = io_error(&path, e);
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(failed);
        }
        written.push(path);
    }
    Ok(written)
}

/// `dff extract`: feature CSVs only.
pub fn run_extract(cfg: &RunConfig) -> Result<(), CliError> {
    let dataset = load(cfg)?;
    let matrices = extract_all(&dataset, cfg)?;
    let written = write_feature_csvs(&cfg.out, &matrices)?;
    println!(
        "wrote {} feature files for {} to {}",
        written.len(),
        cfg.dataset,
        cfg.out.display()
    );
    Ok(())
}

/// Everything the classify run produces, serialized as the results JSON.
#[derive(Serialize)]
struct ResultsDocument<'a> {
    dataset: &'a str,
    folds: usize,
    seed: u64,
    repeats: usize,
    t_values: &'a [f64],
    variants: Vec<&'static str>,
    cells: &'a [CellResult],
}

pub fn results_json_path(out: &Path, dataset: &str) -> PathBuf {
    out.join(format!("{dataset}_results.json"))
}

/// `dff classify`: feature CSVs, per-cell cross-validation, results JSON,
/// and an accuracy grid on stdout.
pub fn run_classify(cfg: &RunConfig, features_only: bool) -> Result<(), CliError> {
    let dataset = load(cfg)?;
    let matrices = extract_all(&dataset, cfg)?;
    write_feature_csvs(&cfg.out, &matrices)?;
    if features_only {
        println!(
            "wrote {} feature files for {} to {}",
            matrices.len(),
            cfg.dataset,
            cfg.out.display()
        );
        return Ok(());
    }

    let forest_cfg = ForestConfig {
        seed: cfg.seed,
        ..ForestConfig::default()
    };
    let cells: Vec<CellResult> = matrices
        .par_iter()
        .map(|m| classify_cell(m, cfg.folds, &forest_cfg, cfg.repeats))
        .collect::<Result<_, _>>()
        .map_err(CliError::from)?;

    let document = ResultsDocument {
        dataset: &cfg.dataset,
        folds: cfg.folds,
        seed: cfg.seed,
        repeats: cfg.repeats,
        t_values: &cfg.t_values,
        variants: cfg.variants.iter().map(|v| v.name()).collect(),
        cells: &cells,
    };
    let json_path = results_json_path(&cfg.out, &cfg.dataset);
    let mut text = serde_json::to_string_pretty(&document)
        .map_err(|e| CliError::Numeric(format!("serializing results: {e}")))?;
    text.push('\n');
    fs::write(&json_path, text).map_err(|e| io_error(&json_path, e))?;

    print!("{}", render_grid(cfg, &cells));
    print!("{}", render_best_summary(cfg, &cells));
    println!("results written to {}", json_path.display());
    Ok(())
}

/// The (variant × t) accuracy grid as an aligned text table, in percent.
fn render_grid(cfg: &RunConfig, cells: &[CellResult]) -> String {
    let name_width = cfg
        .variants
        .iter()
        .map(|v| v.name().len())
        .max()
        .unwrap_or(0)
        .max("variant".len());
    let mut out = format!("{:<name_width$}", "variant");
    for &t in &cfg.t_values {
        out.push_str(&format!("{:>10}", format!("t={}", t_tag(t))));
    }
    out.push('\n');
    for (vi, variant) in cfg.variants.iter().enumerate() {
        out.push_str(&format!("{:<name_width$}", variant.name()));
        for ti in 0..cfg.t_values.len() {
            let cell = &cells[vi * cfg.t_values.len() + ti];
            out.push_str(&format!("{:>10.2}", cell.mean_accuracy * 100.0));
        }
        out.push('\n');
    }
    out
}

/// One line per variant: its best accuracy over the t grid.
fn render_best_summary(cfg: &RunConfig, cells: &[CellResult]) -> String {
    let mut out = String::new();
    for (vi, variant) in cfg.variants.iter().enumerate() {
        let row = &cells[vi * cfg.t_values.len()..(vi + 1) * cfg.t_values.len()];
        let best = row
            .iter()
            .max_by(|a, b| a.mean_accuracy.total_cmp(&b.mean_accuracy))
            .expect("non-empty t grid");
        out.push_str(&format!(
            "best {}: {:.2}% at t={}\n",
            variant.name(),
            best.mean_accuracy * 100.0,
            t_tag(best.t)
        ));
    }
    out
}

#[derive(Deserialize)]
struct ResultsIn {
    dataset: String,
    cells: Vec<CellIn>,
}

#[derive(Deserialize)]
struct CellIn {
    variant: String,
    t: f64,
    mean_accuracy: f64,
}

/// One plot row: `dataset,method,accuracy,source` with accuracy in percent.
#[derive(Debug, PartialEq)]
struct PlotRow {
    dataset: String,
    method: String,
    accuracy: f64,
    source: &'static str,
}

/// `dff report`: merges every `*_results.json` under `results_dir` with an
/// optional transcribed-baselines CSV into `plot_data.csv`.
pub fn run_report(results_dir: &Path, baselines: Option<&Path>) -> Result<PathBuf, CliError> {
    let mut result_files: Vec<PathBuf> = fs::read_dir(results_dir)
        .map_err(|e| io_error(results_dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.ends_with("_results.json"))
        })
        .collect();
    result_files.sort();
    if result_files.is_empty() {
        return Err(CliError::Data(format!(
            "no results found: {} holds no *_results.json files",
            results_dir.display()
        )));
    }

    let mut rows = Vec::new();
    for path in &result_files {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let results: ResultsIn = serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        // Best accuracy over t per variant, variants in canonical order.
        for variant in Variant::ALL {
            let best = results
                .cells
                .iter()
                .filter(|c| c.variant == variant.name())
                .max_by(|a, b| a.mean_accuracy.total_cmp(&b.mean_accuracy));
            if let Some(cell) = best {
                log::debug!(
                    "{}: best {} at t={}",
                    results.dataset,
                    variant.name(),
                    cell.t
                );
                rows.push(PlotRow {
                    dataset: results.dataset.clone(),
                    method: variant.name().to_string(),
                    accuracy: cell.mean_accuracy * 100.0,
                    source: "computed",
                });
            }
        }
    }

    if let Some(path) = baselines {
        rows.extend(parse_baselines(path)?);
    }
    rows.sort_by(|a, b| {
        (&a.dataset, a.source, &a.method).cmp(&(&b.dataset, b.source, &b.method))
    });

    let mut csv = String::from("dataset,method,accuracy,source\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{:.2},{}\n",
            row.dataset, row.method, row.accuracy, row.source
        ));
    }
    let out_path = results_dir.join("plot_data.csv");
    fs::write(&out_path, csv).map_err(|e| io_error(&out_path, e))?;
    Ok(out_path)
}

/// Parses the reference CSV of baseline accuracies (`dataset,method,accuracy`
/// in percent, one header line). These are transcribed literature values,
/// never computed here.
fn parse_baselines(path: &Path) -> Result<Vec<PlotRow>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || idx == 0 {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [dataset, method, accuracy] = fields.as_slice() else {
            return Err(CliError::Data(format!(
                "{} line {}: expected dataset,method,accuracy",
                path.display(),
                idx + 1
            )));
        };
        let accuracy: f64 = accuracy.trim().parse().map_err(|e| {
            CliError::Data(format!("{} line {}: {e}", path.display(), idx + 1))
        })?;
        rows.push(PlotRow {
            dataset: dataset.trim().to_string(),
            method: method.trim().to_string(),
            accuracy,
            source: "transcribed",
        });
    }
    Ok(rows)
}

/// `dff stats`: per-graph super-graph complex sizes plus dataset maxima.
pub fn run_stats(cfg: &RunConfig) -> Result<(), CliError> {
    let dataset = load(cfg)?;
    let summaries = summarize_complexes(&dataset);
    println!("graph_id  class  vertices  edges  triangles  dropped_selfloops");
    for s in &summaries {
        println!(
            "{:<8}  {:<5}  {:<8}  {:<5}  {:<9}  {}",
            s.graph_id, s.class_label, s.vertices, s.edges, s.triangles, s.dropped_selfloops
        );
    }
    let max_v = summaries.iter().map(|s| s.vertices).max().unwrap_or(0);
    let max_e = summaries.iter().map(|s| s.edges).max().unwrap_or(0);
    let max_t = summaries.iter().map(|s| s.triangles).max().unwrap_or(0);
    println!(
        "graphs={} max_vertices={max_v} max_edges={max_e} max_triangles={max_t}",
        summaries.len()
    );
    Ok(())
}
