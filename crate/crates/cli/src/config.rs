//! Run configuration: CLI flags merged over an optional JSON config file,
//! merged over defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use dff_core::Variant;

use crate::error::{io_error, CliError};

/// The six-scale default grid: 1 down to 1e-5 by decades.
pub const DEFAULT_T_GRID: [f64; 6] = [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5];

/// Keys accepted in the JSON config file; identical to the flag names.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dataset_dir: Option<PathBuf>,
    pub dataset: Option<String>,
    pub variants: Option<Vec<String>>,
    pub t: Option<Vec<f64>>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub fn load_config_file(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))
}

/// A fully resolved run: every field validated and defaulted.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset_dir: PathBuf,
    pub dataset: String,
    pub variants: Vec<Variant>,
    pub t_values: Vec<f64>,
    pub folds: usize,
    pub seed: u64,
    pub repeats: usize,
    pub out: PathBuf,
    pub jobs: Option<usize>,
}

/// Flag values as parsed; `None` means "not given on the command line".
#[derive(Debug, Default)]
pub struct RunFlags {
    pub dataset_dir: Option<PathBuf>,
    pub dataset: Option<String>,
    pub variants: Option<Vec<String>>,
    pub t: Option<Vec<f64>>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// The default dataset directory: `$DFF_DATA_DIR` if set, else `./data`.
pub fn default_dataset_dir() -> PathBuf {
    std::env::var_os("DFF_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

pub fn resolve(flags: RunFlags, file: ConfigFile) -> Result<RunConfig, CliError> {
    let dataset = flags
        .dataset
        .or(file.dataset)
        .ok_or_else(|| CliError::Usage("--dataset is required".to_string()))?;
    let dataset_dir = flags
        .dataset_dir
        .or(file.dataset_dir)
        .unwrap_or_else(default_dataset_dir);

    let variant_names = flags
        .variants
        .or(file.variants)
        .unwrap_or_else(|| Variant::ALL.iter().map(|v| v.name().to_string()).collect());
    if variant_names.is_empty() {
        return Err(CliError::Usage("--variants must not be empty".to_string()));
    }
    let variants = variant_names
        .iter()
        .map(|name| Variant::from_str(name).map_err(CliError::Usage))
        .collect::<Result<Vec<_>, _>>()?;

    let t_values = flags.t.or(file.t).unwrap_or_else(|| DEFAULT_T_GRID.to_vec());
    if t_values.is_empty() {
        return Err(CliError::Usage("--t must not be empty".to_string()));
    }
    if let Some(bad) = t_values.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(CliError::Usage(format!(
            "scale parameter t must be positive and finite, got {bad}"
        )));
    }

    let folds = flags.folds.or(file.folds).unwrap_or(10);
    if folds < 2 {
        return Err(CliError::Usage(format!(
            "--folds must be at least 2, got {folds}"
        )));
    }
    let repeats = flags.repeats.or(file.repeats).unwrap_or(1);
    if repeats < 1 {
        return Err(CliError::Usage("--repeats must be at least 1".to_string()));
    }

    Ok(RunConfig {
        dataset_dir,
        dataset,
        variants,
        t_values,
        folds,
        seed: flags.seed.or(file.seed).unwrap_or(0),
        repeats,
        out: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from("results")),
        jobs: flags.jobs.or(file.jobs),
    })
}

/// Accepts both dataset layouts: files directly under `dataset_dir`, or
/// nested one level as `dataset_dir/<name>/<name>_A.txt` (the shape the
/// benchmark archives unpack to).
pub fn locate_dataset(dataset_dir: &Path, name: &str) -> PathBuf {
    let nested = dataset_dir.join(name);
    if nested.join(format!("{name}_A.txt")).is_file() {
        nested
    } else {
        dataset_dir.to_path_buf()
    }
}

/// Serializes `t` for file names: `1e0`, `1e-3`, `2.5e-1`.
pub fn t_tag(t: f64) -> String {
    format!("{t:e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_file_which_overrides_defaults() {
        let file = ConfigFile {
            dataset: Some("FROMFILE".to_string()),
            seed: Some(9),
            folds: Some(5),
            ..Default::default()
        };
        let flags = RunFlags {
            dataset: Some("FROMFLAG".to_string()),
            ..Default::default()
        };
        let cfg = resolve(flags, file).unwrap();
        assert_eq!(cfg.dataset, "FROMFLAG");
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.folds, 5);
        assert_eq!(cfg.repeats, 1);
        assert_eq!(cfg.t_values, DEFAULT_T_GRID.to_vec());
        assert_eq!(cfg.variants.len(), 5);
    }

    #[test]
    fn missing_dataset_is_a_usage_error() {
        match resolve(RunFlags::default(), ConfigFile::default()) {
            Err(CliError::Usage(m)) => assert!(m.contains("--dataset")),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_t_is_a_usage_error() {
        let flags = RunFlags {
            dataset: Some("X".to_string()),
            t: Some(vec![1.0, 0.0]),
            ..Default::default()
        };
        assert!(matches!(
            resolve(flags, ConfigFile::default()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn unknown_variant_is_a_usage_error() {
        let flags = RunFlags {
            dataset: Some("X".to_string()),
            variants: Some(vec!["edge-sideways".to_string()]),
            ..Default::default()
        };
        assert!(matches!(
            resolve(flags, ConfigFile::default()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn t_tags_match_the_grid() {
        let tags: Vec<String> = DEFAULT_T_GRID.iter().map(|&t| t_tag(t)).collect();
        assert_eq!(tags, vec!["1e0", "1e-1", "1e-2", "1e-3", "1e-4", "1e-5"]);
    }
}
