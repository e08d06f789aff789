//! End-to-end runs described by a manifest: parse, stats, matrix, clusters,
//! and (for the bundled case study) the errata report.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::case_study;
use crate::cluster::{threshold_cluster, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::io;
use crate::model::Dataset;
use crate::similarity::{compute_stats, similarity_matrix, Measure, SimilarityConfig, StdMode};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const MATRIX_FILE: &str = "matrix.csv";
pub const CLUSTERS_FILE: &str = "clusters.json";
pub const STATS_FILE: &str = "stats.csv";
pub const ERRATA_FILE: &str = "errata.csv";
pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Basket,
    Matrix,
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Basket => "basket",
            InputFormat::Matrix => "matrix",
        })
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basket" => Ok(InputFormat::Basket),
            "matrix" => Ok(InputFormat::Matrix),
            _ => Err(Error::InvalidConfig(format!(
                "unknown format `{s}` (expected basket or matrix)"
            ))),
        }
    }
}

pub fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn load_dataset(path: &Path, format: InputFormat) -> Result<Dataset> {
    let bytes = read_input(path)?;
    let parsed = match format {
        InputFormat::Basket => io::parse_basket_file(&bytes),
        InputFormat::Matrix => io::parse_matrix_file(&bytes),
    };
    parsed.map_err(|e| e.with_path(path))
}

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub input: PathBuf,
    pub format: InputFormat,
    pub config: SimilarityConfig,
    pub threshold: f64,
    pub output_dir: PathBuf,
    pub tool_version: String,
}

/// On-disk form; names are checked after deserializing so that a bad value
/// is a usage error rather than a syntax error.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    input: PathBuf,
    #[serde(default)]
    format: Option<String>,
    #[serde(default)]
    measure: Option<String>,
    #[serde(default)]
    std_mode: Option<String>,
    #[serde(default)]
    lambda: Option<f64>,
    #[serde(default)]
    threshold: Option<f64>,
    output_dir: PathBuf,
    #[serde(default)]
    tool_version: Option<String>,
}

impl RunManifest {
    pub fn new(input: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            format: InputFormat::default(),
            config: SimilarityConfig::default(),
            threshold: DEFAULT_THRESHOLD,
            output_dir: output_dir.into(),
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    /// Parses TOML; relative paths are resolved against `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: ManifestFile = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map_or(1, |s| text[..s.start].matches('\n').count() + 1);
            Error::parse(line, e.message().to_owned())
        })?;
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
        let m = Self {
            input: resolve(raw.input),
            format: raw
                .format
                .as_deref()
                .map_or(Ok(InputFormat::default()), str::parse)?,
            config: SimilarityConfig {
                lambda: raw.lambda.unwrap_or(1.0),
                std_mode: raw
                    .std_mode
                    .as_deref()
                    .map_or(Ok(StdMode::default()), str::parse)?,
                measure: raw
                    .measure
                    .as_deref()
                    .map_or(Ok(Measure::default()), str::parse)?,
            },
            threshold: raw.threshold.unwrap_or(DEFAULT_THRESHOLD),
            output_dir: resolve(raw.output_dir),
            tool_version: raw.tool_version.unwrap_or_else(|| TOOL_VERSION.to_owned()),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base).map_err(|e| e.with_path(path))
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::InvalidConfig(format!(
                "threshold must lie in [0, 1], got {}",
                self.threshold
            )));
        }
        Ok(())
    }

    /// Same manifest with both paths made absolute, so it can be reloaded from anywhere.
    pub fn absolute(&self) -> Result<Self> {
        let abs = |p: &Path| std::path::absolute(p).map_err(|e| Error::io(p, e));
        Ok(Self {
            input: abs(&self.input)?,
            output_dir: abs(&self.output_dir)?,
            ..self.clone()
        })
    }

    /// The manifest as it was executed, with the running tool's version.
    pub fn to_toml(&self) -> String {
        let raw = ManifestFile {
            input: self.input.clone(),
            format: Some(self.format.to_string()),
            measure: Some(self.config.measure.to_string()),
            std_mode: Some(self.config.std_mode.to_string()),
            lambda: Some(self.config.lambda),
            threshold: Some(self.threshold),
            output_dir: self.output_dir.clone(),
            tool_version: Some(TOOL_VERSION.to_owned()),
        };
        toml::to_string(&raw).expect("manifest serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub written: Vec<PathBuf>,
    pub clusters: usize,
    /// Number of errata rows, when the input was the bundled case study.
    pub errata_rows: Option<usize>,
}

/// Computes every artifact in memory and only then writes them, so a failed
/// run leaves nothing behind.
pub fn run_pipeline(manifest: &RunManifest) -> Result<PipelineReport> {
    manifest.validate()?;
    let ds = load_dataset(&manifest.input, manifest.format)?;
    let cfg = manifest.config;
    let stats = compute_stats(&ds, cfg.std_mode)?;
    let matrix = similarity_matrix(&ds, &cfg)?;
    let clustering = threshold_cluster(&matrix, manifest.threshold)?;

    let mut outputs: Vec<(&str, Vec<u8>)> = vec![
        (STATS_FILE, io::write_stats(&ds, &stats)),
        (MATRIX_FILE, io::write_matrix(&matrix)),
        (CLUSTERS_FILE, io::write_clusters(&clustering)),
    ];

    let mut errata_rows = None;
    if case_study::matches(&ds) {
        // the published table assumes the default configuration
        let reference = if cfg == SimilarityConfig::default() {
            matrix.clone()
        } else {
            similarity_matrix(&ds, &SimilarityConfig::default())?
        };
        let rows = case_study::errata_report(&reference)?;
        errata_rows = Some(rows.len());
        outputs.push((ERRATA_FILE, case_study::write_errata(&rows)));
    }
    outputs.push((MANIFEST_FILE, manifest.absolute()?.to_toml().into_bytes()));

    let written = write_outputs(&manifest.output_dir, &outputs)?;
    Ok(PipelineReport {
        written,
        clusters: clustering.len(),
        errata_rows,
    })
}

/// Writes each `(file name, bytes)` into `dir`. Files are staged and renamed
/// into place; on failure every staged or renamed file is removed.
pub fn write_outputs(dir: &Path, outputs: &[(&str, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let staged: Vec<(PathBuf, PathBuf)> = outputs
        .iter()
        .map(|(name, _)| (dir.join(format!(".{name}.partial")), dir.join(name)))
        .collect();

    let cleanup = |upto: usize| {
        for (tmp, _) in &staged[..upto] {
            let _ = fs::remove_file(tmp);
        }
    };
    for (k, ((tmp, _), (_, bytes))) in staged.iter().zip(outputs).enumerate() {
        if let Err(e) = fs::write(tmp, bytes) {
            cleanup(k + 1);
            return Err(Error::io(tmp, e));
        }
    }
    for (k, (tmp, dst)) in staged.iter().enumerate() {
        if let Err(e) = fs::rename(tmp, dst) {
            for (_, done) in &staged[..k] {
                let _ = fs::remove_file(done);
            }
            for (rest, _) in &staged[k..] {
                let _ = fs::remove_file(rest);
            }
            return Err(Error::io(dst, e));
        }
    }
    Ok(staged.into_iter().map(|(_, dst)| dst).collect())
}
