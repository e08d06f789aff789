use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tsim::pipeline::{self, load_dataset, read_input, InputFormat, RunManifest};
use tsim::{
    compute_stats, io, similarity_matrix, threshold_cluster, threshold_sweep, Error, Measure,
    SimilarityConfig, SimilarityMatrix, StdMode, DEFAULT_THRESHOLD,
};

/// Gaussian transaction similarity, baseline measures and threshold clustering.
///
/// Exit status: 0 success, 1 usage, 2 input/parse, 3 compute.
#[derive(Debug, Parser)]
#[command(name = "tsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-item standard deviation and unit-mismatch penalty.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = StdMode::Sample)]
        std_mode: StdMode,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Pairwise similarity matrix as CSV.
    Matrix {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Threshold clustering, from transactions or from a similarity matrix.
    Cluster {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Instead of one threshold, cluster at k/STEPS for k = 0..=STEPS.
        #[arg(long, value_name = "STEPS")]
        sweep: Option<u32>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Full run: stats, matrix, clusters and, for the bundled case study, errata.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Basket,
    Matrix,
    /// A similarity matrix as written by `tsim matrix` (cluster only).
    Similarity,
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Basket)]
    format: Format,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[arg(long, default_value_t = Measure::Tsim)]
    measure: Measure,
    #[arg(long, default_value_t = StdMode::Sample)]
    std_mode: StdMode,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

impl MeasureArgs {
    fn config(&self) -> SimilarityConfig {
        SimilarityConfig {
            lambda: self.lambda,
            std_mode: self.std_mode,
            measure: self.measure,
        }
    }
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// TOML run manifest; explicit flags below override its values.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, required_unless_present = "manifest")]
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<InputFormat>,
    #[arg(long)]
    measure: Option<Measure>,
    #[arg(long)]
    std_mode: Option<StdMode>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, required_unless_present = "manifest")]
    output_dir: Option<PathBuf>,
}

fn transactions_format(format: Format) -> Result<InputFormat, Error> {
    match format {
        Format::Basket => Ok(InputFormat::Basket),
        Format::Matrix => Ok(InputFormat::Matrix),
        Format::Similarity => Err(Error::InvalidConfig(
            "--format similarity is only accepted by `cluster`".into(),
        )),
    }
}

fn emit(output_dir: Option<&Path>, name: &str, bytes: &[u8]) -> Result<(), Error> {
    match output_dir {
        Some(dir) => {
            let written = pipeline::write_outputs(dir, &[(name, bytes.to_vec())])?;
            for path in written {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        None => std::io::stdout().write_all(bytes).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}

fn cluster_matrix(input: &InputArgs, measure: &MeasureArgs) -> Result<SimilarityMatrix, Error> {
    if input.format == Format::Similarity {
        let bytes = read_input(&input.input)?;
        return io::parse_similarity_file(&bytes, measure.measure)
            .map_err(|e| e.with_path(&input.input));
    }
    let ds = load_dataset(&input.input, transactions_format(input.format)?)?;
    similarity_matrix(&ds, &measure.config())
}

fn pipeline_manifest(args: PipelineArgs) -> Result<RunManifest, Error> {
    let mut m = match (&args.manifest, &args.input, &args.output_dir) {
        (Some(path), _, _) => RunManifest::load(path)?,
        (None, Some(input), Some(out)) => RunManifest::new(input, out),
        _ => unreachable!("clap enforces --input and --output-dir without --manifest"),
    };
    if args.manifest.is_some() {
        if let Some(input) = args.input {
            m.input = input;
        }
        if let Some(out) = args.output_dir {
            m.output_dir = out;
        }
    }
    if let Some(f) = args.format {
        m.format = f;
    }
    if let Some(v) = args.measure {
        m.config.measure = v;
    }
    if let Some(v) = args.std_mode {
        m.config.std_mode = v;
    }
    if let Some(v) = args.lambda {
        m.config.lambda = v;
    }
    if let Some(v) = args.threshold {
        m.threshold = v;
    }
    m.validate()?;
    Ok(m)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Stats {
            input,
            std_mode,
            output_dir,
        } => {
            let ds = load_dataset(&input.input, transactions_format(input.format)?)?;
            let stats = compute_stats(&ds, std_mode)?;
            emit(
                output_dir.as_deref(),
                pipeline::STATS_FILE,
                &io::write_stats(&ds, &stats),
            )
        }
        Command::Matrix {
            input,
            measure,
            output_dir,
        } => {
            let cfg = measure.config();
            cfg.validate()?;
            let ds = load_dataset(&input.input, transactions_format(input.format)?)?;
            let matrix = similarity_matrix(&ds, &cfg)?;
            emit(
                output_dir.as_deref(),
                pipeline::MATRIX_FILE,
                &io::write_matrix(&matrix),
            )
        }
        Command::Cluster {
            input,
            measure,
            threshold,
            sweep,
            output_dir,
        } => {
            measure.config().validate()?;
            let matrix = cluster_matrix(&input, &measure)?;
            match sweep {
                Some(steps) => {
                    let sweep = threshold_sweep(&matrix, steps)?;
                    let mut bytes =
                        serde_json::to_vec_pretty(&sweep).expect("clusterings serialize");
                    bytes.push(b'\n');
                    emit(output_dir.as_deref(), "sweep.json", &bytes)
                }
                None => {
                    let clustering = threshold_cluster(&matrix, threshold)?;
                    emit(
                        output_dir.as_deref(),
                        pipeline::CLUSTERS_FILE,
                        &io::write_clusters(&clustering),
                    )
                }
            }
        }
        Command::Pipeline(args) => {
            let manifest = pipeline_manifest(args)?;
            let report = tsim::run_pipeline(&manifest)?;
            for path in &report.written {
                eprintln!("wrote {}", path.display());
            }
            eprintln!(
                "{} clusters at threshold {}",
                report.clusters, manifest.threshold
            );
            if let Some(rows) = report.errata_rows {
                eprintln!("case study detected: {rows} rows in errata report");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
