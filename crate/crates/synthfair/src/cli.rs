//! Command-line front end.
//!
//! Exit status is 0 on success, 1 when arguments, files, schemas or data
//! are invalid, and 2 when a computation or write fails. Diagnostics are a
//! single line on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use synthfair_core::divergence::{bounds_report, dataset_bounds, linear_vc_dim, DivergenceReport};
use synthfair_core::fairmetrics::{
    confusion_by_group, fairness_report, threshold_sweep, FairnessReport, GroupConfusion,
};
use synthfair_core::harness::default_thresholds;
use synthfair_core::models::{predict, Classifier, ForestParams, LogRegParams};
use synthfair_core::oversample::{Strategy, DEFAULT_K_NEIGHBORS};
use synthfair_core::tabular::{cell_counts, MinMaxScaler};
use synthfair_core::CellCounts;

use crate::debias::debias;
use crate::error::{single_line, AppError, AppResult};
use crate::experiment::{self, ExperimentConfig};
use crate::io;
use crate::model_file::ModelFile;

#[derive(Debug, Parser)]
#[command(
    name = "synthfair",
    version,
    about = "Group-targeted synthetic oversampling for fairer classifiers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ClassifierKind {
    Logreg,
    Forest,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the four group-by-label cell counts and base rates.
    Describe {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Append synthetic rows that close the base-rate gap.
    Debias {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, value_parser = parse_strategy)]
        strategy: Strategy,
        /// Augmented CSV.
        #[arg(long)]
        out: PathBuf,
        /// Plan JSON; defaults to the output path with `.plan.json`.
        #[arg(long)]
        plan_out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_K_NEIGHBORS)]
        k_neighbors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append a `synthetic` column (0 = original, 1 = synthetic).
        #[arg(long)]
        mark_synthetic: bool,
    },
    /// Train a classifier and write it with its encoding as JSON.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "logreg")]
        classifier: ClassifierKind,
        /// TOML file of hyperparameters for the chosen classifier.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Score a dataset and report fairness metrics at one threshold.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Report JSON; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a dataset and write metrics per threshold as CSV.
    Sweep {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated increasing thresholds; default 0.00 to 0.50 by 0.01.
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<f64>>,
    },
    /// Run a configured multi-seed comparison of arms.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for summary.json and per-arm sweep CSVs.
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the divergence between groups (or between two files) and
    /// the bound terms.
    Divergence {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        /// Compare `data` against this file instead of splitting by group.
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse::<Strategy>().map_err(|e| e.to_string())
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn dispatch<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(stderr, "argument error: {}", single_line(first));
                    1
                }
            };
        }
    };
    match run(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", single_line(&e.to_string()));
            e.exit_code()
        }
    }
}

fn check_threshold(t: f64) -> AppResult<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(AppError::Usage(format!("threshold {t} is outside [0, 1]")))
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> AppResult<()> {
    match out {
        Some(p) => io::write_json(p, value),
        None => {
            let s = serde_json::to_string_pretty(value).expect("serializable value");
            writeln!(stdout, "{s}").map_err(|e| AppError::io(Path::new("<stdout>"), e))
        }
    }
}

#[derive(Serialize)]
struct Description {
    rows: usize,
    counts: CellCounts,
    privileged_base_rate: Option<f64>,
    unprivileged_base_rate: Option<f64>,
    base_rate_gap: Option<f64>,
}

fn fmt_rate(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".into(), |x| x.to_string())
}

#[derive(Serialize)]
struct EvalReport {
    threshold: f64,
    confusion: GroupConfusion,
    report: FairnessReport,
}

fn run(command: Command, stdout: &mut dyn Write) -> AppResult<()> {
    let write_err = |e| AppError::io(Path::new("<stdout>"), e);
    match command {
        Command::Describe { data, schema, format } => {
            let schema = io::read_schema(&schema)?;
            let loaded = io::load_csv(&data, &schema)?;
            let c = cell_counts(&loaded.dataset);
            let d = Description {
                rows: c.total(),
                counts: c,
                privileged_base_rate: c.privileged_base_rate(),
                unprivileged_base_rate: c.unprivileged_base_rate(),
                base_rate_gap: c.base_rate_gap(),
            };
            if format == Format::Json {
                return emit(&d, None, stdout);
            }
            let text = format!(
                "rows: {}\nprivileged-favored: {}\nprivileged-unfavored: {}\nunprivileged-favored: {}\nunprivileged-unfavored: {}\nprivileged base rate: {}\nunprivileged base rate: {}\nbase-rate gap (privileged - unprivileged): {}\n",
                d.rows,
                c.privileged_favored,
                c.privileged_unfavored,
                c.unprivileged_favored,
                c.unprivileged_unfavored,
                fmt_rate(d.privileged_base_rate),
                fmt_rate(d.unprivileged_base_rate),
                fmt_rate(d.base_rate_gap),
            );
            stdout.write_all(text.as_bytes()).map_err(write_err)
        }
        Command::Debias {
            data,
            schema,
            strategy,
            out,
            plan_out,
            k_neighbors,
            seed,
            mark_synthetic,
        } => {
            if k_neighbors == 0 {
                return Err(AppError::Usage("--k-neighbors must be at least 1".into()));
            }
            let plan_path = plan_out.unwrap_or_else(|| out.with_extension("plan.json"));
            let schema = io::read_schema(&schema)?;
            let loaded = io::load_csv(&data, &schema)?;
            let aug = debias(&loaded, strategy, k_neighbors, seed, mark_synthetic)?;
            io::write_rows(&out, &aug.headers, &aug.rows)?;
            io::write_json(&plan_path, &aug.plan)?;
            writeln!(
                stdout,
                "wrote {} rows ({} synthetic) to {}",
                aug.rows.len(),
                aug.plan.total_synthetic(),
                out.display()
            )
            .map_err(write_err)
        }
        Command::Train {
            data,
            schema,
            out,
            classifier,
            params,
            seed,
        } => {
            let classifier = match (classifier, params) {
                (ClassifierKind::Logreg, None) => Classifier::Logreg(LogRegParams::default()),
                (ClassifierKind::Forest, None) => Classifier::Forest(ForestParams::default()),
                (ClassifierKind::Logreg, Some(p)) => Classifier::Logreg(io::read_toml(&p)?),
                (ClassifierKind::Forest, Some(p)) => Classifier::Forest(io::read_toml(&p)?),
            };
            match classifier {
                Classifier::Logreg(p) => p.validate()?,
                Classifier::Forest(p) => p.validate()?,
            }
            let schema = io::read_schema(&schema)?;
            let loaded = io::load_csv(&data, &schema)?;
            let model = classifier.train(&loaded.dataset, seed)?;
            ModelFile {
                encoding: loaded.encoding,
                scaler: loaded.scaler,
                model,
            }
            .save(&out)?;
            writeln!(stdout, "wrote model to {}", out.display()).map_err(write_err)
        }
        Command::Eval {
            model,
            data,
            threshold,
            out,
        } => {
            check_threshold(threshold)?;
            let mf = ModelFile::load(&model)?;
            let ds = mf.prepare(&io::read_table(&data)?)?;
            let pred = predict(&mf.model, ds.features(), threshold);
            let confusion = confusion_by_group(ds.labels(), &pred, ds.groups())?;
            let report = fairness_report(&confusion, ds.labels(), &pred)?;
            emit(
                &EvalReport {
                    threshold,
                    confusion,
                    report,
                },
                out.as_deref(),
                stdout,
            )
        }
        Command::Sweep {
            model,
            data,
            out,
            thresholds,
        } => {
            let grid = thresholds.unwrap_or_else(default_thresholds);
            if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(AppError::Usage(
                    "--thresholds must be nonempty and strictly increasing".into(),
                ));
            }
            for &t in &grid {
                check_threshold(t)?;
            }
            let mf = ModelFile::load(&model)?;
            let ds = mf.prepare(&io::read_table(&data)?)?;
            let scores = mf.model.scores(ds.features());
            let sweep = threshold_sweep(&scores, ds.labels(), ds.groups(), &grid)?;
            let rows: Vec<_> = sweep.iter().map(|(t, r)| io::sweep_row(*t, r)).collect();
            io::write_sweep_csv(&out, &rows)?;
            writeln!(stdout, "wrote {} thresholds to {}", rows.len(), out.display()).map_err(write_err)
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = experiment::run(&cfg)?;
            let written = experiment::write_outputs(&report, &out)?;
            for p in written {
                writeln!(stdout, "wrote {}", p.display()).map_err(write_err)?;
            }
            Ok(())
        }
        Command::Divergence {
            data,
            schema,
            other,
            delta,
            seed,
            out,
        } => {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(AppError::Usage("--delta must lie in (0, 1)".into()));
            }
            let schema = io::read_schema(&schema)?;
            let table = io::read_table(&data)?;
            let encoding = synthfair_core::tabular::Encoding::fit(&schema, &table)?;
            let first = encoding.encode(&table)?;
            let report: DivergenceReport = match other {
                None => {
                    let scaler = MinMaxScaler::fit(&first);
                    dataset_bounds(&scaler.transform(first)?, delta, seed)?
                }
                Some(path) => {
                    let second = encoding.encode(&io::read_table(&path)?)?;
                    let scaler = MinMaxScaler::fit(&first);
                    let (a, b) = (scaler.transform(first)?, scaler.transform(second)?);
                    bounds_report(a.features(), b.features(), linear_vc_dim(a.n_features()), delta, seed)?
                }
            };
            emit(&report, out.as_deref(), stdout)
        }
    }
}
