//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or I/O error, 3 strategy
//! validation error.

pub mod cases;
pub mod synth;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::error::Error;
use crate::metrics::{
    evaluate_case, EdgeCasePolicy, EvalConfig, LesionMatchConfig, Metric, MetricRecord,
};
use crate::ranking::{global_rank, RankingGrid};
use crate::strategy::{preset_names, resolve_strategy, serialize_strategy, CompiledStrategy};
use crate::transforms::builtin_registry;
use crate::volume::nifti::is_volume_path;
use crate::volume::{load_volume, save_volume, LabelScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_DATA
            },
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "maskforge",
    version,
    about = "Postprocess, evaluate, and rank 3D segmentation label volumes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a strategy to every volume in a directory.
    Postprocess {
        #[arg(long)]
        input_dir: PathBuf,
        #[arg(long)]
        output_dir: PathBuf,
        /// Preset name or path to a strategy JSON file.
        #[arg(long)]
        strategy: String,
        #[arg(long, env = "MASKFORGE_JOBS")]
        jobs: Option<usize>,
    },
    /// Score predictions against ground truth and write a metrics CSV.
    Evaluate {
        #[arg(long)]
        gt_dir: PathBuf,
        #[arg(long)]
        pred_dir: PathBuf,
        #[arg(long)]
        strategy_id: String,
        /// Comma-separated: dice, hd95, lw_dice, lw_hd95.
        #[arg(long, value_delimiter = ',', default_value = "dice,hd95")]
        metrics: Vec<String>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, env = "MASKFORGE_JOBS")]
        jobs: Option<usize>,
        /// Distance (mm) scored when a structure is missing from one side.
        #[arg(long, default_value_t = 374.0)]
        hd_penalty: f64,
        #[arg(long, default_value_t = 3)]
        lw_dilation: usize,
        #[arg(long, default_value_t = 0)]
        lw_min_size: usize,
    },
    /// Rank strategies from their metrics CSVs.
    Rank {
        /// `name=path.csv`, one per strategy.
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<String>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Inspect and validate strategies.
    Strategies {
        #[command(subcommand)]
        action: StrategiesAction,
    },
    /// Generate synthetic ground-truth / prediction pairs.
    Synth {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 10)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output_dir: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum StrategiesAction {
    /// Print preset names.
    List,
    /// Print the canonical JSON of a preset or strategy file.
    Show { name: String },
    /// Check a strategy file.
    Validate { file: PathBuf },
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Postprocess {
            input_dir,
            output_dir,
            strategy,
            jobs,
        } => cmd_postprocess(&input_dir, &output_dir, &strategy, jobs, out),
        Command::Evaluate {
            gt_dir,
            pred_dir,
            strategy_id,
            metrics,
            output,
            jobs,
            hd_penalty,
            lw_dilation,
            lw_min_size,
        } => {
            let metrics = metrics
                .iter()
                .map(|m| m.trim().parse::<Metric>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::usage(e.to_string()))?;
            let policy = EdgeCasePolicy::with_penalty(hd_penalty)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let config = EvalConfig {
                policy,
                lesion: LesionMatchConfig {
                    dilation_iterations: lw_dilation,
                    min_lesion_size: lw_min_size,
                    unmatched_hd: hd_penalty,
                    ..LesionMatchConfig::default()
                },
            };
            cmd_evaluate(
                &gt_dir,
                &pred_dir,
                &strategy_id,
                &metrics,
                &output,
                jobs,
                &config,
                out,
            )
        }
        Command::Rank { inputs, output } => cmd_rank(&inputs, &output, out),
        Command::Strategies { action } => cmd_strategies(action, out),
        Command::Synth {
            scenario,
            cases,
            seed,
            output_dir,
        } => {
            let scenario = scenario
                .parse::<synth::Scenario>()
                .map_err(|e| Failure::usage(e.to_string()))?;
            synth::write_scenario(scenario, cases, seed, &output_dir)?;
            let _ = writeln!(
                out,
                "wrote {cases} {scenario} cases to {}",
                output_dir.display()
            );
            Ok(())
        }
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    let n = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if n == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Failure::data(e.to_string()))
}

fn volume_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && is_volume_path(&path) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn cmd_postprocess(
    input_dir: &Path,
    output_dir: &Path,
    strategy: &str,
    jobs: Option<usize>,
    out: &mut dyn Write,
) -> CmdResult {
    let registry = builtin_registry();
    let spec = resolve_strategy(strategy, registry, &LabelScheme::default())?;
    let compiled = CompiledStrategy::new(&spec, registry)?;
    let files = volume_files(input_dir)?;
    if files.is_empty() {
        return Err(Failure::data(format!(
            "no volumes in {}",
            input_dir.display()
        )));
    }
    std::fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    pool(jobs)?.install(|| {
        files.par_iter().try_for_each(|path| {
            let vol = load_volume(path)?;
            let result = compiled.apply(&vol)?;
            save_volume(
                &result,
                output_dir.join(path.file_name().expect("file path")),
            )
        })
    })?;
    let _ = writeln!(out, "{}: processed {} volumes", spec.name, files.len());
    Ok(())
}

/// Evaluates every paired case; records ordered by patient, class, metric.
pub fn evaluate_dirs(
    gt_dir: &Path,
    pred_dir: &Path,
    strategy_id: &str,
    metrics: &[Metric],
    jobs: Option<usize>,
    config: &EvalConfig<f64>,
) -> Result<Vec<MetricRecord<f64>>, Failure> {
    let pairs = cases::pair_cases(gt_dir, pred_dir)?;
    let scheme = LabelScheme::default();
    let per_case: Vec<Vec<MetricRecord<f64>>> = pool(jobs)?.install(|| {
        pairs
            .par_iter()
            .map(|pair| {
                let gt = load_volume(&pair.gt)?.with_case_id(pair.case_id.clone());
                let pred = load_volume(&pair.pred)?;
                evaluate_case(&gt, &pred, &scheme, metrics, strategy_id, config)
            })
            .collect::<Result<_, Error>>()
    })?;
    Ok(per_case.into_iter().flatten().collect())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_evaluate(
    gt_dir: &Path,
    pred_dir: &Path,
    strategy_id: &str,
    metrics: &[Metric],
    output: &Path,
    jobs: Option<usize>,
    config: &EvalConfig<f64>,
    out: &mut dyn Write,
) -> CmdResult {
    let records = evaluate_dirs(gt_dir, pred_dir, strategy_id, metrics, jobs, config)?;
    let text = table::metrics_csv(&records)?;
    std::fs::write(output, text).map_err(|e| Error::io(output, e))?;
    let _ = writeln!(out, "wrote {} rows to {}", records.len(), output.display());
    Ok(())
}

pub fn cmd_rank(inputs: &[String], output: &Path, out: &mut dyn Write) -> CmdResult {
    if inputs.len() < 2 {
        return Err(Failure::usage("rank needs at least two --inputs"));
    }
    let mut tables = Vec::with_capacity(inputs.len());
    for spec in inputs {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("expected name=path, got `{spec}`")))?;
        tables.push((name.to_string(), table::read_metrics_csv(Path::new(path))?));
    }
    let grid = RankingGrid::from_tables(tables)?;
    let report = global_rank(&grid)?;
    let text = table::rank_csv(&report)?;
    std::fs::write(output, text).map_err(|e| Error::io(output, e))?;
    for (s, r) in report.ordering() {
        let _ = writeln!(out, "{s}\t{}", table::fmt_value(r));
    }
    let _ = writeln!(out, "winner: {}", report.winner());
    Ok(())
}

pub fn cmd_strategies(action: StrategiesAction, out: &mut dyn Write) -> CmdResult {
    let scheme = LabelScheme::default();
    match action {
        StrategiesAction::List => {
            for name in preset_names() {
                let _ = writeln!(out, "{name}");
            }
        }
        StrategiesAction::Show { name } => {
            let spec = resolve_strategy(&name, builtin_registry(), &scheme)?;
            let _ = writeln!(out, "{}", serialize_strategy(&spec));
        }
        StrategiesAction::Validate { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
            let spec = crate::strategy::parse_strategy_with(&text, builtin_registry(), &scheme)?;
            let _ = writeln!(out, "ok: {} ({} steps)", spec.name, spec.steps.len());
        }
    }
    Ok(())
}
