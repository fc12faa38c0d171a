//! The `steelcast` command line.
//!
//! Each subcommand reads one CSV dataset, writes its reports into the
//! output directory and prints the paths it wrote. Failures print a single
//! line `steelcast: error: code=<exit> kind=<Kind> <message>` to stderr.

pub mod dataset;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::DEFAULT_C_GRID;
use crate::forecast::{
    prepare_with, train_pipeline, ForecastConfig, KernelChoice, Preprocess, TrainedPipeline,
    MAX_DIFF,
};
use crate::iou::{fit_iou, intensity_of_use};
use crate::series::{difference_values, Panel};
use crate::stats::{adf_test_values, correlation_suite, kpss_test_values};
use crate::svm::{write_model, DumpedModel};
use crate::synthetic;
pub use dataset::{ingest_csv, read_csv, write_csv};
use report::*;

#[derive(Debug, Parser)]
#[command(
    name = "steelcast",
    version,
    about = "Steel demand analysis and SVR forecasting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intensity of use and the consumption/output elasticity.
    Iou(RunArgs),
    /// Pearson, Kendall and Spearman tests of every column against the target.
    Correlate(RunArgs),
    /// ADF and KPSS tests per column and differencing order.
    Stationarity(RunArgs),
    /// Cross-validated error over the C grid.
    Tune(RunArgs),
    /// Tune, fit and evaluate on the held-out split.
    Train(RunArgs),
    /// Forecast target levels.
    Forecast(RunArgs),
    /// Every analysis in order.
    Pipeline(RunArgs),
    /// Write a synthetic dataset as CSV.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelFlag {
    Linear,
    Rbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PreprocessFlag {
    None,
    Difference,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Input CSV with a leading `year` column.
    input: PathBuf,
    #[arg(long, default_value = synthetic::TARGET)]
    target: String,
    /// Output column for the intensity-of-use fit.
    #[arg(long, default_value = "gdp")]
    gdp: String,
    #[arg(long, value_enum, default_value_t = KernelFlag::Linear)]
    kernel: KernelFlag,
    /// RBF width; defaults to the number of predictors.
    #[arg(long, allow_negative_numbers = true)]
    sigma_squared: Option<f64>,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    epsilon: f64,
    /// Comma-separated C values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    c_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    train_fraction: f64,
    #[arg(long, env = "STEELCAST_SEED", default_value_t = synthetic::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    horizon: i64,
    #[arg(long, default_value_t = MAX_DIFF)]
    max_diff: usize,
    #[arg(long, value_enum, default_value_t = PreprocessFlag::Difference)]
    preprocess: PreprocessFlag,
    #[arg(long)]
    adf_lag: Option<usize>,
    #[arg(long)]
    kpss_lag: Option<usize>,
    /// Directory for report files.
    #[arg(long, default_value = "steelcast-out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Destination CSV path.
    output: PathBuf,
    #[arg(long, env = "STEELCAST_SEED", default_value_t = synthetic::DEFAULT_SEED)]
    seed: u64,
    /// Noiseless straight-line variant.
    #[arg(long)]
    linear: bool,
}

/// Validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub target_column: String,
    pub output_column: String,
    pub kernel: KernelChoice,
    pub epsilon: f64,
    pub c_grid: Vec<f64>,
    pub folds: usize,
    pub repeats: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub horizon: i64,
    pub max_diff: usize,
    pub preprocess: Preprocess,
    pub adf_lag: Option<usize>,
    pub kpss_lag: Option<usize>,
    pub output_dir: PathBuf,
}

impl RunConfig {
    fn from_args(a: RunArgs) -> Result<Self> {
        let kernel = match (a.kernel, a.sigma_squared) {
            (KernelFlag::Linear, None) => KernelChoice::Linear,
            (KernelFlag::Linear, Some(_)) => {
                return Err(Error::Config(
                    "--sigma-squared applies only to the rbf kernel".into(),
                ))
            }
            (KernelFlag::Rbf, s) => KernelChoice::Rbf { sigma_squared: s },
        };
        let config = Self {
            input_path: a.input,
            target_column: a.target,
            output_column: a.gdp,
            kernel,
            epsilon: a.epsilon,
            c_grid: a.c_grid.unwrap_or_else(|| DEFAULT_C_GRID.to_vec()),
            folds: a.folds,
            repeats: a.repeats,
            train_fraction: a.train_fraction,
            seed: a.seed,
            horizon: a.horizon,
            max_diff: a.max_diff,
            preprocess: match a.preprocess {
                PreprocessFlag::None => Preprocess::None,
                PreprocessFlag::Difference => Preprocess::Difference,
            },
            adf_lag: a.adf_lag,
            kpss_lag: a.kpss_lag,
            output_dir: a.out,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if let KernelChoice::Rbf {
            sigma_squared: Some(s),
        } = self.kernel
        {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Config(format!(
                    "sigma_squared must be positive, got {s}"
                )));
            }
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if self.c_grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if let Some(&c) = self.c_grid.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::BadC(c));
        }
        if self.folds < 2 {
            return Err(Error::Config(format!(
                "folds must be at least 2, got {}",
                self.folds
            )));
        }
        if self.repeats < 1 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::BadFraction(self.train_fraction));
        }
        if self.horizon < 1 {
            return Err(Error::BadHorizon(self.horizon));
        }
        if self.max_diff > MAX_DIFF {
            return Err(Error::Config(format!(
                "max_diff must be at most {MAX_DIFF}, got {}",
                self.max_diff
            )));
        }
        Ok(())
    }

    pub fn forecast_config(&self) -> ForecastConfig {
        ForecastConfig {
            preprocess: self.preprocess,
            kernel: self.kernel,
            epsilon: self.epsilon,
            c_grid: self.c_grid.clone(),
            folds: self.folds,
            repeats: self.repeats,
            train_fraction: self.train_fraction,
            seed: self.seed,
            max_diff: self.max_diff,
            adf_lag: self.adf_lag,
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

struct Outputs<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Outputs<'_> {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        std::fs::create_dir_all(self.dir)
            .map_err(|e| Error::Io(format!("{}: {e}", self.dir.display())))?;
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }
}

fn need_predictors(panel: &Panel) -> Result<()> {
    if panel.predictors().next().is_none() {
        return Err(Error::Schema(
            "this command needs at least two data columns".into(),
        ));
    }
    Ok(())
}

pub fn iou_report(panel: &Panel, config: &RunConfig) -> Result<(IouReport, String)> {
    let c = panel.series(&config.target_column)?;
    let y = panel.series(&config.output_column)?;
    let fit = fit_iou(&c, &y)?;
    let iu = intensity_of_use(&c, &y)?;
    let d = &fit.diagnostics;
    let report = IouReport {
        schema_version: SCHEMA_VERSION,
        command: "iou".into(),
        consumption: c.name().to_string(),
        output: y.name().to_string(),
        start_year: iu.start_year(),
        end_year: iu.end_year(),
        n: d.n_obs(),
        lambda: fit.lambda,
        lambda_std_error: d.coefficient_std_errors[1],
        ln_delta: fit.ln_delta,
        ln_delta_std_error: d.coefficient_std_errors[0],
        rse: d.rse,
        r_squared: d.r_squared,
        adj_r_squared: d.adj_r_squared,
        f_statistic: d.f_statistic,
        f_p_value: d.f_p_value,
    };
    let mut csv = String::from("year,intensity_of_use\n");
    for (year, v) in iu.years().zip(iu.values()) {
        let _ = writeln!(csv, "{year},{v}");
    }
    Ok((report, csv))
}

pub fn correlation_report(panel: &Panel) -> Result<CorrelationReport> {
    need_predictors(panel)?;
    let target = panel.target();
    let rows = panel
        .predictors()
        .map(|c| {
            let [pearson, kendall, spearman] = correlation_suite(&c.values, target)?;
            Ok(CorrelationRow {
                column: c.name.clone(),
                pearson,
                kendall,
                spearman,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport {
        schema_version: SCHEMA_VERSION,
        command: "correlate".into(),
        target: panel.target_name().to_string(),
        n: panel.n_rows(),
        rows,
    })
}

pub fn stationarity_report(panel: &Panel, config: &RunConfig) -> Result<StationarityReport> {
    let (_, state) = prepare_with(
        panel,
        Preprocess::Difference,
        config.max_diff,
        config.adf_lag,
    )?;
    let mut columns = Vec::new();
    for (c, t) in panel.columns().iter().zip(&state.columns) {
        let mut levels = Vec::new();
        for order in 0..=config.max_diff {
            let Ok((diffs, _, _)) = difference_values(&c.values, order) else {
                break;
            };
            let (adf, adf_error) = split_result(adf_test_values(&diffs, config.adf_lag));
            let (kpss, kpss_error) = split_result(kpss_test_values(&diffs, config.kpss_lag));
            levels.push(StationarityLevel {
                order,
                adf,
                adf_error,
                kpss,
                kpss_error,
            });
        }
        columns.push(StationarityRow {
            column: c.name.clone(),
            selected_order: t.order,
            levels,
        });
    }
    Ok(StationarityReport {
        schema_version: SCHEMA_VERSION,
        command: "stationarity".into(),
        max_diff: config.max_diff,
        columns,
        warnings: state.warnings,
    })
}

fn split_result<T>(r: Result<T>) -> (Option<T>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(format!("{}: {e}", e.kind()))),
    }
}

fn setup(t: &TrainedPipeline, config: &RunConfig) -> ModelSetup {
    let test_rows = t.test_predictions.len();
    ModelSetup {
        target: t.transformed.target_name().to_string(),
        preprocess: t.state.preprocess,
        kernel: t.kernel,
        epsilon: config.epsilon,
        folds: config.folds,
        repeats: config.repeats,
        train_fraction: config.train_fraction,
        seed: config.seed,
        orders: t
            .state
            .columns
            .iter()
            .map(|c| ColumnOrder {
                column: c.name.clone(),
                order: c.order,
            })
            .collect(),
        warnings: t.state.warnings.clone(),
        train_rows: t.transformed.n_rows() - test_rows,
        test_rows,
    }
}

pub fn tune_report(t: &TrainedPipeline, config: &RunConfig) -> (TuneReport, String) {
    let report = TuneReport {
        schema_version: SCHEMA_VERSION,
        command: "tune".into(),
        setup: setup(t, config),
        grid: t.tuning.grid.clone(),
        best_c: t.tuning.best_c,
    };
    let mut csv = String::from("c,mean_rmse\n");
    for g in &t.tuning.grid {
        let _ = writeln!(csv, "{},{}", g.c, g.mean_rmse);
    }
    (report, csv)
}

pub fn train_report(t: &TrainedPipeline, config: &RunConfig) -> (TrainReport, String) {
    let report = TrainReport {
        schema_version: SCHEMA_VERSION,
        command: "train".into(),
        setup: setup(t, config),
        c: t.model.c,
        n_support: t.model.expansion.n_support(),
        train_metrics: t.train_metrics,
        test_metrics: t.test_metrics,
        baseline_test_rmse: t.baseline_test_rmse,
        test_predictions: t.test_predictions.clone(),
    };
    let mut csv = String::from("year,actual,predicted\n");
    for p in &t.test_predictions {
        let _ = writeln!(csv, "{},{},{}", p.year, p.actual, p.predicted);
    }
    (report, csv)
}

pub fn forecast_report(
    t: &TrainedPipeline,
    panel: &Panel,
    config: &RunConfig,
) -> Result<(ForecastDocument, String)> {
    let f = t.forecast(panel, config.horizon)?;
    let mut csv = String::from("year,level\n");
    for (y, v) in f.years.iter().zip(&f.levels) {
        let _ = writeln!(csv, "{y},{v}");
    }
    Ok((
        ForecastDocument {
            schema_version: SCHEMA_VERSION,
            command: "forecast".into(),
            setup: setup(t, config),
            c: t.model.c,
            horizon: f.horizon,
            years: f.years,
            levels: f.levels,
        },
        csv,
    ))
}

fn run_command(command: Command, out: &mut Vec<PathBuf>) -> Result<()> {
    if let Command::Generate(g) = command {
        let panel = if g.linear {
            synthetic::linear_panel()
        } else {
            synthetic::noisy_panel(g.seed)
        };
        std::fs::write(&g.output, write_csv(&panel))
            .map_err(|e| Error::Io(format!("{}: {e}", g.output.display())))?;
        out.push(g.output);
        return Ok(());
    }
    let (name, args) = match command {
        Command::Iou(a) => ("iou", a),
        Command::Correlate(a) => ("correlate", a),
        Command::Stationarity(a) => ("stationarity", a),
        Command::Tune(a) => ("tune", a),
        Command::Train(a) => ("train", a),
        Command::Forecast(a) => ("forecast", a),
        Command::Pipeline(a) => ("pipeline", a),
        Command::Generate(_) => unreachable!(),
    };
    let config = RunConfig::from_args(args)?;
    let panel = ingest_csv(&config.input_path, &config.target_column)?;
    let mut files = Outputs {
        dir: &config.output_dir,
        written: Vec::new(),
    };
    let all = name == "pipeline";

    if name == "iou" || (all && panel.column(&config.output_column).is_ok()) {
        let (r, csv) = iou_report(&panel, &config)?;
        files.write("iou.json", &json(&r))?;
        files.write("intensity_of_use.csv", &csv)?;
    }
    if name == "correlate" || all {
        files.write("correlate.json", &json(&correlation_report(&panel)?))?;
    }
    if name == "stationarity" || all {
        files.write(
            "stationarity.json",
            &json(&stationarity_report(&panel, &config)?),
        )?;
    }
    if matches!(name, "tune" | "train" | "forecast" | "pipeline") {
        need_predictors(&panel)?;
        let trained = train_pipeline(&panel, &config.forecast_config())?;
        if name == "tune" || all {
            let (r, csv) = tune_report(&trained, &config);
            files.write("tune.json", &json(&r))?;
            files.write("tune_curve.csv", &csv)?;
        }
        if name == "train" || all {
            let (r, csv) = train_report(&trained, &config);
            files.write("train.json", &json(&r))?;
            files.write("test_predictions.csv", &csv)?;
            files.write(
                "model.svm",
                &write_model(&DumpedModel::Svr(trained.model.clone())),
            )?;
        }
        if name == "forecast" || all {
            let (r, csv) = forecast_report(&trained, &panel, &config)?;
            files.write("forecast.json", &json(&r))?;
            files.write("forecast.csv", &csv)?;
        }
    }
    out.extend(files.written);
    Ok(())
}

fn diagnostic(e: &Error) -> String {
    let message = e.to_string().replace(['\n', '\r'], " ");
    format!(
        "steelcast: error: code={} kind={} {message}",
        e.exit_code(),
        e.kind()
    )
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(stdout, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                    2
                } else {
                    0
                };
            }
            let rendered = e.render().to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            let _ = writeln!(stderr, "{}", diagnostic(&Error::Usage(first)));
            return 2;
        }
    };
    let mut written = Vec::new();
    match run_command(cli.command, &mut written) {
        Ok(()) => {
            for p in written {
                let _ = writeln!(stdout, "wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", diagnostic(&e));
            e.exit_code()
        }
    }
}
