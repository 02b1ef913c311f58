use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pathgain::config::{EnvironmentConfig, PathModel};
use pathgain::data_fit::{
    fit_slope_intercept, read_csv, residuals, rmse_against_model, synthesize, write_csv,
    MeasurementDataset, MeasurementRecord, ModelFn, PathGainModel,
};
use pathgain::oracles::{
    run_all, run_suite, Metric, OracleReport, Suite, ToleranceProfile, VerifyOptions,
};
use pathgain::sweep::{sweep, RangeSpec};
use pathgain::units::to_db;
use pathgain::{Error, Result};

#[derive(Parser)]
#[command(
    name = "pathgain",
    version,
    about = "Closed-form path gain laws, oracles and fitting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a morphology or reference model over range and write CSV.
    Predict(PredictArgs),
    /// Compare closed forms with their numerical oracles.
    Verify(VerifyArgs),
    /// Least-squares slope-intercept fit of a dataset.
    Fit(FitArgs),
    /// RMSE of a dataset against a model.
    Evaluate(EvaluateArgs),
    /// Sample a model with seeded Gaussian noise into a dataset CSV.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    config: PathBuf,
    /// Morphology (e.g. los_corridor, canyon_total) or reference model
    /// (e.g. uma_los, friis).
    #[arg(long)]
    model: String,
    /// min:max:points[:log], meters of horizontal distance.
    #[arg(long)]
    range: String,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or `all`.
    suite: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value = "default")]
    tolerance_profile: String,
    #[arg(long)]
    output: Option<PathBuf>,
    /// suite:dB added to that suite's closed forms.
    #[arg(long, hide = true)]
    perturb: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    dataset: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    dataset: PathBuf,
    #[arg(long)]
    config: PathBuf,
    /// Morphology, reference model, or `fit` for the dataset's own fit.
    #[arg(long)]
    model: String,
    /// Writes per-record residuals here.
    #[arg(long)]
    residuals: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    model: String,
    #[arg(long)]
    range: String,
    #[arg(long, default_value_t = 0.0)]
    sigma_db: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    street: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Outcome {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Predict(a) => predict(a),
        Command::Verify(a) => verify(a),
        Command::Fit(a) => fit(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::Config(format!("{}: {e}", path.display()))
}

fn write_err(e: io::Error) -> Error {
    Error::Config(format!("write: {e}"))
}

fn predict(a: PredictArgs) -> Result<Outcome> {
    let cfg = EnvironmentConfig::load(&a.config)?;
    let model = PathModel::new(&cfg, &a.model)?;
    let spec: RangeSpec = a.range.parse()?;
    let result = sweep(&spec.ranges(), model.components(), |x| model.predict(x))?;
    let mut out = open_output(a.output.as_deref())?;
    match a.format {
        Format::Csv => result.write_csv(&mut out)?,
        Format::Text => {
            for p in &result.points {
                writeln!(
                    out,
                    "{:>10} {:>9.2} {}",
                    p.range_m,
                    p.gain_db,
                    p.flags.names()
                )
                .map_err(write_err)?;
            }
        }
    }
    out.flush().map_err(write_err)?;
    Ok(Outcome::Ok)
}

fn parse_perturb(s: &str) -> Result<(Suite, f64)> {
    let (suite, db) = s
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("perturb `{s}`: expected suite:dB")))?;
    let db: f64 = db
        .parse()
        .map_err(|_| Error::Config(format!("perturb `{s}`: dB is not a number")))?;
    Ok((suite.parse()?, db))
}

fn format_value(metric: Metric, v: f64, linear_power: bool) -> String {
    match metric {
        Metric::Db if linear_power => format!("{:.2}", to_db(v)),
        Metric::Db => format!("{v:.2}"),
        _ => format!("{v:.6e}"),
    }
}

fn write_reports(out: &mut dyn Write, reports: &[OracleReport], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "suite",
                "name",
                "closed_form",
                "oracle",
                "gap",
                "bound",
                "metric",
                "status",
                "flags",
            ])?;
            for r in reports {
                w.write_record([
                    r.suite.name().to_string(),
                    r.name.clone(),
                    format_value(r.metric, r.closed_form, true),
                    format_value(r.metric, r.oracle, true),
                    format_value(r.metric, r.gap, false),
                    format_value(r.metric, r.bound, false),
                    metric_name(r.metric).to_string(),
                    status(r).to_string(),
                    r.flags.names(),
                ])?;
            }
            w.flush()
        }
        Format::Text => {
            for r in reports {
                let unit = if r.metric == Metric::Db { " dB" } else { "" };
                let line = format!(
                    "{} {:<15} {:<55} closed {} oracle {} gap {}{unit} bound {}{unit} {}",
                    status(r),
                    r.suite.name(),
                    r.name,
                    format_value(r.metric, r.closed_form, true),
                    format_value(r.metric, r.oracle, true),
                    format_value(r.metric, r.gap, false),
                    format_value(r.metric, r.bound, false),
                    r.flags.names(),
                );
                writeln!(out, "{}", line.trim_end())?;
            }
            let failed: Vec<&OracleReport> = reports.iter().filter(|r| !r.passed).collect();
            writeln!(out, "{} checks, {} failed", reports.len(), failed.len())?;
            for r in failed {
                writeln!(out, "failed: {}/{}", r.suite.name(), r.name)?;
            }
            Ok(())
        }
    }
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::AbsDiff => "abs",
        Metric::RelDiff => "rel",
        Metric::Db => "db",
    }
}

fn status(r: &OracleReport) -> &'static str {
    if r.passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let opts = VerifyOptions {
        profile: a.tolerance_profile.parse::<ToleranceProfile>()?,
        deadline: None,
        perturb: a.perturb.as_deref().map(parse_perturb).transpose()?,
    };
    let reports = if a.suite == "all" {
        run_all(&opts)?
    } else {
        run_suite(a.suite.parse()?, &opts)?
    };
    let mut out = open_output(a.output.as_deref())?;
    write_reports(&mut out, &reports, a.format).map_err(write_err)?;
    out.flush().map_err(write_err)?;
    if reports.iter().all(|r| r.passed) {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::VerificationFailed)
    }
}

/// The fit and its residual never use the frequency; any positive value
/// satisfies dataset validation.
const FREQUENCY_UNUSED_HZ: f64 = 1.0;

fn fit(a: FitArgs) -> Result<Outcome> {
    let ds = read_csv(&a.dataset, FREQUENCY_UNUSED_HZ)?;
    let f = fit_slope_intercept(&ds)?;
    let mut out = open_output(a.output.as_deref())?;
    match a.format {
        Format::Csv => writeln!(
            out,
            "intercept_db,exponent,rmse_db,n_points\n{:.2},{:.4},{:.2},{}",
            f.model.intercept_db, f.model.exponent, f.rmse_db, f.n_points
        ),
        Format::Text => writeln!(
            out,
            "intercept_db {:.2}\nexponent {:.4}\nrmse_db {:.2}\nn_points {}",
            f.model.intercept_db, f.model.exponent, f.rmse_db, f.n_points
        ),
    }
    .map_err(write_err)?;
    out.flush().map_err(write_err)?;
    Ok(Outcome::Ok)
}

fn evaluate(a: EvaluateArgs) -> Result<Outcome> {
    let cfg = EnvironmentConfig::load(&a.config)?;
    let f = cfg.frequency_hz().ok_or_else(|| Error::MissingFields {
        morphology: a.model.clone(),
        missing: vec!["link.frequency_hz".into()],
    })?;
    let ds = read_csv(&a.dataset, f)?;
    let model: Box<dyn PathGainModel> = if a.model == "fit" {
        Box::new(fit_slope_intercept(&ds)?.model)
    } else {
        let m = PathModel::new(&cfg, &a.model)?;
        Box::new(ModelFn(move |r: &MeasurementRecord| m.gain_db(r.range_m)))
    };
    let rmse = rmse_against_model(&ds, model.as_ref())?;
    if let Some(path) = &a.residuals {
        let res = residuals(&ds, model.as_ref())?;
        write_residuals(path, &ds, &res)?;
    }
    let mut out = open_output(None)?;
    writeln!(out, "rmse_db {rmse:.2}\nn_points {}", ds.len()).map_err(write_err)?;
    out.flush().map_err(write_err)?;
    Ok(Outcome::Ok)
}

fn write_residuals(path: &Path, ds: &MeasurementDataset, res: &[f64]) -> Result<()> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let to_err = |e: csv::Error| Error::Config(format!("{}: {e}", path.display()));
    w.write_record([
        "range_m",
        "path_gain_db",
        "predicted_db",
        "residual_db",
        "street",
        "flag",
    ])
    .map_err(to_err)?;
    for (r, e) in ds.records.iter().zip(res) {
        w.write_record([
            format!("{}", r.range_m),
            format!("{:.2}", r.path_gain_db),
            format!("{:.2}", r.path_gain_db - e),
            format!("{e:.2}"),
            r.street.clone().unwrap_or_default(),
            r.flag.clone().unwrap_or_default(),
        ])
        .map_err(to_err)?;
    }
    w.flush().map_err(|e| io_error(path, e))?;
    Ok(())
}

fn synth(a: SynthArgs) -> Result<Outcome> {
    let cfg = EnvironmentConfig::load(&a.config)?;
    let f = cfg.frequency_hz().ok_or_else(|| Error::MissingFields {
        morphology: a.model.clone(),
        missing: vec!["link.frequency_hz".into()],
    })?;
    let model = PathModel::new(&cfg, &a.model)?;
    let spec: RangeSpec = a.range.parse()?;
    let mut ds = synthesize(&spec.ranges(), f, a.sigma_db, a.seed, |x| model.gain_db(x))?;
    for r in &mut ds.records {
        r.street.clone_from(&a.street);
    }
    let mut out = open_output(a.output.as_deref())?;
    write_csv(&ds, &mut out)?;
    out.flush().map_err(write_err)?;
    Ok(Outcome::Ok)
}
