//! Command-line front end for the energy estimator.
//!
//! Exit codes: 0 success, 1 parse/validation error, 2 model infeasibility
//! (for example a physical error rate at or above threshold), 3 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qenergy::{
    builtin_decoder_table, dominant_term, estimate, parse_counter_rows, parse_decoder_table,
    parse_profiles, parse_workload, render_report, resolve_circuit_text, with_numeric_field,
    DecoderTable, EnergyReport, EstimateOptions, InterpolationPolicy, MaintenancePolicy,
    ProfileCatalog, ReportFormat, UnknownGatePolicy, WorkloadSpec,
};

#[derive(Parser)]
#[command(name = "qenergy", version, about = "Energy and power estimation for quantum workloads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the energy of one workload file.
    Estimate {
        /// Workload document to estimate.
        workload: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Re-estimate a workload across values of one numeric field.
    Sweep {
        /// Workload document to sweep.
        workload: PathBuf,
        /// Dot-separated field path, e.g. ftqc.logical.t_count.
        #[arg(long)]
        param: String,
        /// Comma-separated values to substitute.
        #[arg(long, default_value = "")]
        values: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Inspect technology profiles.
    Profiles {
        #[command(subcommand)]
        action: ProfilesAction,
    },
    /// Inspect the decoder hardware table.
    Decoders {
        #[command(subcommand)]
        action: DecodersAction,
    },
}

#[derive(Subcommand)]
enum ProfilesAction {
    /// List the available profile keys.
    List {
        /// Extra profile file to include.
        #[arg(long)]
        profile_file: Option<PathBuf>,
    },
    /// Print one profile in its file form.
    Show {
        key: String,
        #[arg(long)]
        profile_file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DecodersAction {
    /// Print the decoder metrics table.
    Show {
        /// Replacement decoder table file.
        #[arg(long)]
        decoder_table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
}

#[derive(Args)]
struct CommonOpts {
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// How maintenance energy enters the total.
    #[arg(long, value_enum, default_value_t = MaintenanceArg::Flag)]
    maintenance: MaintenanceArg,
    /// Extra profile file merged into the catalog.
    #[arg(long)]
    profile_file: Option<PathBuf>,
    /// Replacement decoder table file.
    #[arg(long)]
    decoder_table: Option<PathBuf>,
    /// Handling of unrecognized gate names in circuit files.
    #[arg(long, value_enum, default_value_t = UnknownGateArg::Error)]
    unknown_gate: UnknownGateArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Machine,
}

impl From<FormatArg> for ReportFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Machine => ReportFormat::Machine,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MaintenanceArg {
    Include,
    Exclude,
    Flag,
}

impl From<MaintenanceArg> for MaintenancePolicy {
    fn from(value: MaintenanceArg) -> Self {
        match value {
            MaintenanceArg::Include => MaintenancePolicy::Include,
            MaintenanceArg::Exclude => MaintenancePolicy::Exclude,
            MaintenanceArg::Flag => MaintenancePolicy::Flag,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnknownGateArg {
    Error,
    Other,
}

impl From<UnknownGateArg> for UnknownGatePolicy {
    fn from(value: UnknownGateArg) -> Self {
        match value {
            UnknownGateArg::Error => UnknownGatePolicy::Error,
            UnknownGateArg::Other => UnknownGatePolicy::CountAsOther,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Core(#[from] qenergy::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Core(err) => {
                if err.is_infeasibility() {
                    2
                } else {
                    1
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("qenergy: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate { workload, opts } => {
            let report = estimate_file(&workload, &opts)?;
            print!("{}", with_newline(render_report(&report, opts.format.into())));
            Ok(())
        }
        Command::Sweep {
            workload,
            param,
            values,
            opts,
        } => sweep_file(&workload, &param, &values, &opts),
        Command::Profiles { action } => profiles(action),
        Command::Decoders { action } => decoders(action),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_catalog(profile_file: Option<&Path>) -> Result<ProfileCatalog, CliError> {
    let mut catalog = ProfileCatalog::builtin();
    if let Some(path) = profile_file {
        for profile in parse_profiles(&read_file(path)?)? {
            catalog.add(profile)?;
        }
    }
    Ok(catalog)
}

fn load_decoder_table(decoder_table: Option<&Path>) -> Result<DecoderTable, CliError> {
    match decoder_table {
        None => Ok(builtin_decoder_table()),
        Some(path) => Ok(parse_decoder_table(
            &read_file(path)?,
            InterpolationPolicy::PiecewiseLinear,
        )?),
    }
}

/// Load a workload and resolve its file references (circuit text, counter
/// rows) relative to the workload's directory.
fn load_workload(path: &Path, unknown_gate: UnknownGatePolicy) -> Result<WorkloadSpec, CliError> {
    let text = read_file(path)?;
    let mut spec = parse_workload(&text)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    if let Some(nisq) = &spec.nisq {
        if let Some(circuit_file) = &nisq.circuit_file {
            let circuit_path = dir.join(circuit_file);
            let circuit_text = read_file(&circuit_path)?;
            spec = resolve_circuit_text(&spec, &circuit_text, unknown_gate)?;
        }
    }
    if let Some(classical) = spec.classical.as_mut() {
        if let Some(counter_file) = classical.counter_file.take() {
            let counter_path = dir.join(&counter_file);
            let series = parse_counter_rows(&read_file(&counter_path)?)?;
            classical.it_series.extend(series);
        }
    }
    Ok(spec)
}

fn estimate_file(path: &Path, opts: &CommonOpts) -> Result<EnergyReport, CliError> {
    let spec = load_workload(path, opts.unknown_gate.into())?;
    let catalog = load_catalog(opts.profile_file.as_deref())?;
    let table = load_decoder_table(opts.decoder_table.as_deref())?;
    let options = EstimateOptions {
        maintenance: opts.maintenance.into(),
    };
    Ok(estimate(&spec, &catalog, &table, &options)?)
}

fn sweep_file(path: &Path, param: &str, values: &str, opts: &CommonOpts) -> Result<(), CliError> {
    let values: Vec<f64> = values
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| qenergy::Error::invalid(format!("bad sweep value '{v}'")).into())
        })
        .collect::<Result<_, CliError>>()?;

    let spec = load_workload(path, opts.unknown_gate.into())?;
    let catalog = load_catalog(opts.profile_file.as_deref())?;
    let table = load_decoder_table(opts.decoder_table.as_deref())?;
    let options = EstimateOptions {
        maintenance: opts.maintenance.into(),
    };

    let mut points: Vec<(f64, EnergyReport)> = Vec::with_capacity(values.len());
    for value in values {
        let swept = with_numeric_field(&spec, param, value)?;
        let report = estimate(&swept, &catalog, &table, &options)?;
        points.push((value, report));
    }

    match opts.format {
        FormatArg::Machine => {
            let docs: Vec<serde_json::Value> = points
                .iter()
                .map(|(value, report)| {
                    serde_json::json!({
                        "value": value,
                        "dominant_term": dominant_term(report),
                        "report": report,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&docs).expect("reports serialize")
            );
        }
        FormatArg::Table => {
            if points.is_empty() {
                return Ok(());
            }
            println!("{:<20}{:>24}  dominant", "value", "E_tot (J)");
            for (value, report) in &points {
                println!(
                    "{:<20}{:>24}  {}",
                    value,
                    format!("{:.6e}", report.e_tot_joules),
                    dominant_term(report)
                );
            }
        }
    }
    Ok(())
}

fn profiles(action: ProfilesAction) -> Result<(), CliError> {
    match action {
        ProfilesAction::List { profile_file } => {
            let catalog = load_catalog(profile_file.as_deref())?;
            for key in catalog.keys() {
                println!("{key}");
            }
        }
        ProfilesAction::Show { key, profile_file } => {
            let catalog = load_catalog(profile_file.as_deref())?;
            let profile = catalog.get(&key)?;
            println!(
                "{}",
                serde_json::to_string_pretty(profile).expect("profiles serialize")
            );
        }
    }
    Ok(())
}

fn decoders(action: DecodersAction) -> Result<(), CliError> {
    let DecodersAction::Show {
        decoder_table,
        format,
    } = action;
    let table = load_decoder_table(decoder_table.as_deref())?;
    match format {
        FormatArg::Machine => println!(
            "{}",
            serde_json::to_string_pretty(&table).expect("tables serialize")
        ),
        FormatArg::Table => {
            println!(
                "{:<10}{:>6}{:>12}{:>14}{:>14}",
                "decoder", "d", "area_mm2", "power_watts", "latency_ns"
            );
            for entry in &table.entries {
                println!(
                    "{:<10}{:>6}{:>12}{:>14}{:>14}",
                    entry.decoder.name(),
                    entry.distance,
                    entry.area_mm2,
                    entry.power_watts,
                    format!("{:.1}", entry.latency_seconds * 1e9)
                );
            }
        }
    }
    Ok(())
}

fn with_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}
