//! Command-line front end: simulation sweeps, analytical curves, detector
//! and baseline comparisons, crossover and complexity tables.
//!
//! Every table is emitted as RFC-4180-style CSV (header row, comma
//! separation, `.` decimals, full-precision scientific notation) or as a
//! JSON array with `--json`. Exit codes: 0 success, 1 runtime failure,
//! 2 usage or configuration error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ris_dssm::analysis::{
    abep_union_bound_with_modem, crossover_lhs_correct, crossover_lhs_wrong, crossover_min_l,
    AnalysisError, UpepMethod, CROSSOVER_SCAN_LIMIT,
};
use ris_dssm::detectors::{complexity_counts, DetectorKind};
use ris_dssm::modem::{build_constellation, Modem};
use ris_dssm::montecarlo::{
    run_abep_with, run_detector_comparison_with, AbepCurve, RunOptions, SystemKind, SSM_SCATTERERS,
};
use ris_dssm::{ModulationKind, SystemConfig};

mod record;
use record::CurveRecord;

#[derive(Debug, Parser)]
#[command(
    name = "ris-dssm",
    about = "Link-level simulator and analytical ABEP evaluator for RIS-aided double spatial scattering modulation",
    version
)]
struct Cli {
    /// Scenario file (flat key=value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the configured master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the configured trials per SNR point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads for the trial loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit a JSON array instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo ABEP sweep over the configured SNR grid.
    Simulate(SimulateArgs),
    /// Analytical ABEP curves (no simulation).
    Analyze(AnalyzeArgs),
    /// Paired detector comparison plus the single-hop baseline.
    Compare,
    /// Minimum surface size for the cascaded scheme to beat the baseline.
    Crossover(CrossoverArgs),
    /// Operation-count table for both detectors.
    Complexity(ComplexityArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Decision rule to simulate.
    #[arg(long, value_parser = parse_detector, default_value = "suboptimal")]
    detector: DetectorKind,
    /// Link to simulate.
    #[arg(long, value_parser = parse_system, default_value = "ris-dssm")]
    system: SystemKind,
    /// Stop a point after this many bit errors (omit for full runs).
    #[arg(long)]
    early_stop: Option<u64>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// One of: integral | series | asymptotic | bound. Omit for all three
    /// curve columns; `bound` places the loose closed-form bound in the
    /// integral column.
    #[arg(long)]
    method: Option<String>,
}

#[derive(Debug, Args)]
struct CrossoverArgs {
    /// SNR points in dB, comma-separated.
    #[arg(
        long = "rho-db",
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    rho_db: Vec<f64>,
    /// Averaged symbol separation of the beam-correct condition.
    #[arg(long = "eta-bar", default_value_t = 2.0)]
    eta_bar: f64,
    /// Decided-symbol energy of the beam-wrong condition.
    #[arg(long = "sym-energy", default_value_t = 1.0)]
    sym_energy: f64,
    /// Integer scan ceiling.
    #[arg(long, default_value_t = CROSSOVER_SCAN_LIMIT)]
    scan_limit: usize,
}

#[derive(Debug, Args)]
struct ComplexityArgs {
    #[arg(long = "max-m", default_value_t = 8)]
    max_m: usize,
    #[arg(long = "max-n", default_value_t = 8)]
    max_n: usize,
    #[arg(long = "max-k", default_value_t = 16)]
    max_k: usize,
}

fn parse_detector(s: &str) -> Result<DetectorKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "suboptimal" | "subopt" => Ok(DetectorKind::Suboptimal),
        "optimal" | "ml" => Ok(DetectorKind::Optimal),
        other => Err(format!("unknown detector `{other}`")),
    }
}

fn parse_system(s: &str) -> Result<SystemKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "ris-dssm" | "dssm" => Ok(SystemKind::RisDssm),
        "ssm" => Ok(SystemKind::Ssm),
        other => Err(format!("unknown system `{other}`")),
    }
}

/// Anything that should abort the process with a specific exit code.
#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 2,
        }
    }

    fn runtime(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 1,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> CliError {
        CliError::runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }

    let output = match &cli.command {
        Command::Simulate(args) => {
            let config = load_config(&cli)?;
            cmd_simulate(&config, args, cli.json)?
        }
        Command::Analyze(args) => {
            let config = load_config(&cli)?;
            cmd_analyze(&config, args, cli.json)?
        }
        Command::Compare => {
            let config = load_config(&cli)?;
            cmd_compare(&config, cli.json)?
        }
        Command::Crossover(args) => cmd_crossover(args, cli.json)?,
        Command::Complexity(args) => cmd_complexity(args, cli.json)?,
    };

    match &cli.out {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

fn load_config(cli: &Cli) -> Result<SystemConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::usage("--config is required for this command"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))?;
    let mut config = SystemConfig::from_key_values(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if let Some(seed) = cli.seed {
        config.rng_seed = seed;
    }
    if let Some(trials) = cli.trials {
        config.trials_per_snr = trials;
    }
    config
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn scenario_id(config: &SystemConfig, system: SystemKind) -> String {
    match system {
        SystemKind::RisDssm => format!(
            "dssm-n{}-m{}-k{}-l{}-{}",
            config.num_tx_scatterers,
            config.num_rx_scatterers,
            config.symbol_order,
            config.ris_elements,
            match config.modulation_kind {
                ModulationKind::Psk => "psk",
                ModulationKind::Qam => "qam",
            }
        ),
        SystemKind::Ssm => format!("ssm-m{SSM_SCATTERERS}-k2-psk"),
    }
}

/// Per-SNR analytical columns for the cascaded scheme.
struct BoundColumns {
    integral: Vec<Option<f64>>,
    series: Vec<Option<f64>>,
    asymptotic: Vec<Option<f64>>,
    series_flag: Vec<bool>,
}

fn bound_columns(config: &SystemConfig) -> Result<BoundColumns, CliError> {
    let modem = modem_for(config);
    let l = config.ris_elements;
    let mut columns = BoundColumns {
        integral: Vec::new(),
        series: Vec::new(),
        asymptotic: Vec::new(),
        series_flag: Vec::new(),
    };
    for &snr_db in &config.snr_grid_db {
        let rho = 10f64.powf(snr_db / 10.0);
        let integral = abep_union_bound_with_modem(&modem, l, rho, UpepMethod::Integral)?;
        columns.integral.push(Some(integral));
        match abep_union_bound_with_modem(&modem, l, rho, UpepMethod::Series) {
            Ok(v) => {
                columns.series.push(Some(v));
                columns.series_flag.push(false);
            }
            Err(AnalysisError::SeriesNotConverged { .. }) => {
                columns.series.push(None);
                columns.series_flag.push(true);
            }
            Err(e) => return Err(e.into()),
        }
        columns.asymptotic.push(Some(abep_union_bound_with_modem(
            &modem,
            l,
            rho,
            UpepMethod::Asymptotic,
        )?));
    }
    Ok(columns)
}

fn modem_for(config: &SystemConfig) -> Modem {
    Modem::new(
        config.num_tx_scatterers,
        config.num_rx_scatterers,
        build_constellation(config.modulation_kind, config.symbol_order).expect("validated config"),
    )
    .expect("validated config")
}

fn curve_records(
    config: &SystemConfig,
    curve: &AbepCurve,
    bounds: Option<&BoundColumns>,
) -> Vec<CurveRecord> {
    let scenario = scenario_id(config, curve.system);
    curve
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| CurveRecord {
            scenario: scenario.clone(),
            system: curve.system.to_string(),
            detector: curve.detector.to_string(),
            snr_db: p.snr_db,
            abep_sim: Some(p.abep),
            errors: Some(p.bit_errors),
            trials: Some(p.trials),
            abep_bound_integral: bounds.and_then(|b| b.integral[i]),
            abep_bound_series: bounds.and_then(|b| b.series[i]),
            abep_asymptotic: bounds.and_then(|b| b.asymptotic[i]),
            low_confidence: p.low_confidence || bounds.is_some_and(|b| b.series_flag[i]),
        })
        .collect()
}

fn cmd_simulate(
    config: &SystemConfig,
    args: &SimulateArgs,
    json: bool,
) -> Result<String, CliError> {
    let options = RunOptions {
        early_stop_bit_errors: args.early_stop,
    };
    let curve = run_abep_with(config, args.detector, args.system, &options);
    let bounds = match args.system {
        SystemKind::RisDssm => Some(bound_columns(config)?),
        SystemKind::Ssm => None,
    };
    let records = curve_records(config, &curve, bounds.as_ref());
    Ok(render_records(&records, json))
}

fn cmd_analyze(config: &SystemConfig, args: &AnalyzeArgs, json: bool) -> Result<String, CliError> {
    let modem = modem_for(config);
    let l = config.ris_elements;
    let scenario = scenario_id(config, SystemKind::RisDssm);
    let method = match args.method.as_deref() {
        None => None,
        Some("integral") => Some(UpepMethod::Integral),
        Some("series") => Some(UpepMethod::Series),
        Some("asymptotic") => Some(UpepMethod::Asymptotic),
        Some("bound") => Some(UpepMethod::UpperBound),
        Some(other) => {
            return Err(CliError::usage(format!(
                "unknown method `{other}` (expected integral|series|asymptotic|bound)"
            )))
        }
    };

    let mut records = Vec::new();
    for &snr_db in &config.snr_grid_db {
        let rho = 10f64.powf(snr_db / 10.0);
        let mut record = CurveRecord {
            scenario: scenario.clone(),
            system: SystemKind::RisDssm.to_string(),
            detector: DetectorKind::Suboptimal.to_string(),
            snr_db,
            abep_sim: None,
            errors: None,
            trials: None,
            abep_bound_integral: None,
            abep_bound_series: None,
            abep_asymptotic: None,
            low_confidence: false,
        };
        let eval = |m: UpepMethod| abep_union_bound_with_modem(&modem, l, rho, m);
        match method {
            None => {
                record.abep_bound_integral = Some(eval(UpepMethod::Integral)?);
                match eval(UpepMethod::Series) {
                    Ok(v) => record.abep_bound_series = Some(v),
                    Err(AnalysisError::SeriesNotConverged { .. }) => {
                        record.low_confidence = true;
                    }
                    Err(e) => return Err(e.into()),
                }
                record.abep_asymptotic = Some(eval(UpepMethod::Asymptotic)?);
            }
            Some(UpepMethod::Integral) => {
                record.abep_bound_integral = Some(eval(UpepMethod::Integral)?);
            }
            Some(UpepMethod::Series) => match eval(UpepMethod::Series) {
                Ok(v) => record.abep_bound_series = Some(v),
                Err(AnalysisError::SeriesNotConverged { .. }) => {
                    record.low_confidence = true;
                }
                Err(e) => return Err(e.into()),
            },
            Some(UpepMethod::Asymptotic) => {
                record.abep_asymptotic = Some(eval(UpepMethod::Asymptotic)?);
            }
            // The loose closed-form bound rides in the integral column; it
            // bounds the same quantity the integral evaluates exactly.
            Some(UpepMethod::UpperBound) => {
                record.abep_bound_integral = Some(eval(UpepMethod::UpperBound)?);
            }
        }
        records.push(record);
    }
    Ok(render_records(&records, json))
}

fn cmd_compare(config: &SystemConfig, json: bool) -> Result<String, CliError> {
    let options = RunOptions::default();
    let (sub, opt) = run_detector_comparison_with(config, SystemKind::RisDssm, &options);
    let ssm = run_abep_with(config, DetectorKind::Suboptimal, SystemKind::Ssm, &options);
    let bounds = bound_columns(config)?;
    let mut records = curve_records(config, &sub, Some(&bounds));
    records.extend(curve_records(config, &opt, Some(&bounds)));
    records.extend(curve_records(config, &ssm, None));
    Ok(render_records(&records, json))
}

fn cmd_crossover(args: &CrossoverArgs, json: bool) -> Result<String, CliError> {
    if args.rho_db.is_empty() {
        return Err(CliError::usage("--rho-db needs at least one value"));
    }
    let mut rows = Vec::new();
    for &rho_db in &args.rho_db {
        let rho = 10f64.powf(rho_db / 10.0);
        let report = crossover_min_l(rho, args.eta_bar, args.sym_energy, args.scan_limit);
        rows.push(record::CrossoverRow {
            rho_db,
            eta_bar: args.eta_bar,
            sym_energy: args.sym_energy,
            min_l_correct: report.min_l_correct,
            lhs_correct_at_min: report
                .min_l_correct
                .map(|l| crossover_lhs_correct(rho, l, args.eta_bar)),
            min_l_wrong: report.min_l_wrong,
            lhs_wrong_at_min: report
                .min_l_wrong
                .map(|l| crossover_lhs_wrong(rho, l, args.sym_energy)),
            scan_limit: args.scan_limit,
        });
    }
    Ok(record::render_crossover(&rows, json))
}

fn cmd_complexity(args: &ComplexityArgs, json: bool) -> Result<String, CliError> {
    let powers = |max: usize| {
        let mut v = Vec::new();
        let mut x = 2usize;
        while x <= max {
            v.push(x);
            x *= 2;
        }
        v
    };
    let (ms, ns, ks) = (powers(args.max_m), powers(args.max_n), powers(args.max_k));
    if ms.is_empty() || ns.is_empty() || ks.is_empty() {
        return Err(CliError::usage("complexity grid maxima must be at least 2"));
    }
    let mut rows = Vec::new();
    for &m in &ms {
        for &n in &ns {
            for &k in &ks {
                let (sub_mults, sub_adds) = complexity_counts(m, n, k, DetectorKind::Suboptimal);
                let (opt_mults, opt_adds) = complexity_counts(m, n, k, DetectorKind::Optimal);
                rows.push(record::ComplexityRow {
                    m,
                    n,
                    k,
                    suboptimal_mults: sub_mults,
                    suboptimal_adds: sub_adds,
                    optimal_mults: opt_mults,
                    optimal_adds: opt_adds,
                    mult_ratio: opt_mults as f64 / sub_mults as f64,
                });
            }
        }
    }
    Ok(record::render_complexity(&rows, json))
}

fn render_records(records: &[CurveRecord], json: bool) -> String {
    if json {
        return serde_json::to_string_pretty(records).expect("serializable") + "\n";
    }
    let mut out = String::from(CurveRecord::CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.to_csv_row());
    }
    out
}
