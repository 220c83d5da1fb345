//! `nullwave`: null-condition checks, scenario runs, estimate verification
//! and convergence studies.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or parse error,
//! 3 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use nullwave::estimates::{self, EstimateError, EstimateReport, FamilySpec, InequalityId, Verdict};
use nullwave::runner::{
    convergence_study, nested_levels, run_scenario, rung_dir, write_artifacts, RunError, ScenarioConfig,
};
use nullwave::solver::RunStatus;
use nullwave::system::{check_null_condition, parse_system};

#[derive(Debug, Parser)]
#[command(name = "nullwave", version, about = "Multi-speed quasilinear wave experiments")]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "NULLWAVE_THREADS", default_value_t = 0)]
    threads: usize,
    /// Directory for reports and run artifacts.
    #[arg(long, global = true, env = "NULLWAVE_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Seed recorded in every output; overrides the config's seed.
    #[arg(long, global = true, env = "NULLWAVE_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a system file for symmetry and the null condition.
    Check { file: PathBuf },
    /// Run every ladder rung of a scenario.
    Run { config: PathBuf },
    /// Verify one inequality id, or `all`, on a test family.
    Verify {
        id: String,
        /// `standard`, or a generator such as `two-speed-pair:1,3`.
        #[arg(long, default_value = "standard")]
        family: String,
        /// Refinement levels; each halves the quadrature spacing.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        resolutions: Vec<usize>,
    },
    /// Observed convergence orders on nested resolutions.
    Convergence {
        config: PathBuf,
        /// Number of nested levels starting from the config's resolution.
        #[arg(long, conflicts_with = "resolutions")]
        levels: Option<usize>,
        /// Explicit resolutions; they must nest.
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<usize>>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Solver(_) | RunError::Diagnostics(_) | RunError::Numerical(_) => CliError::Numerical(e.to_string()),
            RunError::Config(_) | RunError::Io(_) | RunError::System(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        match e {
            EstimateError::Simulation(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn out_dir(cli: &Cli, config_dir: Option<&Path>) -> PathBuf {
    cli.out_dir
        .clone()
        .or_else(|| config_dir.map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn check(cli: &Cli, file: &Path) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(file).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let sys = parse_system(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let report = check_null_condition(&sys);
    let json = report.to_json();
    println!("{json}");
    let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("system");
    write(&out_dir(cli, None).join(format!("{stem}.null-report.json")), &json)?;
    eprintln!(
        "symmetric: {}, quasilinear null: {}, semilinear null: {}",
        report.symmetric, report.null_quasilinear, report.null_semilinear
    );
    Ok(report.accepted())
}

fn run(cli: &Cli, path: &Path) -> Result<bool, CliError> {
    let (mut cfg, base) = ScenarioConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let dir = cli.out_dir.clone().or(cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let (sys, text) = cfg.load_system(&base)?;
    let results = run_scenario(&cfg, &sys, &text, rayon::current_num_threads())?;
    let mut ok = true;
    for (k, (record, outcome)) in results.iter().enumerate() {
        write_artifacts(&rung_dir(&dir, &cfg, k), record, outcome, cfg.dumps)?;
        let t_star = record.t_star.map_or("-".to_string(), |t| format!("{t:.4}"));
        println!(
            "{} rung {k} amplitude {}: {} t*={t_star} A0={:.4e} A1={:.4e} A2={:.4e} Cemp={:.4e} wall={:.1}s",
            cfg.experiment,
            record.amplitude,
            record.status.label(),
            record.a0_emp,
            record.a1_emp,
            record.a2_emp,
            record.cemp_max,
            record.wall_time_s
        );
        match record.status {
            RunStatus::AbortedNan { t } => return Err(CliError::Numerical(format!("rung {k} produced NaN at t = {t}"))),
            RunStatus::Completed => {}
            _ => ok &= !cfg.require_completion,
        }
    }
    Ok(ok)
}

fn verify(cli: &Cli, id: &str, family: &str, levels: &[usize]) -> Result<bool, CliError> {
    let family = FamilySpec::parse(family)?;
    let reports: Vec<EstimateReport> = if id == "all" {
        estimates::verify_all(&family, levels)?
    } else {
        vec![estimates::verify(InequalityId::parse(id)?, &family, levels)?]
    };
    let dir = out_dir(cli, None).join("verify");
    let tag = family.name().replace([':', ','], "_");
    let mut csv = EstimateReport::CSV_HEADER.to_string();
    csv.push('\n');
    for r in &reports {
        println!(
            "{} [{}] C_emp={:.4e} trend={:?} refinement={:.4} ladder={:.4} {}",
            r.id, r.family, r.c_emp, r.trend, r.refinement_change, r.ladder_growth, r.verdict
        );
        write(&dir.join(format!("{}-{tag}.json", r.id)), &r.to_json())?;
        csv.push_str(&r.csv_rows());
    }
    write(&dir.join(format!("{id}-{tag}.csv")), &csv)?;
    Ok(reports.iter().all(|r| r.verdict == Verdict::Bounded))
}

fn convergence(cli: &Cli, path: &Path, levels: Option<usize>, resolutions: Option<Vec<usize>>) -> Result<bool, CliError> {
    let (cfg, base) = ScenarioConfig::load(path)?;
    let (sys, _) = cfg.load_system(&base)?;
    let resolutions = match (levels, resolutions) {
        (_, Some(r)) => r,
        (Some(k), None) => nested_levels(cfg.mode, cfg.grid.resolution(), k),
        (None, None) => return Err(CliError::Usage("give --levels or --resolutions".into())),
    };
    let table = convergence_study(&cfg, &sys, &resolutions)?;
    print!("{}", table.to_text());
    let json = serde_json::to_string_pretty(&table).expect("table serializes");
    write(&out_dir(cli, None).join(format!("{}.convergence.json", cfg.experiment)), &json)?;
    Ok(table.pass())
}

fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Check { file } => check(cli, file),
        Command::Run { config } => run(cli, config),
        Command::Verify { id, family, resolutions } => verify(cli, id, family, resolutions),
        Command::Convergence {
            config,
            levels,
            resolutions,
        } => convergence(cli, config, *levels, resolutions.clone()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
