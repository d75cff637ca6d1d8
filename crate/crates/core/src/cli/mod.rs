//! Command-line front end: `reliability`, `intervals`, `rank`, `actions` and
//! `plot` over a JSON scenario file.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::global::{importance_measures, rank_global};
use crate::inference::posterior_intervals;
use crate::local::{heuristic_action_table, posterior_action_table, voi_heuristic, voi_local};
use crate::model::{system_failure_prob, DEFAULT_COMPONENT_CAP};
use crate::oracle::{mc_system_failure, mc_voi_local, SimulationConfig};
use crate::output::{self, Cell, Report, Series};
use crate::scenario::{Scenario, ScenarioError};
use crate::voi::Metric;
use crate::LossEnvelope;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SIZE_CAP: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "netvoi", version, about = "Inspection priorities for networks of binary components")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the system failure probability.
    Reliability(Common),
    /// Posterior failure interval of every component.
    Intervals(Common),
    /// Rank components by a VoI metric or importance measure.
    Rank {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_metric)]
        metric: Metric,
    },
    /// Optimal maintenance plan after each inspection outcome.
    Actions {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Policy::Exact)]
        policy: Policy,
    },
    /// Grouped bar chart of normalized scores, as SVG.
    Plot {
        #[command(flatten)]
        common: Common,
        /// Metrics to draw (repeatable); defaults to every available one.
        #[arg(long, value_parser = parse_metric)]
        metric: Vec<Metric>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario document (JSON).
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the false-alarm rate of the scenario.
    #[arg(long)]
    eps_fa: Option<f64>,
    /// Override the false-silence rate of the scenario.
    #[arg(long)]
    eps_fs: Option<f64>,
    /// Largest network analysed exactly.
    #[arg(long, default_value_t = DEFAULT_COMPONENT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add Monte Carlo estimates with this many samples.
    #[arg(long)]
    mc_samples: Option<u64>,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    SizeCap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeCap { .. } => Failure::SizeCap(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::SizeCap(_) => Failure::SizeCap(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

/// Runs the CLI on `argv` (including the program name) with standard streams.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run_command`] with explicit output streams.
pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_VALIDATION
        }
        Err(Failure::SizeCap(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_SIZE_CAP
        }
    }
}

fn load(common: &Common) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(&common.scenario).map_err(|e| {
        Failure::Validation(format!("cannot read {}: {e}", common.scenario.display()))
    })?;
    let mut scenario = Scenario::from_json(&text, common.cap)?;
    scenario.override_inspection(common.eps_fa, common.eps_fs)?;
    Ok(scenario)
}

fn emit(common: &Common, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Validation(format!("cannot write output: {e}"))),
    }
}

fn render(common: &Common, report: &Report) -> String {
    match common.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn simulation(common: &Common) -> Result<Option<SimulationConfig>, Failure> {
    common
        .mc_samples
        .map(|n| SimulationConfig::new(n, common.seed))
        .transpose()
        .map_err(Failure::from)
}

fn costs_of(s: &Scenario) -> Result<&crate::LocalCostModel, Failure> {
    s.costs
        .as_ref()
        .ok_or_else(|| Failure::Validation("the scenario has no costs section".into()))
}

fn envelope_of(s: &Scenario) -> LossEnvelope {
    s.envelope.clone().unwrap_or(LossEnvelope::Quadratic)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Reliability(common) => {
            let s = load(&common)?;
            let p_u = system_failure_prob(&s.network, &s.distribution)?;
            let mut report = output::reliability_report(s.network.names(), p_u);
            if let Some(cfg) = simulation(&common)? {
                let est = mc_system_failure(&s.network, &s.distribution, &cfg)?;
                report.headers.extend(["mc_estimate".into(), "mc_std_error".into()]);
                report.rows[0].extend([Cell::Num(est.mean), Cell::Num(est.std_error)]);
            }
            emit(&common, &render(&common, &report), out)
        }
        Command::Intervals(common) => {
            let s = load(&common)?;
            let iv = posterior_intervals(&s.network, &s.distribution, &s.sensors)?;
            emit(&common, &render(&common, &output::intervals_report(s.network.names(), &iv)), out)
        }
        Command::Rank { common, metric } => {
            let s = load(&common)?;
            let report = rank_report(&s, metric, simulation(&common)?)?;
            emit(&common, &render(&common, &report), out)
        }
        Command::Actions { common, policy } => {
            let s = load(&common)?;
            let costs = costs_of(&s)?;
            let (table, label) = match policy {
                Policy::Exact => (posterior_action_table(&s.network, &s.distribution, &s.sensors, costs)?, "exact"),
                Policy::Heuristic => (
                    heuristic_action_table(&s.network, &s.distribution, &s.sensors, costs)?,
                    "heuristic",
                ),
            };
            emit(&common, &render(&common, &output::actions_report(&table, label)), out)
        }
        Command::Plot { common, metric } => {
            let s = load(&common)?;
            let metrics = if metric.is_empty() {
                Metric::ALL
                    .into_iter()
                    .filter(|m| !matches!(m, Metric::Local | Metric::Heuristic) || s.costs.is_some())
                    .collect()
            } else {
                metric
            };
            let series = metrics
                .iter()
                .map(|&m| Ok(Series { label: m.as_str().into(), values: normalized_scores(&s, m)? }))
                .collect::<Result<Vec<_>, Failure>>()?;
            let title = s.document.name.clone().unwrap_or_else(|| "normalized scores".into());
            emit(&common, &output::grouped_bar_chart(&title, s.network.names(), &series), out)
        }
    }
}

fn normalized_scores(s: &Scenario, metric: Metric) -> Result<Vec<f64>, Failure> {
    Ok(match metric {
        Metric::Global => rank_global(&s.network, &s.distribution, &s.sensors, &envelope_of(s))?.normalized,
        Metric::Local => voi_local(&s.network, &s.distribution, &s.sensors, costs_of(s)?)?.normalized,
        Metric::Heuristic => voi_heuristic(&s.network, &s.distribution, &s.sensors, costs_of(s)?)?.normalized,
        m => {
            let imp = importance_measures(&s.network, &s.distribution, &s.sensors)?;
            output::normalize_finite(imp.values(m).expect("importance metric"))
        }
    })
}

fn rank_report(s: &Scenario, metric: Metric, mc: Option<SimulationConfig>) -> Result<Report, Failure> {
    Ok(match metric {
        Metric::Global => {
            output::voi_report(&rank_global(&s.network, &s.distribution, &s.sensors, &envelope_of(s))?)
        }
        Metric::Local => {
            let costs = costs_of(s)?;
            let voi = voi_local(&s.network, &s.distribution, &s.sensors, costs)?;
            let mut report = output::voi_report(&voi);
            if let Some(cfg) = mc {
                report.headers.extend(["mc_voi".into(), "mc_std_error".into()]);
                for (row, i) in report.rows.iter_mut().zip(voi.ranking()) {
                    let est = mc_voi_local(
                        &s.network,
                        &s.distribution,
                        &s.sensors.for_component(i),
                        costs,
                        i,
                        &cfg,
                    )?;
                    row.extend([Cell::Num(est.mean), Cell::Num(est.std_error)]);
                }
            }
            report
        }
        Metric::Heuristic => {
            output::voi_report(&voi_heuristic(&s.network, &s.distribution, &s.sensors, costs_of(s)?)?)
        }
        m => output::importance_report(&importance_measures(&s.network, &s.distribution, &s.sensors)?, m),
    })
}
