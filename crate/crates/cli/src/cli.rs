//! The `moonlight` command line.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 when an input
//! fails validation or monitoring fails. Diagnostics go to the error
//! stream.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moonlight_core::domain::DomainKind;
use moonlight_core::script::{load_script, FormulaArgs};
use moonlight_core::{monitor, MonitorRequest};

use crate::automotive::generate_automotive_trace;
use crate::bench::{bench_spatial, bench_temporal, format_table, SpatialBench, TemporalBench};
use crate::result::{write_result, ResultFormat};
use crate::sensor::{generate_sensor_network, SensorParams, DEFAULT_SIDE};
use crate::trace::{load_trace, write_trace};

pub const THREADS_VAR: &str = "MOONLIGHT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "moonlight", version, about = "Monitor spatio-temporal requirements over traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monitor one formula of a script over a trace.
    Monitor(MonitorArgs),
    /// Write a synthetic trace.
    #[command(subcommand)]
    Generate(Generate),
    /// Time the bundled requirements on synthetic traces.
    #[command(subcommand)]
    Bench(Bench),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Domain {
    Boolean,
    Minmax,
}

impl From<Domain> for DomainKind {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Boolean => DomainKind::Boolean,
            Domain::Minmax => DomainKind::MinMax,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("parameter `{name}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug, Args)]
struct MonitorArgs {
    #[arg(long)]
    script: PathBuf,
    #[arg(long)]
    formula: String,
    /// Formula argument, repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    #[arg(long)]
    trace: PathBuf,
    /// Overrides the script's domain.
    #[arg(long, value_enum)]
    domain: Option<Domain>,
    #[arg(long)]
    out: PathBuf,
    /// Defaults to the extension of `--out`.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 or absent uses MOONLIGHT_THREADS, then all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Generate {
    /// A random sensor network.
    Sensor {
        #[arg(long)]
        nodes: usize,
        /// Radio range; calibrated from the node count when absent.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SIDE)]
        side: f64,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Move devices every step.
        #[arg(long)]
        mobile: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// An engine-speed / vehicle-speed trace.
    Automotive {
        #[arg(long, default_value_t = 6400)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Bench {
    /// R1 to R4 on an automotive trace.
    Temporal {
        #[arg(long, default_value_t = 12800)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4500.0)]
        wbar: f64,
        #[arg(long, default_value_t = 120.0)]
        vbar: f64,
        #[arg(long, default_value_t = 4.0)]
        horizon: f64,
        #[arg(long = "formula")]
        formulas: Vec<String>,
        #[arg(long = "domain", value_enum)]
        domains: Vec<Domain>,
    },
    /// The sensor-network requirements on a generated network.
    Spatial {
        #[arg(long, default_value_t = 100)]
        nodes: usize,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "formula")]
        formulas: Vec<String>,
        #[arg(long = "domain", value_enum)]
        domains: Vec<Domain>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Thread count from the flag, else from the environment; `None` means
/// all cores.
fn thread_count(flag: Option<usize>) -> Result<Option<usize>, String> {
    if let Some(n) = flag.filter(|&n| n > 0) {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|n| (n > 0).then_some(n))
            .map_err(|e| format!("{THREADS_VAR}=`{v}`: {e}")),
    }
}

fn run_monitor(a: MonitorArgs) -> Result<(), String> {
    let text = fs::read_to_string(&a.script).map_err(|e| format!("{}: {e}", a.script.display()))?;
    let script = load_script(&text).map_err(|e| format!("{}: {e}", a.script.display()))?;
    let trace = load_trace(&a.trace).map_err(|e| format!("{} [{}]: {e}", a.trace.display(), e.code()))?;
    let args: FormulaArgs = a.params.into_iter().collect();
    let mut req = MonitorRequest::new(&script, &a.formula, &trace.signal).args(args);
    if let Some(model) = &trace.model {
        req = req.model(model);
    }
    if let Some(d) = a.domain {
        req = req.domain(d.into());
    }
    if let Some(n) = thread_count(a.threads)? {
        req = req.threads(n);
    }
    let result = monitor(&req).map_err(|e| format!("monitoring `{}`: {e}", a.formula))?;
    let format = match a.format {
        Some(Format::Json) => ResultFormat::Json,
        Some(Format::Csv) => ResultFormat::Csv,
        None => ResultFormat::from_path(&a.out),
    };
    write_result(&result, &a.out, format).map_err(|e| e.to_string())
}

fn run_generate(g: Generate) -> Result<(), String> {
    let (file, out) = match g {
        Generate::Sensor {
            nodes,
            radius,
            side,
            steps,
            seed,
            mobile,
            out,
        } => {
            let positive = |x: f64| x.is_finite() && x > 0.0;
            if nodes == 0 || steps == 0 || !positive(side) || radius.is_some_and(|r| !positive(r)) {
                return Err("need --nodes >= 1, --steps >= 1, --side > 0 and --radius > 0".into());
            }
            let p = SensorParams {
                nodes,
                radius,
                side,
                steps,
                seed,
                mobile,
            };
            (generate_sensor_network(&p), out)
        }
        Generate::Automotive { samples, seed, out } => {
            if samples == 0 {
                return Err("need --samples >= 1".into());
            }
            (generate_automotive_trace(samples, seed), out)
        }
    };
    write_trace(&file, &out).map_err(|e| e.to_string())
}

fn domains(ds: Vec<Domain>, default: Vec<DomainKind>) -> Vec<DomainKind> {
    if ds.is_empty() {
        default
    } else {
        ds.into_iter().map(DomainKind::from).collect()
    }
}

fn run_bench(b: Bench, out: &mut dyn Write) -> Result<(), String> {
    let rows = match b {
        Bench::Temporal {
            samples,
            reps,
            seed,
            wbar,
            vbar,
            horizon,
            formulas,
            domains: ds,
        } => {
            let mut spec = TemporalBench::new(samples);
            spec.reps = reps.max(1);
            spec.seed = seed;
            spec.omega_bar = wbar;
            spec.v_bar = vbar;
            spec.horizon = horizon;
            if !formulas.is_empty() {
                spec.formulas = formulas;
            }
            spec.domains = domains(ds, spec.domains);
            bench_temporal(&spec)
        }
        Bench::Spatial {
            nodes,
            steps,
            reps,
            seed,
            formulas,
            domains: ds,
            threads,
        } => {
            if nodes == 0 || steps == 0 {
                return Err("need --nodes >= 1 and --steps >= 1".into());
            }
            let mut spec = SpatialBench::new(nodes, steps);
            spec.reps = reps.max(1);
            spec.seed = seed;
            spec.threads = thread_count(threads)?;
            if !formulas.is_empty() {
                spec.formulas = formulas;
            }
            spec.domains = domains(ds, spec.domains);
            bench_spatial(&spec)
        }
    }
    .map_err(|e| e.to_string())?;
    out.write_all(format_table(&rows).as_bytes()).map_err(|e| e.to_string())
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let rendered = e.render().to_string();
            if informational {
                let _ = out.write_all(rendered.as_bytes());
                return 0;
            }
            let _ = err.write_all(rendered.as_bytes());
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Monitor(a) => run_monitor(a),
        Command::Generate(g) => run_generate(g),
        Command::Bench(b) => run_bench(b, out),
    };
    match outcome {
        Ok(()) => 0,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}
