//! Timing harness: generate a trace, monitor one formula repeatedly and
//! report the mean, minimum and maximum wall-clock time.
//!
//! One untimed warm-up run precedes the measured repetitions, which run
//! one after the other.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use moonlight_core::domain::DomainKind;
use moonlight_core::script::{CheckedScript, FormulaArgs};
use moonlight_core::{monitor, MonitorError, MonitorRequest};

use crate::automotive::generate_automotive_trace;
use crate::sensor::{generate_sensor_network, SensorParams};
use crate::trace::Trace;
use crate::{automotive_script, sensor_script};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub reps: usize,
    pub mean: Duration,
    pub min: Duration,
    pub max: Duration,
}

pub fn time_reps<E>(reps: usize, mut run: impl FnMut() -> Result<(), E>) -> Result<Timing, E> {
    assert!(reps >= 1, "at least one repetition");
    run()?;
    let mut total = Duration::ZERO;
    let (mut min, mut max) = (Duration::MAX, Duration::ZERO);
    for _ in 0..reps {
        let start = Instant::now();
        run()?;
        let elapsed = start.elapsed();
        total += elapsed;
        min = min.min(elapsed);
        max = max.max(elapsed);
    }
    Ok(Timing {
        reps,
        mean: total / reps as u32,
        min,
        max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub formula: String,
    pub domain: DomainKind,
    /// Size of the monitored trace, e.g. `N=100 K=1`.
    pub size: String,
    pub timing: Timing,
}

/// Times `formula` of `script` on `trace`.
pub fn time_formula(
    script: &CheckedScript,
    formula: &str,
    args: &FormulaArgs,
    trace: &Trace,
    domain: DomainKind,
    reps: usize,
    threads: Option<usize>,
) -> Result<Timing, MonitorError> {
    let mut req = MonitorRequest::new(script, formula, &trace.signal)
        .args(args.clone())
        .domain(domain);
    if let Some(model) = &trace.model {
        req = req.model(model);
    }
    if let Some(n) = threads {
        req = req.threads(n);
    }
    time_reps(reps, || monitor(&req).map(|_| ()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialBench {
    pub nodes: usize,
    pub steps: usize,
    pub reps: usize,
    pub seed: u64,
    pub formulas: Vec<String>,
    pub domains: Vec<DomainKind>,
    pub threads: Option<usize>,
}

impl SpatialBench {
    pub fn new(nodes: usize, steps: usize) -> Self {
        SpatialBench {
            nodes,
            steps,
            reps: 50,
            seed: 0,
            formulas: ["P2", "P3", "P4", "PT1", "PT2"].map(String::from).to_vec(),
            domains: vec![DomainKind::Boolean, DomainKind::MinMax],
            threads: None,
        }
    }
}

pub fn sensor_trace(nodes: usize, steps: usize, seed: u64) -> Trace {
    generate_sensor_network(&SensorParams::new(nodes, steps, seed))
        .into_trace()
        .expect("generated traces are valid")
}

pub fn bench_spatial(b: &SpatialBench) -> Result<Vec<BenchRow>, MonitorError> {
    let script = sensor_script();
    let trace = sensor_trace(b.nodes, b.steps, b.seed);
    let mut rows = Vec::new();
    for formula in &b.formulas {
        for &domain in &b.domains {
            let timing = time_formula(&script, formula, &FormulaArgs::new(), &trace, domain, b.reps, b.threads)?;
            rows.push(BenchRow {
                formula: formula.clone(),
                domain,
                size: format!("N={} K={}", b.nodes, b.steps),
                timing,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalBench {
    pub samples: usize,
    pub reps: usize,
    pub seed: u64,
    pub omega_bar: f64,
    pub v_bar: f64,
    pub horizon: f64,
    pub formulas: Vec<String>,
    pub domains: Vec<DomainKind>,
}

impl TemporalBench {
    pub fn new(samples: usize) -> Self {
        TemporalBench {
            samples,
            reps: 20,
            seed: 0,
            omega_bar: 4500.0,
            v_bar: 120.0,
            horizon: 4.0,
            formulas: ["R1", "R2", "R3", "R4"].map(String::from).to_vec(),
            domains: vec![DomainKind::MinMax],
        }
    }

    /// The parameters `formula` declares, from this configuration.
    pub fn args(&self, formula: &str) -> FormulaArgs {
        let args = FormulaArgs::new().with("wbar", self.omega_bar);
        match formula {
            "R1" => args,
            "R2" => args.with("vbar", self.v_bar),
            _ => args.with("vbar", self.v_bar).with("T", self.horizon),
        }
    }
}

pub fn bench_temporal(b: &TemporalBench) -> Result<Vec<BenchRow>, MonitorError> {
    let script = automotive_script();
    let trace = generate_automotive_trace(b.samples, b.seed)
        .into_trace()
        .expect("generated traces are valid");
    let mut rows = Vec::new();
    for formula in &b.formulas {
        for &domain in &b.domains {
            let timing = time_formula(&script, formula, &b.args(formula), &trace, domain, b.reps, None)?;
            rows.push(BenchRow {
                formula: formula.clone(),
                domain,
                size: format!("samples={}", b.samples),
                timing,
            });
        }
    }
    Ok(rows)
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<8} {:<8} {:<16} {:>5} {:>12} {:>12} {:>12}\n",
        "formula", "domain", "size", "reps", "mean_s", "min_s", "max_s"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<8} {:<8} {:<16} {:>5} {:>12.6} {:>12.6} {:>12.6}",
            r.formula,
            r.domain.keyword(),
            r.size,
            r.timing.reps,
            r.timing.mean.as_secs_f64(),
            r.timing.min.as_secs_f64(),
            r.timing.max.as_secs_f64()
        );
    }
    out
}
