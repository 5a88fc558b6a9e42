//! Bottom-up evaluation of a closed formula over a whole trace. Every
//! subformula is materialised as a `[location][time]` verdict table.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::domain::{BooleanDomain, DistanceDomain, DomainKind, HopDistance, MinMaxDomain, RealDistance, SignalDomain};
use crate::interval::Interval;
use crate::script::ast::{BinTemporalOp, DistanceExpr, Formula, IntervalExpr, SpatialOp, TemporalOp, Bound};
use crate::script::{instantiate_formula, CheckedScript, FormulaArgs, InstantiateError};
use crate::signal::{MonitorResult, SpatioTemporalSignal, VarSpec, VarType, Verdicts};
use crate::space::{DynamicSpatialModel, ModelError};
use crate::spatial::{self, DistanceMatrix, LengthGraph, LengthSpec, SpatialError};
use crate::temporal::{self, CompiledAtom, EvalError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonitorError {
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
    #[error("formula uses spatial operators but no spatial model was supplied")]
    MissingModel,
    #[error("signal schema does not match the script: {0}")]
    SchemaMismatch(String),
    #[error("spatial model has {model} locations but the signal has {signal}")]
    LocationMismatch { model: usize, signal: usize },
    #[error("spatial model has no edge label `{0}`")]
    UnknownLabel(String),
    #[error("formula node is not closed: {0}")]
    NotClosed(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Spatial(#[from] SpatialError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot build worker pool: {0}")]
    ThreadPool(String),
}

/// Everything needed to monitor one named formula.
#[derive(Debug, Clone)]
pub struct MonitorRequest<'a> {
    pub script: &'a CheckedScript,
    pub formula: &'a str,
    pub args: FormulaArgs,
    pub model: Option<&'a DynamicSpatialModel>,
    pub signal: &'a SpatioTemporalSignal,
    /// Overrides the script's default domain.
    pub domain: Option<DomainKind>,
    /// Worker count; `None` or `Some(0)` uses the global pool.
    pub threads: Option<usize>,
}

impl<'a> MonitorRequest<'a> {
    pub fn new(script: &'a CheckedScript, formula: &'a str, signal: &'a SpatioTemporalSignal) -> Self {
        MonitorRequest {
            script,
            formula,
            args: FormulaArgs::new(),
            model: None,
            signal,
            domain: None,
            threads: None,
        }
    }

    pub fn args(mut self, args: FormulaArgs) -> Self {
        self.args = args;
        self
    }

    pub fn model(mut self, model: &'a DynamicSpatialModel) -> Self {
        self.model = Some(model);
        self
    }

    pub fn domain(mut self, domain: DomainKind) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

/// Counters collected during one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MonitorStats {
    pub graphs_built: usize,
    pub matrices_built: usize,
    pub matrix_hits: usize,
    pub spatial_evaluations: usize,
}

pub fn monitor(req: &MonitorRequest<'_>) -> Result<MonitorResult, MonitorError> {
    monitor_with_stats(req).map(|(r, _)| r)
}

pub fn monitor_with_stats(req: &MonitorRequest<'_>) -> Result<(MonitorResult, MonitorStats), MonitorError> {
    check_schema(&req.script.signals, req.signal)?;
    let formula = instantiate_formula(req.script, req.formula, &req.args)?;
    let domain = req.domain.unwrap_or(req.script.domain);
    let trace = Trace {
        signal: req.signal,
        model: req.model,
        edge_types: req.script.edges.as_deref(),
    };
    match req.threads {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| MonitorError::ThreadPool(e.to_string()))?;
            pool.install(|| monitor_formula(&formula, &trace, domain))
        }
        _ => monitor_formula(&formula, &trace, domain),
    }
}

fn check_schema(declared: &[VarSpec], signal: &SpatioTemporalSignal) -> Result<(), MonitorError> {
    for d in declared {
        match signal.schema().iter().find(|s| s.name == d.name) {
            None => return Err(MonitorError::SchemaMismatch(format!("variable `{}` is missing", d.name))),
            Some(s) if s.ty != d.ty => {
                return Err(MonitorError::SchemaMismatch(format!(
                    "variable `{}` is {} in the trace but {} in the script",
                    d.name, s.ty, d.ty
                )))
            }
            Some(_) => {}
        }
    }
    if let Some(extra) = signal.schema().iter().find(|s| !declared.iter().any(|d| d.name == s.name)) {
        return Err(MonitorError::SchemaMismatch(format!(
            "trace variable `{}` is not declared",
            extra.name
        )));
    }
    Ok(())
}

/// The inputs of a monitoring run.
#[derive(Debug, Clone, Copy)]
pub struct Trace<'a> {
    pub signal: &'a SpatioTemporalSignal,
    pub model: Option<&'a DynamicSpatialModel>,
    /// Declared edge label types; `int` labels measure hop distances.
    pub edge_types: Option<&'a [VarSpec]>,
}

/// Monitors an already closed formula.
pub fn monitor_formula(
    formula: &Formula,
    trace: &Trace<'_>,
    domain: DomainKind,
) -> Result<(MonitorResult, MonitorStats), MonitorError> {
    let cx = Context::new(trace, formula)?;
    let verdicts = match domain {
        DomainKind::Boolean => Verdicts::Boolean(cx.run::<BooleanDomain>(formula)?),
        DomainKind::MinMax => Verdicts::MinMax(cx.run::<MinMaxDomain>(formula)?),
    };
    let result = MonitorResult::new(trace.signal.grid().clone(), verdicts).expect("signal has locations");
    Ok((result, cx.stats()))
}

fn has_spatial(f: &Formula) -> bool {
    f.is_spatial() || f.children().into_iter().any(has_spatial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum SpecKey {
    Unit,
    Label(usize),
    Constant(u64),
}

enum Metric {
    Hop(FrameGraph<HopDistance>),
    Real(FrameGraph<RealDistance>),
}

struct FrameGraph<DD: DistanceDomain> {
    graph: LengthGraph<DD>,
    matrix: OnceLock<DistanceMatrix<DD>>,
}

impl<DD: DistanceDomain> FrameGraph<DD> {
    fn matrix(&self, cx: &Context<'_>) -> &DistanceMatrix<DD> {
        cx.matrix_lookups.fetch_add(1, Ordering::Relaxed);
        self.matrix.get_or_init(|| {
            cx.matrices_built.fetch_add(1, Ordering::Relaxed);
            spatial::shortest_distance_matrix(&self.graph)
        })
    }
}

struct Context<'a> {
    trace: &'a Trace<'a>,
    /// Frame index active at each grid point.
    frame_of: Vec<usize>,
    cache: Mutex<FxHashMap<(usize, SpecKey, bool), Arc<Metric>>>,
    graphs_built: AtomicUsize,
    matrices_built: AtomicUsize,
    matrix_lookups: AtomicUsize,
    spatial_evaluations: AtomicUsize,
}

type Table<V> = Vec<V>;

impl<'a> Context<'a> {
    fn new(trace: &'a Trace<'a>, formula: &Formula) -> Result<Self, MonitorError> {
        let mut frame_of = Vec::new();
        if has_spatial(formula) {
            let model = trace.model.ok_or(MonitorError::MissingModel)?;
            if model.size() != trace.signal.locations() {
                return Err(MonitorError::LocationMismatch {
                    model: model.size(),
                    signal: trace.signal.locations(),
                });
            }
            frame_of = trace
                .signal
                .grid()
                .points()
                .iter()
                .map(|&t| model.frame_index_at(t))
                .collect::<Result<_, _>>()?;
        }
        Ok(Context {
            trace,
            frame_of,
            cache: Mutex::new(FxHashMap::default()),
            graphs_built: AtomicUsize::new(0),
            matrices_built: AtomicUsize::new(0),
            matrix_lookups: AtomicUsize::new(0),
            spatial_evaluations: AtomicUsize::new(0),
        })
    }

    fn stats(&self) -> MonitorStats {
        let built = self.matrices_built.load(Ordering::Relaxed);
        MonitorStats {
            graphs_built: self.graphs_built.load(Ordering::Relaxed),
            matrices_built: built,
            matrix_hits: self.matrix_lookups.load(Ordering::Relaxed) - built,
            spatial_evaluations: self.spatial_evaluations.load(Ordering::Relaxed),
        }
    }

    fn len(&self) -> usize {
        self.trace.signal.grid().len()
    }

    fn locations(&self) -> usize {
        self.trace.signal.locations()
    }

    fn run<S: SignalDomain>(&self, f: &Formula) -> Result<Vec<Vec<S::Value>>, MonitorError> {
        let flat = self.eval::<S>(f)?;
        Ok(flat.chunks(self.len()).map(<[_]>::to_vec).collect())
    }

    fn eval<S: SignalDomain>(&self, f: &Formula) -> Result<Table<S::Value>, MonitorError> {
        let (n, len) = (self.locations(), self.len());
        match f {
            Formula::Atom(a) => {
                let atom = CompiledAtom::new(a, self.trace.signal.schema())?;
                let signal = self.trace.signal;
                let mut out = vec![S::bottom(); n * len];
                out.par_chunks_mut(len).enumerate().try_for_each(|(l, row)| {
                    for (t, slot) in row.iter_mut().enumerate() {
                        *slot = atom.eval::<S>(signal.row(l, t))?;
                    }
                    Ok::<_, EvalError>(())
                })?;
                Ok(out)
            }
            Formula::Not(g) => {
                let mut v = self.eval::<S>(g)?;
                v.iter_mut().for_each(|x| *x = S::negation(*x));
                Ok(v)
            }
            Formula::And(a, b) => self.pointwise::<S>(a, b, S::meet),
            Formula::Or(a, b) => self.pointwise::<S>(a, b, S::join),
            Formula::Implies(a, b) => self.pointwise::<S>(a, b, |x, y| S::join(S::negation(x), y)),
            Formula::Temporal { op, interval, arg } => {
                let i = resolve(interval.as_ref())?;
                let s = self.eval::<S>(arg)?;
                let times = self.trace.signal.grid().points();
                let apply = match op {
                    TemporalOp::Eventually => temporal::eventually::<S>,
                    TemporalOp::Globally => temporal::globally::<S>,
                    TemporalOp::Once => temporal::once::<S>,
                    TemporalOp::Historically => temporal::historically::<S>,
                };
                self.per_location::<S>(|l| apply(times, &s[l * len..(l + 1) * len], &i).expect("rows match the grid"))
            }
            Formula::Binary {
                op,
                interval,
                left,
                right,
            } => {
                let i = resolve(interval.as_ref())?;
                let (s1, s2) = (self.eval::<S>(left)?, self.eval::<S>(right)?);
                let times = self.trace.signal.grid().points();
                let apply = match op {
                    BinTemporalOp::Until => temporal::until::<S>,
                    BinTemporalOp::Since => temporal::since::<S>,
                };
                self.per_location::<S>(|l| {
                    let r = l * len..(l + 1) * len;
                    apply(times, &s1[r.clone()], &s2[r], &i).expect("rows match the grid")
                })
            }
            Formula::Reach {
                distance,
                interval,
                left,
                right,
            } => {
                let i = resolve(interval.as_ref())?;
                let (s1, s2) = (self.eval::<S>(left)?, self.eval::<S>(right)?);
                self.spatial::<S>(distance.as_ref(), |metric, t| {
                    let (c1, c2) = (self.column::<S>(&s1, t), self.column::<S>(&s2, t));
                    match metric {
                        Metric::Hop(m) => spatial::reach::<S, HopDistance>(&m.graph, &c1, &c2, &i),
                        Metric::Real(m) => spatial::reach::<S, RealDistance>(&m.graph, &c1, &c2, &i),
                    }
                })
            }
            Formula::Spatial {
                op,
                distance,
                interval,
                arg,
            } => {
                let i = resolve(interval.as_ref())?;
                let s = self.eval::<S>(arg)?;
                self.spatial::<S>(distance.as_ref(), |metric, t| {
                    let c = self.column::<S>(&s, t);
                    match (op, metric) {
                        (SpatialOp::Somewhere, Metric::Hop(m)) => spatial::somewhere::<S, _>(&m.graph, &c, &i),
                        (SpatialOp::Somewhere, Metric::Real(m)) => spatial::somewhere::<S, _>(&m.graph, &c, &i),
                        (SpatialOp::Everywhere, Metric::Hop(m)) => spatial::everywhere::<S, _>(&m.graph, &c, &i),
                        (SpatialOp::Everywhere, Metric::Real(m)) => spatial::everywhere::<S, _>(&m.graph, &c, &i),
                        (SpatialOp::Escape, Metric::Hop(m)) => {
                            spatial::escape::<S, _>(&m.graph, m.matrix(self), &c, &i)
                        }
                        (SpatialOp::Escape, Metric::Real(m)) => {
                            spatial::escape::<S, _>(&m.graph, m.matrix(self), &c, &i)
                        }
                    }
                })
            }
            Formula::Ref { name, .. } => Err(MonitorError::NotClosed(format!("reference to `{name}`"))),
        }
    }

    fn pointwise<S: SignalDomain>(
        &self,
        a: &Formula,
        b: &Formula,
        op: impl Fn(S::Value, S::Value) -> S::Value,
    ) -> Result<Table<S::Value>, MonitorError> {
        let mut x = self.eval::<S>(a)?;
        let y = self.eval::<S>(b)?;
        x.iter_mut().zip(&y).for_each(|(p, &q)| *p = op(*p, q));
        Ok(x)
    }

    fn per_location<S: SignalDomain>(
        &self,
        f: impl Fn(usize) -> Vec<S::Value> + Sync,
    ) -> Result<Table<S::Value>, MonitorError> {
        let len = self.len();
        let mut out = vec![S::bottom(); self.locations() * len];
        out.par_chunks_mut(len)
            .enumerate()
            .for_each(|(l, row)| row.copy_from_slice(&f(l)));
        Ok(out)
    }

    fn column<S: SignalDomain>(&self, table: &[S::Value], t: usize) -> Vec<S::Value> {
        let len = self.len();
        (0..self.locations()).map(|l| table[l * len + t]).collect()
    }

    fn spatial<S: SignalDomain>(
        &self,
        distance: Option<&DistanceExpr>,
        f: impl Fn(&Metric, usize) -> Result<Vec<S::Value>, SpatialError> + Sync,
    ) -> Result<Table<S::Value>, MonitorError> {
        let (spec, hop) = self.length_spec(distance)?;
        let metrics: Vec<Arc<Metric>> = self
            .frame_of
            .iter()
            .map(|&frame| self.metric(frame, spec, hop))
            .collect::<Result<_, _>>()?;
        let columns: Vec<Vec<S::Value>> = (0..self.len())
            .into_par_iter()
            .map(|t| f(&metrics[t], t))
            .collect::<Result<_, _>>()?;
        self.spatial_evaluations.fetch_add(columns.len(), Ordering::Relaxed);
        let len = self.len();
        let mut out = vec![S::bottom(); self.locations() * len];
        out.par_chunks_mut(len).enumerate().for_each(|(l, row)| {
            for (t, slot) in row.iter_mut().enumerate() {
                *slot = columns[t][l];
            }
        });
        Ok(out)
    }

    /// Length rule and whether it measures hops.
    fn length_spec(&self, distance: Option<&DistanceExpr>) -> Result<(LengthSpec, bool), MonitorError> {
        let model = self.trace.model.ok_or(MonitorError::MissingModel)?;
        Ok(match distance {
            None => (LengthSpec::Unit, false),
            Some(DistanceExpr::Num(x)) => (LengthSpec::Constant(*x), false),
            Some(DistanceExpr::Label(name)) => {
                let index = model
                    .label_names()
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| MonitorError::UnknownLabel(name.clone()))?;
                let hop = self
                    .trace
                    .edge_types
                    .and_then(|decls| decls.iter().find(|d| &d.name == name))
                    .is_some_and(|d| d.ty == VarType::Int);
                (LengthSpec::Label(index), hop)
            }
        })
    }

    fn metric(&self, frame: usize, spec: LengthSpec, hop: bool) -> Result<Arc<Metric>, MonitorError> {
        let key = match spec {
            LengthSpec::Unit => SpecKey::Unit,
            LengthSpec::Label(i) => SpecKey::Label(i),
            LengthSpec::Constant(x) => SpecKey::Constant(x.to_bits()),
        };
        let mut cache = self.cache.lock().expect("cache lock");
        if let Some(m) = cache.get(&(frame, key, hop)) {
            return Ok(Arc::clone(m));
        }
        let model = &self.trace.model.ok_or(MonitorError::MissingModel)?.frames()[frame].1;
        let metric = if hop {
            Metric::Hop(FrameGraph {
                graph: LengthGraph::new(model, spec)?,
                matrix: OnceLock::new(),
            })
        } else {
            Metric::Real(FrameGraph {
                graph: LengthGraph::new(model, spec)?,
                matrix: OnceLock::new(),
            })
        };
        self.graphs_built.fetch_add(1, Ordering::Relaxed);
        let metric = Arc::new(metric);
        cache.insert((frame, key, hop), Arc::clone(&metric));
        Ok(metric)
    }
}

fn resolve(i: Option<&IntervalExpr>) -> Result<Interval, MonitorError> {
    let Some(i) = i else {
        return Ok(Interval::unbounded());
    };
    let bound = |b: &Bound| match b {
        Bound::Num(x) => Ok(*x),
        Bound::Inf => Ok(f64::INFINITY),
        Bound::Param(p) => Err(MonitorError::NotClosed(format!("interval parameter `{p}`"))),
    };
    let (lo, hi) = (bound(&i.lo)?, bound(&i.hi)?);
    Interval::new(lo, hi).map_err(|_| MonitorError::NotClosed(format!("interval [{lo}, {hi}]")))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::script::load_script;
    use crate::space::{Edge, SpatialModel};
    use crate::time::TimeGrid;

    const SENSOR: &str = "
signal { int nodeType; real battery; real temperature; }
space { edges { int hop; real dist; } }
domain boolean;
formula atom = (nodeType == 3);
formula P1 = atom reach(hop)[0, 1] {(nodeType == 1) | (nodeType == 2)};
formula P2 = escape(hop)[5, inf] (battery > 0.5);
formula P4 = (nodeType == 3) reach(hop)[0, 1] {(nodeType == 2) reach(hop)[0, 5] (nodeType == 1)};
formula PT2 = globally P4;
";

    /// coordinator 0, router 1, end devices 2..4; 4 hangs off 3 only.
    fn fixture(steps: usize) -> (DynamicSpatialModel, SpatioTemporalSignal) {
        let labels: Arc<[String]> = vec!["hop".to_string(), "dist".to_string()].into();
        let model = SpatialModel::undirected(
            5,
            labels,
            vec![(0, 1, vec![1.0, 10.0]), (1, 2, vec![1.0, 10.0]), (0, 3, vec![1.0, 10.0]), (3, 4, vec![1.0, 10.0])],
        )
        .unwrap();
        let types = [1.0, 2.0, 3.0, 3.0, 3.0];
        let values = (0..5)
            .map(|l| (0..steps).map(|t| vec![types[l], 1.0 - 0.1 * t as f64, 20.0]).collect())
            .collect();
        let schema = vec![
            VarSpec::new("nodeType", VarType::Int),
            VarSpec::new("battery", VarType::Real),
            VarSpec::new("temperature", VarType::Real),
        ];
        let grid = TimeGrid::uniform(0.0, 1.0, steps).unwrap();
        (
            DynamicSpatialModel::constant(model),
            SpatioTemporalSignal::new(grid, schema, values).unwrap(),
        )
    }

    #[test]
    fn atom_marks_end_devices() {
        let script = load_script(SENSOR).unwrap();
        let (model, signal) = fixture(3);
        let r = monitor(&MonitorRequest::new(&script, "atom", &signal).model(&model)).unwrap();
        let b = r.as_boolean().unwrap();
        for (l, row) in b.iter().enumerate() {
            assert!(row.iter().all(|&v| v == (l >= 2)));
        }
    }

    #[test]
    fn p4_within_p1() {
        let script = load_script(SENSOR).unwrap();
        let (model, signal) = fixture(2);
        let p1 = monitor(&MonitorRequest::new(&script, "P1", &signal).model(&model)).unwrap();
        let p4 = monitor(&MonitorRequest::new(&script, "P4", &signal).model(&model)).unwrap();
        let (p1, p4) = (p1.as_boolean().unwrap(), p4.as_boolean().unwrap());
        for l in 0..5 {
            for t in 0..2 {
                assert!(!p4[l][t] || p1[l][t]);
            }
        }
        // end device 3 reaches the coordinator directly
        assert!(p4[3][0] && p4[2][0] && !p4[4][0]);
    }

    #[test]
    fn globally_single_location() {
        let script = load_script("signal { real x; } domain minmax; formula f = globally (x > 0);").unwrap();
        let grid = TimeGrid::uniform(0.0, 1.0, 3).unwrap();
        let signal = SpatioTemporalSignal::new(
            grid,
            vec![VarSpec::new("x", VarType::Real)],
            vec![vec![vec![1.0], vec![2.0], vec![3.0]]],
        )
        .unwrap();
        let r = monitor(&MonitorRequest::new(&script, "f", &signal)).unwrap();
        assert_eq!(r.as_minmax().unwrap()[0], vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn distance_matrix_cache() {
        let script = load_script(SENSOR).unwrap();
        let (model, signal) = fixture(7);
        let (_, stats) = monitor_with_stats(&MonitorRequest::new(&script, "P2", &signal).model(&model)).unwrap();
        assert_eq!(stats.matrices_built, 1);
        assert_eq!(stats.matrix_hits, 6);

        let frames = vec![(0.0, model.frames()[0].1.clone()), (3.0, model.frames()[0].1.clone())];
        let two = DynamicSpatialModel::new(frames).unwrap();
        let (_, stats) = monitor_with_stats(&MonitorRequest::new(&script, "P2", &signal).model(&two)).unwrap();
        assert_eq!(stats.matrices_built, 2);
        assert_eq!(stats.graphs_built, 2);
    }

    #[test]
    fn globally_p4_is_compositional() {
        let script = load_script(SENSOR).unwrap();
        let (model, signal) = fixture(10);
        let req = MonitorRequest::new(&script, "PT2", &signal).model(&model).domain(DomainKind::MinMax);
        let pt2 = monitor(&req).unwrap();
        let p4 = monitor(&MonitorRequest { formula: "P4", ..req.clone() }).unwrap();
        let times = signal.grid().points();
        for (l, row) in p4.as_minmax().unwrap().iter().enumerate() {
            let expected = temporal::globally::<MinMaxDomain>(times, row, &Interval::unbounded()).unwrap();
            assert_eq!(pt2.as_minmax().unwrap()[l], expected);
        }
    }

    #[test]
    fn errors() {
        let script = load_script(SENSOR).unwrap();
        let (model, signal) = fixture(2);
        assert_eq!(
            monitor(&MonitorRequest::new(&script, "P1", &signal)),
            Err(MonitorError::MissingModel)
        );
        let other = load_script("signal { real x; } formula f = (x > 0);").unwrap();
        assert!(matches!(
            monitor(&MonitorRequest::new(&other, "f", &signal)),
            Err(MonitorError::SchemaMismatch(_))
        ));
        let div = load_script(
            "signal { int nodeType; real battery; real temperature; } formula f = (battery / (nodeType - 1) > 0);",
        )
        .unwrap();
        assert!(matches!(
            monitor(&MonitorRequest::new(&div, "f", &signal).model(&model)),
            Err(MonitorError::Eval(EvalError::DivisionByZero(_)))
        ));
        let small = DynamicSpatialModel::constant(
            SpatialModel::new(2, model.label_names().to_vec(), vec![Edge { source: 0, target: 1, labels: vec![1.0, 1.0] }])
                .unwrap(),
        );
        assert!(matches!(
            monitor(&MonitorRequest::new(&script, "P1", &signal).model(&small)),
            Err(MonitorError::LocationMismatch { .. })
        ));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let script = load_script(SENSOR).unwrap();
        let (model, signal) = fixture(6);
        for f in ["P1", "P2", "P4", "PT2"] {
            let base = MonitorRequest::new(&script, f, &signal).model(&model).domain(DomainKind::MinMax);
            let one = monitor(&base.clone().threads(1)).unwrap();
            let many = monitor(&base.clone().threads(4)).unwrap();
            assert_eq!(one, many);
            assert_eq!(one, monitor(&base).unwrap());
        }
    }
}
