//! Brute-force reference semantics for small traces.
//!
//! Every operator is computed by enumerating what its definition quantifies
//! over: all pairs of time indices for temporal operators, all walks for
//! spatial ones. Nothing here shares code with the engine's algorithms, so
//! agreement between the two is meaningful.

pub mod random;

use moonlight_core::domain::{BooleanDomain, DomainKind, MinMaxDomain, SignalDomain};
use moonlight_core::engine::Trace;
use moonlight_core::script::ast::{ArithOp, BinTemporalOp, Bound, DistanceExpr, Expr, Formula, IntervalExpr, SpatialOp, TemporalOp};
use moonlight_core::signal::{MonitorResult, Verdicts};
use moonlight_core::space::SpatialModel;
use thiserror::Error;

/// Size limits; inputs beyond them are refused, never truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBudget {
    pub max_locations: usize,
    pub max_time_points: usize,
    /// Longest walk (in edges) enumerated, and the walk cap for unbounded
    /// spatial intervals.
    pub max_path_len: usize,
    /// Largest finite upper bound accepted on a spatial interval.
    pub max_distance: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_locations: 6,
            max_time_points: 8,
            max_path_len: 10,
            max_distance: 16.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("edge {from}->{to} has length {length}; enumeration needs strictly positive lengths")]
    NonPositiveLength { from: usize, to: usize, length: f64 },
    #[error("formula is spatial but the trace has no spatial model")]
    MissingModel,
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("formula is not closed: {0}")]
    NotClosed(String),
}

/// Reorders enumeration: receives each list of successors or candidate
/// time indices before it is visited.
pub type Permute<'a> = &'a dyn Fn(&mut Vec<usize>);

pub fn oracle_monitor(
    formula: &Formula,
    trace: &Trace<'_>,
    domain: DomainKind,
    budget: &OracleBudget,
) -> Result<MonitorResult, OracleError> {
    oracle_monitor_permuted(formula, trace, domain, budget, &|_| {})
}

pub fn oracle_monitor_permuted(
    formula: &Formula,
    trace: &Trace<'_>,
    domain: DomainKind,
    budget: &OracleBudget,
    permute: Permute<'_>,
) -> Result<MonitorResult, OracleError> {
    let signal = trace.signal;
    if signal.locations() > budget.max_locations {
        return Err(OracleError::Budget(format!(
            "{} locations > {}",
            signal.locations(),
            budget.max_locations
        )));
    }
    if signal.grid().len() > budget.max_time_points {
        return Err(OracleError::Budget(format!(
            "{} time points > {}",
            signal.grid().len(),
            budget.max_time_points
        )));
    }
    let o = Oracle {
        trace,
        budget,
        permute,
    };
    let verdicts = match domain {
        DomainKind::Boolean => Verdicts::Boolean(o.eval::<BooleanDomain>(formula)?),
        DomainKind::MinMax => Verdicts::MinMax(o.eval::<MinMaxDomain>(formula)?),
    };
    Ok(MonitorResult::new(signal.grid().clone(), verdicts).expect("trace has locations"))
}

struct Oracle<'a> {
    trace: &'a Trace<'a>,
    budget: &'a OracleBudget,
    permute: Permute<'a>,
}

type Table<V> = Vec<Vec<V>>;

fn interval(i: Option<&IntervalExpr>) -> Result<(f64, f64), OracleError> {
    let Some(i) = i else {
        return Ok((0.0, f64::INFINITY));
    };
    let b = |b: &Bound| match b {
        Bound::Num(x) => Ok(*x),
        Bound::Inf => Ok(f64::INFINITY),
        Bound::Param(p) => Err(OracleError::NotClosed(p.clone())),
    };
    Ok((b(&i.lo)?, b(&i.hi)?))
}

fn inside(d: f64, (lo, hi): (f64, f64)) -> bool {
    lo <= d && d <= hi
}

impl Oracle<'_> {
    fn indices(&self, range: impl Iterator<Item = usize>) -> Vec<usize> {
        let mut v: Vec<usize> = range.collect();
        (self.permute)(&mut v);
        v
    }

    fn expr(&self, e: &Expr, row: &[f64]) -> Result<f64, OracleError> {
        Ok(match e {
            Expr::Num(x) => *x,
            Expr::Var(name) => {
                let i = self
                    .trace
                    .signal
                    .variable_index(name)
                    .ok_or_else(|| OracleError::Unknown(name.clone()))?;
                row[i]
            }
            Expr::Neg(a) => -self.expr(a, row)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.expr(a, row)?, self.expr(b, row)?);
                match op {
                    ArithOp::Add => x + y,
                    ArithOp::Sub => x - y,
                    ArithOp::Mul => x * y,
                    ArithOp::Div if y == 0.0 => return Err(OracleError::DivisionByZero),
                    ArithOp::Div => x / y,
                }
            }
        })
    }

    fn eval<S: SignalDomain>(&self, f: &Formula) -> Result<Table<S::Value>, OracleError> {
        let signal = self.trace.signal;
        let (n, len) = (signal.locations(), signal.grid().len());
        let times = signal.grid().points();
        let pointwise = |a: Table<S::Value>, b: Table<S::Value>, op: &dyn Fn(S::Value, S::Value) -> S::Value| {
            a.iter()
                .zip(&b)
                .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| op(p, q)).collect())
                .collect::<Table<S::Value>>()
        };
        Ok(match f {
            Formula::Atom(a) => {
                let mut out = Vec::with_capacity(n);
                for l in 0..n {
                    let mut row = Vec::with_capacity(len);
                    for t in 0..len {
                        let r = signal.row(l, t);
                        row.push(S::compare(a.op, self.expr(&a.lhs, r)?, self.expr(&a.rhs, r)?));
                    }
                    out.push(row);
                }
                out
            }
            Formula::Not(g) => self
                .eval::<S>(g)?
                .into_iter()
                .map(|r| r.into_iter().map(S::negation).collect())
                .collect(),
            Formula::And(a, b) => pointwise(self.eval::<S>(a)?, self.eval::<S>(b)?, &S::meet),
            Formula::Or(a, b) => pointwise(self.eval::<S>(a)?, self.eval::<S>(b)?, &S::join),
            Formula::Implies(a, b) => {
                pointwise(self.eval::<S>(a)?, self.eval::<S>(b)?, &|x, y| S::join(S::negation(x), y))
            }
            Formula::Temporal { op, interval: i, arg } => {
                let i = interval(i.as_ref())?;
                let s = self.eval::<S>(arg)?;
                let past = matches!(op, TemporalOp::Once | TemporalOp::Historically);
                let universal = matches!(op, TemporalOp::Globally | TemporalOp::Historically);
                let mut out = vec![vec![S::bottom(); len]; n];
                for l in 0..n {
                    for t in 0..len {
                        let mut acc = if universal { S::top() } else { S::bottom() };
                        for j in self.indices(0..len) {
                            let d = if past { times[t] - times[j] } else { times[j] - times[t] };
                            let in_range = if past { j <= t } else { j >= t };
                            if in_range && inside(d, i) {
                                acc = if universal { S::meet(acc, s[l][j]) } else { S::join(acc, s[l][j]) };
                            }
                        }
                        out[l][t] = acc;
                    }
                }
                out
            }
            Formula::Binary {
                op,
                interval: i,
                left,
                right,
            } => {
                let i = interval(i.as_ref())?;
                let (s1, s2) = (self.eval::<S>(left)?, self.eval::<S>(right)?);
                let mut out = vec![vec![S::bottom(); len]; n];
                for l in 0..n {
                    for t in 0..len {
                        let mut acc = S::bottom();
                        for j in self.indices(0..len) {
                            let (ok, between): (bool, Vec<usize>) = match op {
                                BinTemporalOp::Until => (j >= t && inside(times[j] - times[t], i), (t..j).collect()),
                                BinTemporalOp::Since => {
                                    (j <= t && inside(times[t] - times[j], i), (j + 1..=t).collect())
                                }
                            };
                            if ok {
                                let guard = between.iter().fold(S::top(), |a, &k| S::meet(a, s1[l][k]));
                                acc = S::join(acc, S::meet(s2[l][j], guard));
                            }
                        }
                        out[l][t] = acc;
                    }
                }
                out
            }
            Formula::Reach {
                distance,
                interval: i,
                left,
                right,
            } => {
                let i = interval(i.as_ref())?;
                let (s1, s2) = (self.eval::<S>(left)?, self.eval::<S>(right)?);
                let mut out = vec![vec![S::bottom(); len]; n];
                for t in 0..len {
                    let g = self.graph(t, distance.as_ref())?;
                    let cap = self.walk_cap(&g, i)?;
                    for (l, row) in out.iter_mut().enumerate() {
                        row[t] = self.reach_at::<S>(&g, l, cap, i, &|x| s1[x][t], &|x| s2[x][t]);
                    }
                }
                out
            }
            Formula::Spatial {
                op,
                distance,
                interval: i,
                arg,
            } => {
                let i = interval(i.as_ref())?;
                let s = self.eval::<S>(arg)?;
                let mut out = vec![vec![S::bottom(); len]; n];
                for t in 0..len {
                    let g = self.graph(t, distance.as_ref())?;
                    for (l, row) in out.iter_mut().enumerate() {
                        row[t] = match op {
                            SpatialOp::Somewhere => {
                                let cap = self.walk_cap(&g, i)?;
                                self.reach_at::<S>(&g, l, cap, i, &|_| S::top(), &|x| s[x][t])
                            }
                            SpatialOp::Everywhere => {
                                let cap = self.walk_cap(&g, i)?;
                                // all walk endpoints within the interval satisfy `s`
                                let mut acc = S::top();
                                self.walks(&g, l, cap, i.1, &mut |walk, d| {
                                    if inside(d, i) {
                                        acc = S::meet(acc, s[*walk.last().unwrap()][t]);
                                    }
                                });
                                acc
                            }
                            SpatialOp::Escape => {
                                let dist = self.simple_path_distances(&g, l);
                                let mut acc = S::bottom();
                                self.walks(&g, l, self.budget.max_path_len, f64::INFINITY, &mut |walk, _| {
                                    let end = *walk.last().unwrap();
                                    if inside(dist[end], i) {
                                        let m = walk.iter().fold(S::top(), |a, &x| S::meet(a, s[x][t]));
                                        acc = S::join(acc, m);
                                    }
                                });
                                acc
                            }
                        };
                    }
                }
                out
            }
            Formula::Ref { name, .. } => return Err(OracleError::NotClosed(name.clone())),
        })
    }

    /// Successor lists with forward lengths for the frame active at grid index `t`.
    fn graph(&self, t: usize, distance: Option<&DistanceExpr>) -> Result<Vec<Vec<(usize, f64)>>, OracleError> {
        let model = self.trace.model.ok_or(OracleError::MissingModel)?;
        let time = self.trace.signal.grid().points()[t];
        let frame: &SpatialModel = model
            .graph_at(time)
            .map_err(|e| OracleError::Unknown(e.to_string()))?;
        let label = match distance {
            Some(DistanceExpr::Label(name)) => Some(
                frame
                    .label_index(name)
                    .ok_or_else(|| OracleError::Unknown(name.clone()))?,
            ),
            _ => None,
        };
        let mut succ = vec![Vec::new(); frame.size()];
        for e in frame.edges() {
            let w = match (distance, label) {
                (None, _) => 1.0,
                (Some(DistanceExpr::Num(x)), _) => *x,
                (_, Some(k)) => e.labels[k],
                (_, None) => unreachable!(),
            };
            if w.is_nan() || w <= 0.0 {
                return Err(OracleError::NonPositiveLength {
                    from: e.source,
                    to: e.target,
                    length: w,
                });
            }
            succ[e.source].push((e.target, w));
        }
        Ok(succ)
    }

    /// Walk length cap for an interval; bounded intervals must fit the budget.
    fn walk_cap(&self, g: &[Vec<(usize, f64)>], (_, hi): (f64, f64)) -> Result<usize, OracleError> {
        if hi.is_infinite() {
            return Ok(self.budget.max_path_len);
        }
        if hi > self.budget.max_distance {
            return Err(OracleError::Budget(format!(
                "distance bound {hi} > {}",
                self.budget.max_distance
            )));
        }
        let min_w = g
            .iter()
            .flatten()
            .map(|&(_, w)| w)
            .fold(f64::INFINITY, f64::min);
        let longest = (hi / min_w).floor();
        if longest > self.budget.max_path_len as f64 {
            return Err(OracleError::Budget(format!(
                "walks up to {longest} edges > {}",
                self.budget.max_path_len
            )));
        }
        Ok(self.budget.max_path_len)
    }

    /// Calls `visit(walk, length)` for every walk from `start` with at most
    /// `cap` edges and accumulated length at most `hi`, the trivial walk
    /// included.
    fn walks(&self, g: &[Vec<(usize, f64)>], start: usize, cap: usize, hi: f64, visit: &mut dyn FnMut(&[usize], f64)) {
        let mut walk = vec![start];
        self.extend(g, &mut walk, 0.0, cap, hi, visit);
    }

    fn extend(
        &self,
        g: &[Vec<(usize, f64)>],
        walk: &mut Vec<usize>,
        d: f64,
        cap: usize,
        hi: f64,
        visit: &mut dyn FnMut(&[usize], f64),
    ) {
        visit(walk, d);
        if walk.len() > cap {
            return;
        }
        let x = *walk.last().unwrap();
        for k in self.indices(0..g[x].len()) {
            let (y, w) = g[x][k];
            let nd = d + w;
            if nd <= hi {
                walk.push(y);
                self.extend(g, walk, nd, cap, hi, visit);
                walk.pop();
            }
        }
    }

    fn reach_at<S: SignalDomain>(
        &self,
        g: &[Vec<(usize, f64)>],
        l: usize,
        cap: usize,
        i: (f64, f64),
        s1: &dyn Fn(usize) -> S::Value,
        s2: &dyn Fn(usize) -> S::Value,
    ) -> S::Value {
        let mut acc = S::bottom();
        self.walks(g, l, cap, i.1, &mut |walk, d| {
            if inside(d, i) {
                let k = walk.len() - 1;
                let guard = walk[..k].iter().fold(S::top(), |a, &x| S::meet(a, s1(x)));
                acc = S::join(acc, S::meet(s2(walk[k]), guard));
            }
        });
        acc
    }

    /// Shortest distances from `l`, minimised over every simple path.
    fn simple_path_distances(&self, g: &[Vec<(usize, f64)>], l: usize) -> Vec<f64> {
        let mut best = vec![f64::INFINITY; g.len()];
        let mut on_path = vec![false; g.len()];
        fn dfs(g: &[Vec<(usize, f64)>], x: usize, d: f64, best: &mut [f64], on_path: &mut [bool]) {
            if d < best[x] {
                best[x] = d;
            }
            on_path[x] = true;
            for &(y, w) in &g[x] {
                if !on_path[y] {
                    dfs(g, y, d + w, best, on_path);
                }
            }
            on_path[x] = false;
        }
        dfs(g, l, 0.0, &mut best, &mut on_path);
        best
    }
}
