//! Atomic predicates and temporal operators over one location's verdict
//! sequence. Signals are step-wise and only sample points are evaluated:
//! index `j` lies in the window of index `t` when `times[j] - times[t]`
//! falls in the interval.

use std::collections::VecDeque;

use thiserror::Error;

use crate::domain::SignalDomain;
use crate::interval::Interval;
use crate::script::ast::{ArithOp, Atom, CmpOp, Expr};
use crate::signal::VarSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unknown signal variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("signal lengths differ: grid has {grid} points, operands have {left} and {right}")]
pub struct GridMismatch {
    pub grid: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone)]
enum Compiled {
    Num(f64),
    Var(usize),
    Neg(Box<Compiled>),
    Bin(ArithOp, Box<Compiled>, Box<Compiled>),
    /// Keeps the source text for diagnostics.
    Div(Box<Compiled>, Box<Compiled>, Box<str>),
}

impl Compiled {
    fn new(e: &Expr, schema: &[VarSpec]) -> Result<Self, EvalError> {
        Ok(match e {
            Expr::Num(x) => Compiled::Num(*x),
            Expr::Var(v) => Compiled::Var(
                schema
                    .iter()
                    .position(|s| &s.name == v)
                    .ok_or_else(|| EvalError::UnknownVariable(v.clone()))?,
            ),
            Expr::Neg(a) => Compiled::Neg(Box::new(Compiled::new(a, schema)?)),
            Expr::Bin(ArithOp::Div, a, b) => Compiled::Div(
                Box::new(Compiled::new(a, schema)?),
                Box::new(Compiled::new(b, schema)?),
                e.to_string().into(),
            ),
            Expr::Bin(op, a, b) => Compiled::Bin(
                *op,
                Box::new(Compiled::new(a, schema)?),
                Box::new(Compiled::new(b, schema)?),
            ),
        })
    }

    fn eval(&self, row: &[f64]) -> Result<f64, EvalError> {
        Ok(match self {
            Compiled::Num(x) => *x,
            Compiled::Var(i) => row[*i],
            Compiled::Neg(a) => -a.eval(row)?,
            Compiled::Bin(op, a, b) => {
                let (x, y) = (a.eval(row)?, b.eval(row)?);
                match op {
                    ArithOp::Add => x + y,
                    ArithOp::Sub => x - y,
                    ArithOp::Mul => x * y,
                    ArithOp::Div => x / y,
                }
            }
            Compiled::Div(a, b, text) => {
                let (x, y) = (a.eval(row)?, b.eval(row)?);
                if y == 0.0 {
                    return Err(EvalError::DivisionByZero(text.to_string()));
                }
                x / y
            }
        })
    }
}

/// An atomic comparison with variables resolved to column indices.
#[derive(Debug, Clone)]
pub struct CompiledAtom {
    op: CmpOp,
    lhs: Compiled,
    rhs: Compiled,
}

impl CompiledAtom {
    pub fn new(atom: &Atom, schema: &[VarSpec]) -> Result<Self, EvalError> {
        Ok(CompiledAtom {
            op: atom.op,
            lhs: Compiled::new(&atom.lhs, schema)?,
            rhs: Compiled::new(&atom.rhs, schema)?,
        })
    }

    pub fn eval<D: SignalDomain>(&self, row: &[f64]) -> Result<D::Value, EvalError> {
        Ok(D::compare(self.op, self.lhs.eval(row)?, self.rhs.eval(row)?))
    }
}

/// Interprets `atom` on one record whose columns follow `schema`.
pub fn eval_atomic<D: SignalDomain>(
    atom: &Atom,
    schema: &[VarSpec],
    row: &[f64],
) -> Result<D::Value, EvalError> {
    CompiledAtom::new(atom, schema)?.eval::<D>(row)
}

fn check(times: &[f64], a: usize, b: usize) -> Result<(), GridMismatch> {
    if a == times.len() && b == times.len() {
        Ok(())
    } else {
        Err(GridMismatch {
            grid: times.len(),
            left: a,
            right: b,
        })
    }
}

/// Aggregates `vals` over the window of every index. `keep(a, b)` says `a`
/// makes `b` redundant, so the deque front always holds the aggregate.
fn sliding<V: Copy>(times: &[f64], vals: &[V], i: &Interval, keep: impl Fn(V, V) -> bool, empty: V) -> Vec<V> {
    let n = times.len();
    let mut out = Vec::with_capacity(n);
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for t in 0..n {
        while next < n && times[next] - times[t] <= i.hi() {
            while dq.back().is_some_and(|&b| keep(vals[next], vals[b])) {
                dq.pop_back();
            }
            dq.push_back(next);
            next += 1;
        }
        while dq.front().is_some_and(|&f| times[f] - times[t] < i.lo()) {
            dq.pop_front();
        }
        out.push(dq.front().map_or(empty, |&f| vals[f]));
    }
    out
}

fn mirror_times(times: &[f64]) -> Vec<f64> {
    times.iter().rev().map(|t| -t).collect()
}

fn mirror<V: Copy>(vals: &[V]) -> Vec<V> {
    vals.iter().rev().copied().collect()
}

pub fn eventually<D: SignalDomain>(times: &[f64], s: &[D::Value], i: &Interval) -> Result<Vec<D::Value>, GridMismatch> {
    check(times, s.len(), s.len())?;
    Ok(sliding(times, s, i, D::geq, D::bottom()))
}

pub fn globally<D: SignalDomain>(times: &[f64], s: &[D::Value], i: &Interval) -> Result<Vec<D::Value>, GridMismatch> {
    check(times, s.len(), s.len())?;
    Ok(sliding(times, s, i, |a, b| D::geq(b, a), D::top()))
}

pub fn once<D: SignalDomain>(times: &[f64], s: &[D::Value], i: &Interval) -> Result<Vec<D::Value>, GridMismatch> {
    let mut out = eventually::<D>(&mirror_times(times), &mirror(s), i)?;
    out.reverse();
    Ok(out)
}

pub fn historically<D: SignalDomain>(times: &[f64], s: &[D::Value], i: &Interval) -> Result<Vec<D::Value>, GridMismatch> {
    let mut out = globally::<D>(&mirror_times(times), &mirror(s), i)?;
    out.reverse();
    Ok(out)
}

/// `s1 until[i] s2`: the join over window indices `t'` of
/// `meet(s2[t'], meet of s1 over [t, t'))`.
pub fn until<D: SignalDomain>(
    times: &[f64],
    s1: &[D::Value],
    s2: &[D::Value],
    i: &Interval,
) -> Result<Vec<D::Value>, GridMismatch> {
    check(times, s1.len(), s2.len())?;
    let n = times.len();
    if i.is_bounded() {
        return Ok(bounded_until::<D>(times, s1, s2, i));
    }
    // u[t] = join(s2[t], meet(s1[t], u[t + 1]))
    let mut u = vec![D::bottom(); n];
    let mut acc = D::bottom();
    for t in (0..n).rev() {
        acc = D::join(s2[t], D::meet(s1[t], acc));
        u[t] = acc;
    }
    if i.lo() == 0.0 {
        return Ok(u);
    }
    // distributivity: the result is meet(s1 over [t, j0), u[j0]) where j0
    // is the first index at least `lo` ahead
    let mut out = Vec::with_capacity(n);
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut j0 = 0;
    for t in 0..n {
        while j0 < n && times[j0] - times[t] < i.lo() {
            while dq.back().is_some_and(|&b| D::geq(s1[b], s1[j0])) {
                dq.pop_back();
            }
            dq.push_back(j0);
            j0 += 1;
        }
        while dq.front().is_some_and(|&f| f < t) {
            dq.pop_front();
        }
        if j0 == n {
            out.push(D::bottom());
        } else {
            let prefix = dq.front().map_or(D::top(), |&f| s1[f]);
            out.push(D::meet(prefix, u[j0]));
        }
    }
    Ok(out)
}

fn bounded_until<D: SignalDomain>(times: &[f64], s1: &[D::Value], s2: &[D::Value], i: &Interval) -> Vec<D::Value> {
    let n = times.len();
    (0..n)
        .map(|t| {
            let mut best = D::bottom();
            let mut prefix = D::top();
            for j in t..n {
                let d = times[j] - times[t];
                if d > i.hi() || prefix == D::bottom() || best == D::top() {
                    break;
                }
                if d >= i.lo() {
                    best = D::join(best, D::meet(s2[j], prefix));
                }
                prefix = D::meet(prefix, s1[j]);
            }
            best
        })
        .collect()
}

/// `s1 since[i] s2`, the time mirror of [`until`].
pub fn since<D: SignalDomain>(
    times: &[f64],
    s1: &[D::Value],
    s2: &[D::Value],
    i: &Interval,
) -> Result<Vec<D::Value>, GridMismatch> {
    check(times, s1.len(), s2.len())?;
    let mut out = until::<D>(&mirror_times(times), &mirror(s1), &mirror(s2), i)?;
    out.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::domain::{BooleanDomain as B, MinMaxDomain as M};
    use crate::script::parse_formula;
    use crate::script::Formula;
    use crate::signal::VarType;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn enum_until<D: SignalDomain>(times: &[f64], s1: &[D::Value], s2: &[D::Value], i: &Interval) -> Vec<D::Value> {
        (0..times.len())
            .map(|t| {
                let mut best = D::bottom();
                for j in t..times.len() {
                    if i.contains(times[j] - times[t]) {
                        let prefix = s1[t..j].iter().fold(D::top(), |a, &b| D::meet(a, b));
                        best = D::join(best, D::meet(s2[j], prefix));
                    }
                }
                best
            })
            .collect()
    }

    fn enum_since<D: SignalDomain>(times: &[f64], s1: &[D::Value], s2: &[D::Value], i: &Interval) -> Vec<D::Value> {
        (0..times.len())
            .map(|t| {
                let mut best = D::bottom();
                for j in 0..=t {
                    if i.contains(times[t] - times[j]) {
                        let suffix = s1[j + 1..=t].iter().fold(D::top(), |a, &b| D::meet(a, b));
                        best = D::join(best, D::meet(s2[j], suffix));
                    }
                }
                best
            })
            .collect()
    }

    fn atom(src: &str) -> Atom {
        match parse_formula(src).unwrap() {
            Formula::Atom(a) => a,
            f => panic!("not an atom: {f}"),
        }
    }

    #[test]
    fn atomic_semantics() {
        let schema = [VarSpec::new("battery", VarType::Real), VarSpec::new("nodeType", VarType::Int)];
        let v = eval_atomic::<M>(&atom("(battery > 0.5)"), &schema, &[0.7, 3.0]).unwrap();
        assert!((v - 0.2).abs() < 1e-12);
        assert!(eval_atomic::<B>(&atom("(battery > 0.5)"), &schema, &[0.7, 3.0]).unwrap());
        assert!(eval_atomic::<B>(&atom("(nodeType == 3)"), &schema, &[0.7, 3.0]).unwrap());
        assert_eq!(eval_atomic::<M>(&atom("(nodeType != 3)"), &schema, &[0.7, 3.0]).unwrap(), f64::NEG_INFINITY);
        assert_eq!(eval_atomic::<M>(&atom("(battery < 1)"), &schema, &[0.25, 3.0]).unwrap(), 0.75);
        assert_eq!(eval_atomic::<M>(&atom("(battery > 0)"), &schema, &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(
            eval_atomic::<M>(&atom("(battery / (nodeType - 3) > 0)"), &schema, &[1.0, 3.0]),
            Err(EvalError::DivisionByZero("battery / (nodeType - 3)".into()))
        );
        assert_eq!(
            eval_atomic::<B>(&atom("(pressure > 0)"), &schema, &[1.0, 3.0]),
            Err(EvalError::UnknownVariable("pressure".into()))
        );
    }

    #[test]
    fn until_fixtures() {
        let t = [0.0, 1.0, 2.0];
        let s1 = [true, true, false];
        let s2 = [false, false, true];
        let u = until::<B>(&t, &s1, &s2, &Interval::unbounded()).unwrap();
        assert_eq!(u, enum_until::<B>(&t, &s1, &s2, &Interval::unbounded()));
        assert_eq!(u, vec![true, true, true]);
        let m = until::<M>(&t, &[5.0; 3], &[1.0, 2.0, 3.0], &iv(0.0, 1.0)).unwrap();
        assert_eq!(m[0], 2.0);
        assert_eq!(m, enum_until::<M>(&t, &[5.0; 3], &[1.0, 2.0, 3.0], &iv(0.0, 1.0)));
    }

    #[test]
    fn since_fixtures() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let s2 = [true, false, false, false];
        assert_eq!(since::<B>(&t, &[true; 4], &s2, &Interval::unbounded()).unwrap(), vec![true; 4]);
        assert_eq!(since::<B>(&t, &[true; 4], &[true; 4], &iv(5.0, 6.0)).unwrap(), vec![false; 4]);
    }

    #[test]
    fn derived_fixtures() {
        let t = [0.0, 1.0, 2.0];
        assert_eq!(globally::<M>(&t, &[5.0, 3.0, 4.0], &iv(0.0, 2.0)).unwrap()[0], 3.0);
        assert!(eventually::<B>(&t, &[false, false, true], &iv(0.0, 2.0)).unwrap()[0]);
        assert_eq!(globally::<M>(&t, &[1.0, 2.0, 3.0], &iv(5.0, 6.0)).unwrap(), vec![f64::INFINITY; 3]);
        assert_eq!(globally::<M>(&t, &[1.0, 2.0, 3.0], &Interval::unbounded()).unwrap()[0], 1.0);
    }

    #[test]
    fn grid_mismatch() {
        assert!(until::<B>(&[0.0, 1.0], &[true], &[true, false], &Interval::unbounded()).is_err());
        assert!(eventually::<B>(&[0.0], &[true, true], &Interval::unbounded()).is_err());
    }

    fn times_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1u32..4, 1..12).prop_map(|steps| {
            let mut t = 0.0;
            steps
                .into_iter()
                .map(|s| {
                    let now = t;
                    t += s as f64 * 0.5;
                    now
                })
                .collect()
        })
    }

    fn interval_strategy() -> impl Strategy<Value = Interval> {
        (0u32..6, prop::option::of(0u32..8)).prop_map(|(lo, w)| match w {
            Some(w) => iv(lo as f64 * 0.5, (lo + w) as f64 * 0.5),
            None => Interval::new(lo as f64 * 0.5, f64::INFINITY).unwrap(),
        })
    }

    fn value() -> impl Strategy<Value = f64> {
        prop_oneof![(-4i32..5).prop_map(f64::from), Just(f64::INFINITY), Just(f64::NEG_INFINITY)]
    }

    proptest! {
        #[test]
        fn until_and_since_match_enumeration(
            times in times_strategy(),
            i in interval_strategy(),
            raw in prop::collection::vec((value(), value()), 12),
        ) {
            let n = times.len();
            let s1: Vec<f64> = raw[..n].iter().map(|p| p.0).collect();
            let s2: Vec<f64> = raw[..n].iter().map(|p| p.1).collect();
            prop_assert_eq!(until::<M>(&times, &s1, &s2, &i).unwrap(), enum_until::<M>(&times, &s1, &s2, &i));
            prop_assert_eq!(since::<M>(&times, &s1, &s2, &i).unwrap(), enum_since::<M>(&times, &s1, &s2, &i));
            let b1: Vec<bool> = s1.iter().map(|&x| x > 0.0).collect();
            let b2: Vec<bool> = s2.iter().map(|&x| x > 0.0).collect();
            prop_assert_eq!(until::<B>(&times, &b1, &b2, &i).unwrap(), enum_until::<B>(&times, &b1, &b2, &i));
            prop_assert_eq!(since::<B>(&times, &b1, &b2, &i).unwrap(), enum_since::<B>(&times, &b1, &b2, &i));
        }

        #[test]
        fn derived_operators_are_exact(
            times in times_strategy(),
            i in interval_strategy(),
            raw in prop::collection::vec(value(), 12),
        ) {
            let s = &raw[..times.len()];
            let top = vec![f64::INFINITY; s.len()];
            let neg: Vec<f64> = s.iter().map(|x| -x).collect();
            let negate = |v: Vec<f64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
            prop_assert_eq!(eventually::<M>(&times, s, &i).unwrap(), until::<M>(&times, &top, s, &i).unwrap());
            prop_assert_eq!(globally::<M>(&times, s, &i).unwrap(), negate(eventually::<M>(&times, &neg, &i).unwrap()));
            prop_assert_eq!(once::<M>(&times, s, &i).unwrap(), since::<M>(&times, &top, s, &i).unwrap());
            prop_assert_eq!(historically::<M>(&times, s, &i).unwrap(), negate(once::<M>(&times, &neg, &i).unwrap()));
        }

        #[test]
        fn time_shift_invariance(
            times in times_strategy(),
            i in interval_strategy(),
            raw in prop::collection::vec((value(), value()), 12),
            shift in 0u32..100,
        ) {
            let n = times.len();
            let s1: Vec<f64> = raw[..n].iter().map(|p| p.0).collect();
            let s2: Vec<f64> = raw[..n].iter().map(|p| p.1).collect();
            let shifted: Vec<f64> = times.iter().map(|t| t + shift as f64).collect();
            prop_assert_eq!(until::<M>(&times, &s1, &s2, &i).unwrap(), until::<M>(&shifted, &s1, &s2, &i).unwrap());
            prop_assert_eq!(since::<M>(&times, &s1, &s2, &i).unwrap(), since::<M>(&shifted, &s1, &s2, &i).unwrap());
        }
    }
}
