use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::*;
use super::check::CheckedScript;
use crate::signal::{VarSpec, VarType};

/// Values for a formula's parameters, by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FormulaArgs(BTreeMap<String, f64>);

impl FormulaArgs {
    pub fn new() -> Self {
        FormulaArgs::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.0.insert(name.into(), value);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, value: f64) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for FormulaArgs {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        FormulaArgs(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstantiateError {
    #[error("unknown formula `{0}`")]
    UnknownFormula(String),
    #[error("formula `{formula}`: missing argument for parameter `{param}`")]
    MissingArgument { formula: String, param: String },
    #[error("formula `{formula}` has no parameter `{param}`")]
    UnexpectedArgument { formula: String, param: String },
    #[error("formula `{formula}`: parameter `{param}` is {ty} but got {value}")]
    IllTyped {
        formula: String,
        param: String,
        ty: VarType,
        value: f64,
    },
    #[error("formula `{formula}`: division by zero in argument `{expr}`")]
    DivisionByZero { formula: String, expr: String },
    #[error("formula `{formula}`: invalid interval [{lo}, {hi}] after instantiation")]
    InvalidInterval { formula: String, lo: f64, hi: f64 },
}

/// Returns the closed body of `name`: parameters replaced by their values
/// and formula references inlined.
pub fn instantiate_formula(
    script: &CheckedScript,
    name: &str,
    args: &FormulaArgs,
) -> Result<Formula, InstantiateError> {
    let def = script
        .formula(name)
        .ok_or_else(|| InstantiateError::UnknownFormula(name.to_string()))?;
    for (param, _) in args.iter() {
        if !def.params.iter().any(|p| p.name == param) {
            return Err(InstantiateError::UnexpectedArgument {
                formula: name.to_string(),
                param: param.to_string(),
            });
        }
    }
    let mut values = Vec::with_capacity(def.params.len());
    for p in &def.params {
        let value = args.get(&p.name).ok_or_else(|| InstantiateError::MissingArgument {
            formula: name.to_string(),
            param: p.name.clone(),
        })?;
        values.push(value);
    }
    expand(script, def, &values)
}

fn bind(def: &FormulaDef, values: &[f64]) -> Result<BTreeMap<String, f64>, InstantiateError> {
    def.params
        .iter()
        .zip(values)
        .map(|(VarSpec { name, ty }, &value)| {
            if ty.admits(value) && value.is_finite() {
                Ok((name.clone(), value))
            } else {
                Err(InstantiateError::IllTyped {
                    formula: def.name.clone(),
                    param: name.clone(),
                    ty: *ty,
                    value,
                })
            }
        })
        .collect()
}

fn expand(script: &CheckedScript, def: &FormulaDef, values: &[f64]) -> Result<Formula, InstantiateError> {
    let env = bind(def, values)?;
    Subst {
        script,
        def,
        env: &env,
    }
    .formula(&def.body)
}

struct Subst<'a> {
    script: &'a CheckedScript,
    def: &'a FormulaDef,
    env: &'a BTreeMap<String, f64>,
}

impl Subst<'_> {
    fn expr(&self, e: &Expr) -> Expr {
        match e {
            Expr::Var(v) => match self.env.get(v) {
                Some(x) => Expr::Num(*x),
                None => e.clone(),
            },
            Expr::Num(_) => e.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(self.expr(a))),
            Expr::Bin(op, a, b) => Expr::bin(*op, self.expr(a), self.expr(b)),
        }
    }

    fn eval(&self, e: &Expr) -> Result<f64, InstantiateError> {
        Ok(match e {
            Expr::Num(x) => *x,
            // checked scripts only pass parameters in arguments
            Expr::Var(v) => self.env.get(v).copied().unwrap_or(f64::NAN),
            Expr::Neg(a) => -self.eval(a)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    ArithOp::Add => x + y,
                    ArithOp::Sub => x - y,
                    ArithOp::Mul => x * y,
                    ArithOp::Div if y == 0.0 => {
                        return Err(InstantiateError::DivisionByZero {
                            formula: self.def.name.clone(),
                            expr: e.to_string(),
                        })
                    }
                    ArithOp::Div => x / y,
                }
            }
        })
    }

    fn bound(&self, b: &Bound) -> f64 {
        match b {
            Bound::Num(x) => *x,
            Bound::Inf => f64::INFINITY,
            Bound::Param(p) => self.env.get(p).copied().unwrap_or(f64::NAN),
        }
    }

    fn interval(&self, i: &Option<IntervalExpr>) -> Result<Option<IntervalExpr>, InstantiateError> {
        let Some(i) = i else { return Ok(None) };
        let (lo, hi) = (self.bound(&i.lo), self.bound(&i.hi));
        if crate::interval::Interval::new(lo, hi).is_err() {
            return Err(InstantiateError::InvalidInterval {
                formula: self.def.name.clone(),
                lo,
                hi,
            });
        }
        Ok(Some(IntervalExpr::new(lo, hi)))
    }

    fn formula(&self, f: &Formula) -> Result<Formula, InstantiateError> {
        let sub = |g: &Formula| self.formula(g).map(Box::new);
        Ok(match f {
            Formula::Atom(a) => Formula::Atom(Atom {
                op: a.op,
                lhs: self.expr(&a.lhs),
                rhs: self.expr(&a.rhs),
            }),
            Formula::Ref { name, args } => {
                let callee = self
                    .script
                    .formula(name)
                    .ok_or_else(|| InstantiateError::UnknownFormula(name.clone()))?;
                let values = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                expand(self.script, callee, &values)?
            }
            Formula::Not(g) => Formula::Not(sub(g)?),
            Formula::And(a, b) => Formula::And(sub(a)?, sub(b)?),
            Formula::Or(a, b) => Formula::Or(sub(a)?, sub(b)?),
            Formula::Implies(a, b) => Formula::Implies(sub(a)?, sub(b)?),
            Formula::Binary {
                op,
                interval,
                left,
                right,
            } => Formula::Binary {
                op: *op,
                interval: self.interval(interval)?,
                left: sub(left)?,
                right: sub(right)?,
            },
            Formula::Temporal { op, interval, arg } => Formula::Temporal {
                op: *op,
                interval: self.interval(interval)?,
                arg: sub(arg)?,
            },
            Formula::Reach {
                distance,
                interval,
                left,
                right,
            } => Formula::Reach {
                distance: distance.clone(),
                interval: self.interval(interval)?,
                left: sub(left)?,
                right: sub(right)?,
            },
            Formula::Spatial {
                op,
                distance,
                interval,
                arg,
            } => Formula::Spatial {
                op: *op,
                distance: distance.clone(),
                interval: self.interval(interval)?,
                arg: sub(arg)?,
            },
        })
    }
}
