//! Static checks over a parsed script.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("formula `{formula}`: unknown {expected} `{name}`")]
    UnknownIdentifier {
        formula: String,
        name: String,
        expected: &'static str,
    },
    #[error("formula `{formula}` uses spatial operator `{operator}` but the script has no space section")]
    SpatialWithoutSpace {
        formula: String,
        operator: &'static str,
    },
    #[error("cyclic formula reference: {}", .cycle.join(" -> "))]
    CyclicReference { cycle: Vec<String> },
    #[error("formula `{formula}` calls `{callee}` with {found} argument(s), expected {expected}")]
    ArityMismatch {
        formula: String,
        callee: String,
        expected: usize,
        found: usize,
    },
    #[error("formula `{formula}`: invalid interval [{lo}, {hi}]")]
    InvalidInterval {
        formula: String,
        lo: String,
        hi: String,
    },
}

/// Every error found in a script, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct CheckErrors(pub Vec<CheckError>);

impl fmt::Display for CheckErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A script whose references all resolve and whose formula references are
/// acyclic. Only [`type_check`] constructs one.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedScript(Script);

impl CheckedScript {
    pub fn script(&self) -> &Script {
        &self.0
    }

    pub fn into_inner(self) -> Script {
        self.0
    }
}

impl std::ops::Deref for CheckedScript {
    type Target = Script;

    fn deref(&self) -> &Script {
        &self.0
    }
}

pub fn type_check(script: Script) -> Result<CheckedScript, CheckErrors> {
    let mut errors = Vec::new();
    for def in &script.formulas {
        let mut cx = Context {
            script: &script,
            def,
            errors: &mut errors,
        };
        cx.formula(&def.body);
    }
    if let Some(cycle) = find_cycle(&script) {
        errors.push(CheckError::CyclicReference { cycle });
    }
    if errors.is_empty() {
        Ok(CheckedScript(script))
    } else {
        Err(CheckErrors(errors))
    }
}

struct Context<'a> {
    script: &'a Script,
    def: &'a FormulaDef,
    errors: &'a mut Vec<CheckError>,
}

impl Context<'_> {
    fn unknown(&mut self, name: &str, expected: &'static str) {
        self.errors.push(CheckError::UnknownIdentifier {
            formula: self.def.name.clone(),
            name: name.to_string(),
            expected,
        });
    }

    fn is_param(&self, name: &str) -> bool {
        self.def.params.iter().any(|p| p.name == name)
    }

    fn expr(&mut self, e: &Expr, allow_signals: bool) {
        let mut unknown = Vec::new();
        e.visit_vars(&mut |v| {
            let ok = self.is_param(v) || (allow_signals && self.script.signal(v).is_some());
            if !ok {
                unknown.push(v.to_string());
            }
        });
        let expected = if allow_signals {
            "signal variable or parameter"
        } else {
            "parameter"
        };
        for name in unknown {
            self.unknown(&name, expected);
        }
    }

    fn interval(&mut self, i: Option<&IntervalExpr>) {
        let Some(i) = i else { return };
        for b in [&i.lo, &i.hi] {
            if let Bound::Param(p) = b {
                if !self.is_param(p) {
                    self.unknown(p, "parameter");
                }
            }
        }
        let bad = match (&i.lo, &i.hi) {
            (Bound::Inf, _) => true,
            (Bound::Num(lo), Bound::Num(hi)) => lo > hi,
            _ => false,
        };
        if bad {
            self.errors.push(CheckError::InvalidInterval {
                formula: self.def.name.clone(),
                lo: i.lo.to_string(),
                hi: i.hi.to_string(),
            });
        }
    }

    fn spatial(&mut self, operator: &'static str, d: Option<&DistanceExpr>) {
        if self.script.edges.is_none() {
            self.errors.push(CheckError::SpatialWithoutSpace {
                formula: self.def.name.clone(),
                operator,
            });
            return;
        }
        if let Some(DistanceExpr::Label(label)) = d {
            if self.script.edge_label(label).is_none() {
                self.unknown(label, "edge label");
            }
        }
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Atom(a) => {
                self.expr(&a.lhs, true);
                self.expr(&a.rhs, true);
            }
            Formula::Ref { name, args } => {
                match self.script.formula(name) {
                    None => self.unknown(name, "formula"),
                    Some(callee) if callee.params.len() != args.len() => {
                        self.errors.push(CheckError::ArityMismatch {
                            formula: self.def.name.clone(),
                            callee: name.clone(),
                            expected: callee.params.len(),
                            found: args.len(),
                        })
                    }
                    Some(_) => {}
                }
                for a in args {
                    self.expr(a, false);
                }
            }
            Formula::Binary { interval, .. } | Formula::Temporal { interval, .. } => {
                self.interval(interval.as_ref());
            }
            Formula::Reach {
                distance, interval, ..
            } => {
                self.spatial("reach", distance.as_ref());
                self.interval(interval.as_ref());
            }
            Formula::Spatial {
                op,
                distance,
                interval,
                ..
            } => {
                self.spatial(op.keyword(), distance.as_ref());
                self.interval(interval.as_ref());
            }
            Formula::Not(_) | Formula::And(..) | Formula::Or(..) | Formula::Implies(..) => {}
        }
        for c in f.children() {
            self.formula(c);
        }
    }
}

/// First reference cycle found, closed (`[A, B, A]`).
fn find_cycle(script: &Script) -> Option<Vec<String>> {
    let graph: BTreeMap<&str, Vec<&str>> = script
        .formulas
        .iter()
        .map(|d| {
            let refs = d
                .body
                .references()
                .into_iter()
                .filter(|r| script.formula(r).is_some())
                .collect();
            (d.name.as_str(), refs)
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = graph.keys().map(|k| (*k, Mark::Fresh)).collect();

    fn visit<'a>(
        node: &'a str,
        graph: &BTreeMap<&'a str, Vec<&'a str>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        marks.insert(node, Mark::Active);
        stack.push(node);
        for &next in &graph[node] {
            match marks[next] {
                Mark::Active => {
                    let start = stack.iter().position(|n| *n == next).unwrap_or(0);
                    let mut cycle: Vec<String> = stack[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(next.to_string());
                    return Some(cycle);
                }
                Mark::Fresh => {
                    if let Some(c) = visit(next, graph, marks, stack) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
        None
    }

    for d in &script.formulas {
        if marks[d.name.as_str()] == Mark::Fresh {
            let mut stack = Vec::new();
            if let Some(c) = visit(&d.name, &graph, &mut marks, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}
