//! Syntax tree of monitor scripts.

use std::collections::BTreeSet;

use crate::domain::DomainKind;
use crate::signal::VarSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn is_equality(self) -> bool {
        matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> char {
        match self {
            ArithOp::Add => '+',
            ArithOp::Sub => '-',
            ArithOp::Mul => '*',
            ArithOp::Div => '/',
        }
    }
}

/// Arithmetic over signal variables, formula parameters and literals.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// A signal variable or a formula parameter.
    Var(String),
    Neg(Box<Expr>),
    Bin(ArithOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn bin(op: ArithOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(name) => f(name),
            Expr::Neg(e) => e.visit_vars(f),
            Expr::Bin(_, a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }
}

/// `lhs op rhs`, written in parentheses.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub op: CmpOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Num(f64),
    Inf,
    Param(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalExpr {
    pub lo: Bound,
    pub hi: Bound,
}

impl IntervalExpr {
    pub fn new(lo: f64, hi: f64) -> Self {
        let bound = |x: f64| {
            if x.is_infinite() {
                Bound::Inf
            } else {
                Bound::Num(x)
            }
        };
        IntervalExpr {
            lo: bound(lo),
            hi: bound(hi),
        }
    }
}

/// The rule giving each edge its length: an edge label or a constant.
#[derive(Debug, Clone, PartialEq)]
pub enum DistanceExpr {
    Label(String),
    Num(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemporalOp {
    Eventually,
    Globally,
    Once,
    Historically,
}

impl TemporalOp {
    pub fn keyword(self) -> &'static str {
        match self {
            TemporalOp::Eventually => "eventually",
            TemporalOp::Globally => "globally",
            TemporalOp::Once => "once",
            TemporalOp::Historically => "historically",
        }
    }

    pub fn is_past(self) -> bool {
        matches!(self, TemporalOp::Once | TemporalOp::Historically)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpatialOp {
    Escape,
    Somewhere,
    Everywhere,
}

impl SpatialOp {
    pub fn keyword(self) -> &'static str {
        match self {
            SpatialOp::Escape => "escape",
            SpatialOp::Somewhere => "somewhere",
            SpatialOp::Everywhere => "everywhere",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinTemporalOp {
    Until,
    Since,
}

impl BinTemporalOp {
    pub fn keyword(self) -> &'static str {
        match self {
            BinTemporalOp::Until => "until",
            BinTemporalOp::Since => "since",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `left until [i] right` / `left since [i] right`.
    Binary {
        op: BinTemporalOp,
        interval: Option<IntervalExpr>,
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Temporal {
        op: TemporalOp,
        interval: Option<IntervalExpr>,
        arg: Box<Formula>,
    },
    Reach {
        distance: Option<DistanceExpr>,
        interval: Option<IntervalExpr>,
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Spatial {
        op: SpatialOp,
        distance: Option<DistanceExpr>,
        interval: Option<IntervalExpr>,
        arg: Box<Formula>,
    },
    /// Use of another named formula, with arguments for its parameters.
    Ref { name: String, args: Vec<Expr> },
}

impl Formula {
    pub fn atom(lhs: Expr, op: CmpOp, rhs: Expr) -> Self {
        Formula::Atom(Atom { op, lhs, rhs })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn temporal(op: TemporalOp, interval: Option<IntervalExpr>, arg: Formula) -> Self {
        Formula::Temporal {
            op,
            interval,
            arg: Box::new(arg),
        }
    }

    pub fn binary(
        op: BinTemporalOp,
        interval: Option<IntervalExpr>,
        left: Formula,
        right: Formula,
    ) -> Self {
        Formula::Binary {
            op,
            interval,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn reach(
        distance: Option<DistanceExpr>,
        interval: Option<IntervalExpr>,
        left: Formula,
        right: Formula,
    ) -> Self {
        Formula::Reach {
            distance,
            interval,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn spatial(
        op: SpatialOp,
        distance: Option<DistanceExpr>,
        interval: Option<IntervalExpr>,
        arg: Formula,
    ) -> Self {
        Formula::Spatial {
            op,
            distance,
            interval,
            arg: Box::new(arg),
        }
    }

    /// Direct subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Ref { .. } => vec![],
            Formula::Not(f) | Formula::Temporal { arg: f, .. } | Formula::Spatial { arg: f, .. } => {
                vec![f]
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Binary {
                left: a, right: b, ..
            }
            | Formula::Reach {
                left: a, right: b, ..
            } => vec![a, b],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn is_spatial(&self) -> bool {
        matches!(self, Formula::Reach { .. } | Formula::Spatial { .. })
            || self.children().iter().any(|c| c.is_spatial())
    }

    pub fn has_equality_atom(&self) -> bool {
        match self {
            Formula::Atom(a) => a.op.is_equality(),
            other => other.children().iter().any(|c| c.has_equality_atom()),
        }
    }

    /// Names of formulas referenced anywhere in this tree.
    pub fn references(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        if let Formula::Ref { name, .. } = self {
            out.insert(name);
        }
        for c in self.children() {
            c.collect_refs(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaDef {
    pub name: String,
    pub params: Vec<VarSpec>,
    pub body: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Script {
    pub signals: Vec<VarSpec>,
    /// Edge labels of the `space` section; `None` when the section is absent.
    pub edges: Option<Vec<VarSpec>>,
    pub domain: DomainKind,
    pub formulas: Vec<FormulaDef>,
}

impl Script {
    pub fn formula(&self, name: &str) -> Option<&FormulaDef> {
        self.formulas.iter().find(|f| f.name == name)
    }

    pub fn signal(&self, name: &str) -> Option<&VarSpec> {
        self.signals.iter().find(|v| v.name == name)
    }

    pub fn edge_label(&self, name: &str) -> Option<&VarSpec> {
        self.edges.as_ref()?.iter().find(|v| v.name == name)
    }
}
