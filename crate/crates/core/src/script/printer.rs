//! Canonical text rendering. Output re-parses to the same tree; braces are
//! inserted only where precedence requires them.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const BINARY: u8 = 4;
const UNARY: u8 = 5;
const PRIMARY: u8 = 6;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Binary { .. } | Formula::Reach { .. } => BINARY,
        Formula::Not(_) | Formula::Temporal { .. } | Formula::Spatial { .. } => UNARY,
        Formula::Atom(_) | Formula::Ref { .. } => PRIMARY,
    }
}

fn write_at(out: &mut Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    if level(f) < min {
        out.write_char('{')?;
        write_formula(out, f)?;
        out.write_char('}')
    } else {
        write_formula(out, f)
    }
}

fn write_formula(out: &mut Formatter<'_>, f: &Formula) -> fmt::Result {
    match f {
        Formula::Atom(a) => write!(out, "({} {} {})", a.lhs, a.op.symbol(), a.rhs),
        Formula::Ref { name, args } => {
            out.write_str(name)?;
            if !args.is_empty() {
                out.write_char('(')?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    write!(out, "{a}")?;
                }
                out.write_char(')')?;
            }
            Ok(())
        }
        Formula::Not(g) => {
            out.write_char('!')?;
            write_at(out, g, UNARY)
        }
        Formula::And(a, b) => binary(out, a, " & ", b, AND),
        Formula::Or(a, b) => binary(out, a, " | ", b, OR),
        Formula::Implies(a, b) => {
            write_at(out, a, OR)?;
            out.write_str(" => ")?;
            write_at(out, b, IMPLIES)
        }
        Formula::Binary {
            op,
            interval,
            left,
            right,
        } => {
            write_at(out, left, BINARY)?;
            write!(out, " {}", op.keyword())?;
            write_interval(out, interval.as_ref())?;
            out.write_char(' ')?;
            write_at(out, right, UNARY)
        }
        Formula::Reach {
            distance,
            interval,
            left,
            right,
        } => {
            write_at(out, left, BINARY)?;
            out.write_str(" reach")?;
            write_distance(out, distance.as_ref())?;
            write_interval(out, interval.as_ref())?;
            out.write_char(' ')?;
            write_at(out, right, UNARY)
        }
        Formula::Temporal { op, interval, arg } => {
            out.write_str(op.keyword())?;
            write_interval(out, interval.as_ref())?;
            out.write_char(' ')?;
            write_at(out, arg, UNARY)
        }
        Formula::Spatial {
            op,
            distance,
            interval,
            arg,
        } => {
            out.write_str(op.keyword())?;
            write_distance(out, distance.as_ref())?;
            write_interval(out, interval.as_ref())?;
            out.write_char(' ')?;
            write_at(out, arg, UNARY)
        }
    }
}

fn binary(out: &mut Formatter<'_>, a: &Formula, sym: &str, b: &Formula, lvl: u8) -> fmt::Result {
    write_at(out, a, lvl)?;
    out.write_str(sym)?;
    write_at(out, b, lvl + 1)
}

fn write_distance(out: &mut Formatter<'_>, d: Option<&DistanceExpr>) -> fmt::Result {
    match d {
        None => Ok(()),
        Some(DistanceExpr::Label(name)) => write!(out, "({name})"),
        Some(DistanceExpr::Num(x)) => write!(out, "({x})"),
    }
}

fn write_interval(out: &mut Formatter<'_>, i: Option<&IntervalExpr>) -> fmt::Result {
    match i {
        None => Ok(()),
        Some(i) => write!(out, " [{}, {}]", i.lo, i.hi),
    }
}

impl Display for Bound {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Num(x) => write!(f, "{x}"),
            Bound::Inf => f.write_str("inf"),
            Bound::Param(p) => f.write_str(p),
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

fn expr_level(e: &Expr) -> u8 {
    match e {
        Expr::Bin(ArithOp::Add | ArithOp::Sub, ..) => 1,
        Expr::Bin(ArithOp::Mul | ArithOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Num(_) | Expr::Var(_) => 4,
    }
}

fn write_expr(out: &mut Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    let paren = expr_level(e) < min;
    if paren {
        out.write_char('(')?;
    }
    match e {
        Expr::Num(x) => write!(out, "{x}")?,
        Expr::Var(v) => out.write_str(v)?,
        Expr::Neg(inner) => {
            out.write_char('-')?;
            write_expr(out, inner, 3)?;
        }
        Expr::Bin(op, a, b) => {
            let lvl = expr_level(e);
            write_expr(out, a, lvl)?;
            write!(out, " {} ", op.symbol())?;
            write_expr(out, b, lvl + 1)?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

fn write_decls(out: &mut Formatter<'_>, decls: &[crate::signal::VarSpec]) -> fmt::Result {
    out.write_str("{ ")?;
    for d in decls {
        write!(out, "{} {}; ", d.ty, d.name)?;
    }
    out.write_char('}')
}

impl Display for Script {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("signal ")?;
        write_decls(f, &self.signals)?;
        f.write_char('\n')?;
        if let Some(edges) = &self.edges {
            f.write_str("space { edges ")?;
            write_decls(f, edges)?;
            f.write_str(" }\n")?;
        }
        writeln!(f, "domain {};", self.domain)?;
        for def in &self.formulas {
            write!(f, "formula {}", def.name)?;
            if !def.params.is_empty() {
                f.write_char('(')?;
                for (i, p) in def.params.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{} {}", p.ty, p.name)?;
                }
                f.write_char(')')?;
            }
            writeln!(f, " = {};", def.body)?;
        }
        Ok(())
    }
}
