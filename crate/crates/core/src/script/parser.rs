//! Recursive-descent parser for monitor scripts.
//!
//! Precedence, loosest first: `=>` (right associative), `|`, `&`, the binary
//! modalities `until` / `since` / `reach` (left associative), then prefix
//! operators (`!`, temporal and spatial modalities). `{ }` groups formulas;
//! `( )` holds either an atomic comparison or a grouped formula.

use super::ast::*;
use super::lexer::{tokenize, Keyword, Tok, Token};
use super::{ParseError, ParseErrorKind};
use crate::domain::DomainKind;
use crate::signal::{VarSpec, VarType};

pub fn parse_script(src: &str) -> Result<Script, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    p.script()
}

/// Parses a single formula (no trailing `;`).
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.formula()?;
    p.expect(&Tok::Eof, "end of formula")?;
    Ok(f)
}

type PResult<T> = Result<T, ParseError>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error_here(&self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        let t = &self.tokens[self.pos];
        let token = if t.tok == Tok::Eof {
            t.tok.to_string()
        } else {
            t.text.clone()
        };
        ParseError::new(kind, message, t.line, t.column, token)
    }

    fn syntax(&self, expected: &str) -> ParseError {
        self.error_here(ParseErrorKind::Syntax, format!("expected {expected}"))
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> PResult<Token> {
        if self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.syntax(what))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Token> {
        match self.peek() {
            Tok::Ident(_) => Ok(self.advance()),
            _ => Err(self.syntax(what)),
        }
    }

    fn duplicate(tok: &Token, what: &str) -> ParseError {
        ParseError::new(
            ParseErrorKind::Duplicate,
            format!("duplicate {what} `{}`", tok.text),
            tok.line,
            tok.column,
            tok.text.clone(),
        )
    }

    // ---- declarations ----

    fn script(&mut self) -> PResult<Script> {
        self.expect(&Tok::Kw(Keyword::Signal), "`signal` section")?;
        let signals = self.declarations("signal variable")?;

        let edges = if self.eat(&Tok::Kw(Keyword::Space)) {
            self.expect(&Tok::LBrace, "`{`")?;
            let labels = if self.eat(&Tok::Kw(Keyword::Edges)) {
                self.declarations("edge label")?
            } else {
                Vec::new()
            };
            self.expect(&Tok::RBrace, "`}` closing the space section")?;
            Some(labels)
        } else {
            None
        };

        let domain = if self.eat(&Tok::Kw(Keyword::Domain)) {
            let d = match self.peek() {
                Tok::Kw(Keyword::Boolean) => DomainKind::Boolean,
                Tok::Kw(Keyword::MinMax) => DomainKind::MinMax,
                _ => return Err(self.syntax("`boolean` or `minmax`")),
            };
            self.advance();
            self.expect(&Tok::Semi, "`;`")?;
            d
        } else {
            DomainKind::Boolean
        };

        let mut formulas: Vec<FormulaDef> = Vec::new();
        while self.eat(&Tok::Kw(Keyword::Formula)) {
            let name_tok = self.ident("formula name")?;
            if formulas.iter().any(|f| f.name == name_tok.text) {
                return Err(Self::duplicate(&name_tok, "formula"));
            }
            let mut params: Vec<VarSpec> = Vec::new();
            if self.eat(&Tok::LParen) {
                loop {
                    let ty = self.var_type()?;
                    let tok = self.ident("parameter name")?;
                    if params.iter().any(|p| p.name == tok.text) {
                        return Err(Self::duplicate(&tok, "parameter"));
                    }
                    params.push(VarSpec::new(tok.text, ty));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RParen, "`)` closing the parameter list")?;
            }
            self.expect(&Tok::Assign, "`=`")?;
            let body = self.formula()?;
            self.expect(&Tok::Semi, "`;` ending the formula")?;
            formulas.push(FormulaDef {
                name: name_tok.text,
                params,
                body,
            });
        }
        self.expect(&Tok::Eof, "`formula` or end of script")?;
        Ok(Script {
            signals,
            edges,
            domain,
            formulas,
        })
    }

    fn var_type(&mut self) -> PResult<VarType> {
        let ty = match self.peek() {
            Tok::Kw(Keyword::Int) => VarType::Int,
            Tok::Kw(Keyword::Real) => VarType::Real,
            _ => return Err(self.syntax("type `int` or `real`")),
        };
        self.advance();
        Ok(ty)
    }

    /// `{ type name; ... }`
    fn declarations(&mut self, what: &str) -> PResult<Vec<VarSpec>> {
        self.expect(&Tok::LBrace, "`{`")?;
        let mut out: Vec<VarSpec> = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let ty = self.var_type()?;
            let tok = self.ident(&format!("{what} name"))?;
            if out.iter().any(|v| v.name == tok.text) {
                return Err(Self::duplicate(&tok, what));
            }
            self.expect(&Tok::Semi, "`;`")?;
            out.push(VarSpec::new(tok.text, ty));
        }
        Ok(out)
    }

    // ---- formulas ----

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.binary_modal()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.binary_modal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binary_modal(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Kw(Keyword::Until) | Tok::Kw(Keyword::Since) => {
                    let op = if self.advance().tok == Tok::Kw(Keyword::Until) {
                        BinTemporalOp::Until
                    } else {
                        BinTemporalOp::Since
                    };
                    let interval = self.opt_interval()?;
                    let rhs = self.unary()?;
                    lhs = Formula::binary(op, interval, lhs, rhs);
                }
                Tok::Kw(Keyword::Reach) => {
                    self.advance();
                    let distance = self.opt_distance()?;
                    let interval = self.opt_interval()?;
                    let rhs = self.unary()?;
                    lhs = Formula::reach(distance, interval, lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> PResult<Formula> {
        let temporal = |k: &Tok| match k {
            Tok::Kw(Keyword::Eventually) => Some(TemporalOp::Eventually),
            Tok::Kw(Keyword::Globally) => Some(TemporalOp::Globally),
            Tok::Kw(Keyword::Once) => Some(TemporalOp::Once),
            Tok::Kw(Keyword::Historically) => Some(TemporalOp::Historically),
            _ => None,
        };
        let spatial = |k: &Tok| match k {
            Tok::Kw(Keyword::Escape) => Some(SpatialOp::Escape),
            Tok::Kw(Keyword::Somewhere) => Some(SpatialOp::Somewhere),
            Tok::Kw(Keyword::Everywhere) => Some(SpatialOp::Everywhere),
            _ => None,
        };
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(op) = temporal(self.peek()) {
            self.advance();
            let interval = self.opt_interval()?;
            let arg = self.unary()?;
            return Ok(Formula::temporal(op, interval, arg));
        }
        if let Some(op) = spatial(self.peek()) {
            self.advance();
            let distance = self.opt_distance()?;
            let interval = self.opt_interval()?;
            let arg = self.unary()?;
            return Ok(Formula::spatial(op, distance, interval, arg));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::LBrace => {
                self.advance();
                let f = self.formula()?;
                self.expect(&Tok::RBrace, "`}`")?;
                Ok(f)
            }
            Tok::LParen => {
                let start = self.pos;
                let atom_err = match self.atom() {
                    Ok(atom) => return Ok(Formula::Atom(atom)),
                    Err(e) => e,
                };
                let atom_pos = self.pos;
                self.pos = start;
                self.advance();
                let grouped = self.formula().and_then(|f| {
                    self.expect(&Tok::RParen, "`)`")?;
                    Ok(f)
                });
                match grouped {
                    Ok(f) => Ok(f),
                    // report whichever reading got further into the input
                    Err(e) if self.pos >= atom_pos => Err(e),
                    Err(_) => Err(atom_err),
                }
            }
            Tok::Ident(name) => {
                self.advance();
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.expr()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(&Tok::RParen, "`)` closing the argument list")?;
                }
                Ok(Formula::Ref { name, args })
            }
            _ => Err(self.syntax("a formula")),
        }
    }

    /// `( expr cmp expr )`
    fn atom(&mut self) -> PResult<Atom> {
        self.expect(&Tok::LParen, "`(`")?;
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::EqEq => CmpOp::Eq,
            Tok::NotEq => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return Err(self.syntax("a comparison operator")),
        };
        self.advance();
        let rhs = self.expr()?;
        self.expect(&Tok::RParen, "`)` closing the atomic expression")?;
        Ok(Atom { op, lhs, rhs })
    }

    fn starts_formula(tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::LParen
                | Tok::LBrace
                | Tok::Bang
                | Tok::Ident(_)
                | Tok::Kw(
                    Keyword::Eventually
                        | Keyword::Globally
                        | Keyword::Once
                        | Keyword::Historically
                        | Keyword::Escape
                        | Keyword::Somewhere
                        | Keyword::Everywhere
                )
        )
    }

    /// `( label )` or `( number )` directly after a spatial keyword. A
    /// parenthesised name is only a distance expression when an interval or
    /// another formula follows it; otherwise it is the operand.
    fn opt_distance(&mut self) -> PResult<Option<DistanceExpr>> {
        if *self.peek() != Tok::LParen || *self.peek_at(2) != Tok::RParen {
            return Ok(None);
        }
        let follow = self.peek_at(3);
        if *follow != Tok::LBracket && !Self::starts_formula(follow) {
            return Ok(None);
        }
        let d = match self.peek_at(1).clone() {
            Tok::Ident(name) => DistanceExpr::Label(name),
            Tok::Num(x) => DistanceExpr::Num(x),
            _ => return Ok(None),
        };
        self.pos += 3;
        Ok(Some(d))
    }

    fn opt_interval(&mut self) -> PResult<Option<IntervalExpr>> {
        if !self.eat(&Tok::LBracket) {
            return Ok(None);
        }
        let lo = self.bound()?;
        self.eat(&Tok::Comma);
        let hi = self.bound()?;
        self.expect(&Tok::RBracket, "`]` closing the interval")?;
        Ok(Some(IntervalExpr { lo, hi }))
    }

    fn bound(&mut self) -> PResult<Bound> {
        let b = match self.peek() {
            Tok::Num(x) => Bound::Num(*x),
            Tok::Kw(Keyword::Inf) => Bound::Inf,
            Tok::Ident(name) => Bound::Param(name.clone()),
            _ => return Err(self.syntax("an interval bound (number, `inf` or parameter)")),
        };
        self.advance();
        Ok(b)
    }

    // ---- arithmetic ----

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.factor()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Minus => {
                self.advance();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Tok::Num(x) => {
                self.advance();
                Ok(Expr::Num(x))
            }
            Tok::Ident(name) => {
                self.advance();
                Ok(Expr::Var(name))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.syntax("an arithmetic expression")),
        }
    }
}
