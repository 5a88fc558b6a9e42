use std::fmt;

use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Signal,
    Space,
    Edges,
    Domain,
    Boolean,
    MinMax,
    Formula,
    Int,
    Real,
    Until,
    Since,
    Eventually,
    Globally,
    Once,
    Historically,
    Reach,
    Escape,
    Somewhere,
    Everywhere,
    Inf,
}

impl Keyword {
    const ALL: [Keyword; 20] = [
        Keyword::Signal,
        Keyword::Space,
        Keyword::Edges,
        Keyword::Domain,
        Keyword::Boolean,
        Keyword::MinMax,
        Keyword::Formula,
        Keyword::Int,
        Keyword::Real,
        Keyword::Until,
        Keyword::Since,
        Keyword::Eventually,
        Keyword::Globally,
        Keyword::Once,
        Keyword::Historically,
        Keyword::Reach,
        Keyword::Escape,
        Keyword::Somewhere,
        Keyword::Everywhere,
        Keyword::Inf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Signal => "signal",
            Keyword::Space => "space",
            Keyword::Edges => "edges",
            Keyword::Domain => "domain",
            Keyword::Boolean => "boolean",
            Keyword::MinMax => "minmax",
            Keyword::Formula => "formula",
            Keyword::Int => "int",
            Keyword::Real => "real",
            Keyword::Until => "until",
            Keyword::Since => "since",
            Keyword::Eventually => "eventually",
            Keyword::Globally => "globally",
            Keyword::Once => "once",
            Keyword::Historically => "historically",
            Keyword::Reach => "reach",
            Keyword::Escape => "escape",
            Keyword::Somewhere => "somewhere",
            Keyword::Everywhere => "everywhere",
            Keyword::Inf => "inf",
        }
    }

    fn lookup(word: &str) -> Option<Keyword> {
        Keyword::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(f64),
    Kw(Keyword),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Assign,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return f.write_str(name),
            Tok::Num(x) => return write!(f, "{x}"),
            Tok::Kw(k) => k.as_str(),
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "=>",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    /// Source text of the token.
    pub text: String,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let tok = if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match Keyword::lookup(&word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            }
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse::<f64>() {
                Ok(x) if x.is_finite() => Tok::Num(x),
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Lexical,
                        "numeric literal out of range",
                        line,
                        column,
                        text,
                    ))
                }
            }
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, width) = match (c, next) {
                ('=', Some('=')) => (Tok::EqEq, 2),
                ('=', Some('>')) => (Tok::Arrow, 2),
                ('!', Some('=')) => (Tok::NotEq, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('=', _) => (Tok::Assign, 1),
                ('!', _) => (Tok::Bang, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (';', _) => (Tok::Semi, 1),
                (',', _) => (Tok::Comma, 1),
                ('&', _) => (Tok::Amp, 1),
                ('|', _) => (Tok::Pipe, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Lexical,
                        "unexpected character",
                        line,
                        column,
                        c.to_string(),
                    ))
                }
            };
            i += width;
            tok
        };
        let text: String = chars[start..i].iter().collect();
        out.push(Token {
            tok,
            line,
            column,
            text,
        });
        column += i - start;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
        text: String::new(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_literals() {
        assert_eq!(
            toks("a<=0.5=>!b # trailing\n[5,inf]"),
            vec![
                Tok::Ident("a".into()),
                Tok::Le,
                Tok::Num(0.5),
                Tok::Arrow,
                Tok::Bang,
                Tok::Ident("b".into()),
                Tok::LBracket,
                Tok::Num(5.0),
                Tok::Comma,
                Tok::Kw(Keyword::Inf),
                Tok::RBracket,
                Tok::Eof,
            ]
        );
        assert_eq!(toks("1e3 2.5E-1"), vec![Tok::Num(1000.0), Tok::Num(0.25), Tok::Eof]);
    }

    #[test]
    fn positions() {
        let t = tokenize("signal {\n  int x;").unwrap();
        assert_eq!((t[2].line, t[2].column), (2, 3));
        assert_eq!(t[3].text, "x");
        assert_eq!((t[3].line, t[3].column), (2, 7));
    }

    #[test]
    fn keywords_are_case_sensitive() {
        assert_eq!(toks("Reach"), vec![Tok::Ident("Reach".into()), Tok::Eof]);
    }

    #[test]
    fn lexical_error_is_positioned() {
        let err = tokenize("x ==\n  $").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Lexical);
        assert_eq!((err.line, err.column), (2, 3));
        assert_eq!(err.token, "$");
    }
}
