//! Reader for the presentation text format.
//!
//! ```text
//! # comment
//! generators: x1 x2 x3
//! relation: [x1,[x2,[x1,x3]]] = 2*x1
//! relation: [x1,[x1,[x1,x2]]] = 0
//! ```
//!
//! Both sides of a relation are signed sums of terms; a term is an optional
//! rational factor (`2*`, `-1/2*`) followed by a generator name or a bracket
//! `[lhs, rhs]` of two such sums. A bare `0` stands for the zero element.
//! Whitespace and line breaks are insignificant.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::Presentation;
use crate::free_lie::{FreeLieAlgebra, FreeLieError, Generator, LiePoly};
use crate::linalg::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnclosedBracket,
    MalformedBracket,
    UnknownGenerator,
    DuplicateGenerator,
    MissingHeader,
    ScalarTerm,
    Degree,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
struct Pos {
    line: usize,
    column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Colon,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Colon => f.write_str("':'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Eq => f.write_str("'='"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
        }
    }
}

fn err(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<(Vec<(Tok, Pos)>, Pos), ParseError> {
    let mut toks = Vec::new();
    let mut end = Pos { line: 1, column: 1 };
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = Pos {
                line: li + 1,
                column: i + 1,
            };
            let c = chars[i];
            let single = match c {
                ':' => Some(Tok::Colon),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Eq),
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                _ => None,
            };
            if let Some(t) = single {
                toks.push((t, pos));
                i += 1;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(digits.parse().expect("digits")), pos));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            } else {
                return Err(err(
                    ParseErrorKind::Syntax,
                    pos,
                    format!("unexpected character '{c}'"),
                ));
            }
        }
        end = Pos {
            line: li + 1,
            column: chars.len() + 1,
        };
    }
    Ok((toks, end))
}

/// Syntax tree of one side of a relation, before names are resolved.
#[derive(Clone, Debug)]
enum Expr {
    Sum(Vec<(Rational, Atom)>),
}

#[derive(Clone, Debug)]
enum Atom {
    Name(String, Pos),
    Bracket(Box<Expr>, Box<Expr>),
    Scalar(Rational, Pos),
}

struct RawRelation {
    lhs: Expr,
    rhs: Expr,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.toks.get(self.at), Some((Tok::Ident(s), _)) if s == kw)
            && matches!(self.toks.get(self.at + 1), Some((Tok::Colon, _)))
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Pos, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some((t, p)) if t == want => Ok(p),
            Some((t, _)) => Err(err(
                ParseErrorKind::Syntax,
                pos,
                format!("expected {what}, found {t}"),
            )),
            None => Err(err(
                ParseErrorKind::Syntax,
                pos,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn header(&mut self) -> Result<Option<Vec<(String, Pos)>>, ParseError> {
        if !self.at_keyword("generators") {
            return Ok(None);
        }
        self.at += 2;
        let mut names = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            if self.at_keyword("relation") {
                break;
            }
            let Some((Tok::Ident(name), pos)) = self.bump() else {
                unreachable!()
            };
            names.push((name, pos));
        }
        Ok(Some(names))
    }

    fn relation(&mut self) -> Result<RawRelation, ParseError> {
        let pos = self.pos();
        if !self.at_keyword("relation") {
            let found = self
                .peek()
                .map_or("end of input".to_string(), Tok::to_string);
            return Err(err(
                ParseErrorKind::Syntax,
                pos,
                format!("expected 'relation:', found {found}"),
            ));
        }
        self.at += 2;
        let lhs = self.sum()?;
        self.expect(Tok::Eq, "'='")?;
        let rhs = self.sum()?;
        Ok(RawRelation { lhs, rhs, pos })
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                sign = -sign;
            }
            Some(Tok::Plus) => self.at += 1,
            _ => {}
        }
        loop {
            let (c, atom) = self.term()?;
            terms.push((sign * c, atom));
            sign = match self.peek() {
                Some(Tok::Plus) => Rational::one(),
                Some(Tok::Minus) => -Rational::one(),
                _ => break,
            };
            self.at += 1;
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<(Rational, Atom), ParseError> {
        let pos = self.pos();
        if let Some(Tok::Int(_)) = self.peek() {
            let c = self.rational()?;
            if self.peek() == Some(&Tok::Star) {
                self.at += 1;
                let atom = self.atom()?;
                return Ok((c, atom));
            }
            return Ok((Rational::one(), Atom::Scalar(c, pos)));
        }
        Ok((Rational::one(), self.atom()?))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let Some((Tok::Int(n), _)) = self.bump() else {
            unreachable!("caller checked for an integer")
        };
        if self.peek() != Some(&Tok::Slash) {
            return Ok(Rational::from_integer(n));
        }
        self.at += 1;
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Int(d), _)) if !d.is_zero() => Ok(Rational::new(n, d)),
            Some((Tok::Int(_), _)) => Err(err(ParseErrorKind::Syntax, pos, "zero denominator")),
            _ => Err(err(ParseErrorKind::Syntax, pos, "expected a denominator")),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Ident(name), p)) => {
                if self.peek() == Some(&Tok::Colon) {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        p,
                        format!("unexpected keyword '{name}:'"),
                    ));
                }
                Ok(Atom::Name(name, p))
            }
            Some((Tok::LBracket, open)) => {
                if self.at >= self.toks.len() {
                    return Err(unclosed(open));
                }
                let left = self.sum().map_err(|e| self.promote(e, open))?;
                match self.bump() {
                    Some((Tok::Comma, _)) => {}
                    Some((Tok::RBracket, p)) => {
                        return Err(err(
                            ParseErrorKind::MalformedBracket,
                            p,
                            format!("bracket opened at {open} has one entry; expected two"),
                        ))
                    }
                    _ => return Err(unclosed(open)),
                }
                let right = self.sum().map_err(|e| self.promote(e, open))?;
                match self.bump() {
                    Some((Tok::RBracket, _)) => {}
                    Some((Tok::Comma, p)) => {
                        return Err(err(
                            ParseErrorKind::MalformedBracket,
                            p,
                            format!("bracket opened at {open} has more than two entries"),
                        ))
                    }
                    _ => return Err(unclosed(open)),
                }
                Ok(Atom::Bracket(Box::new(left), Box::new(right)))
            }
            Some((t, _)) => Err(err(
                ParseErrorKind::Syntax,
                pos,
                format!("expected a generator name or '[', found {t}"),
            )),
            None => Err(err(
                ParseErrorKind::Syntax,
                pos,
                "expected a generator name or '[', found end of input",
            )),
        }
    }

    // Running off the end inside a bracket is reported at the bracket.
    fn promote(&self, e: ParseError, open: Pos) -> ParseError {
        if self.at >= self.toks.len() && e.kind == ParseErrorKind::Syntax {
            unclosed(open)
        } else {
            e
        }
    }
}

fn unclosed(open: Pos) -> ParseError {
    err(
        ParseErrorKind::UnclosedBracket,
        open,
        "unclosed bracket '['",
    )
}

struct Resolver<'a> {
    names: &'a [Generator],
    alg: FreeLieAlgebra,
}

impl Resolver<'_> {
    fn expr(&self, e: &Expr) -> Result<LiePoly, ParseError> {
        let Expr::Sum(terms) = e;
        let mut out = LiePoly::zero();
        for (c, atom) in terms {
            let p = self.atom(atom)?;
            out.add_scaled(c, &p);
        }
        Ok(out)
    }

    fn atom(&self, a: &Atom) -> Result<LiePoly, ParseError> {
        match a {
            Atom::Name(n, pos) => {
                let g = self.names.iter().find(|g| &g.name == n).ok_or_else(|| {
                    err(
                        ParseErrorKind::UnknownGenerator,
                        *pos,
                        format!("unknown generator '{n}'"),
                    )
                })?;
                Ok(LiePoly::generator(g.index as u8))
            }
            Atom::Scalar(c, pos) => {
                if c.is_zero() {
                    Ok(LiePoly::zero())
                } else {
                    Err(err(
                        ParseErrorKind::ScalarTerm,
                        *pos,
                        format!("'{c}' is a scalar, not a Lie algebra element (write '{c}*name')"),
                    ))
                }
            }
            Atom::Bracket(l, r) => {
                let l = self.expr(l)?;
                let r = self.expr(r)?;
                self.alg.bracket(&l, &r).map_err(|e| match e {
                    FreeLieError::DegreeCap { .. } => err(
                        ParseErrorKind::Degree,
                        first_pos(a).unwrap_or_default(),
                        e.to_string(),
                    ),
                    other => panic!("bracket normalization failed: {other}"),
                })
            }
        }
    }
}

fn first_pos(a: &Atom) -> Option<Pos> {
    match a {
        Atom::Name(_, p) | Atom::Scalar(_, p) => Some(*p),
        Atom::Bracket(l, _) => {
            let Expr::Sum(ts) = l.as_ref();
            ts.first().and_then(|(_, a)| first_pos(a))
        }
    }
}

/// Parses a presentation. Syntax is checked for the whole file before any
/// name is resolved, so a truncated file reports the truncation.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let (toks, end) = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end };
    let header_pos = p.pos();
    let header = p.header()?;
    let mut raw = Vec::new();
    while p.at < p.toks.len() {
        raw.push(p.relation()?);
    }

    let Some(header) = header else {
        return Err(err(
            ParseErrorKind::MissingHeader,
            header_pos,
            "expected 'generators:' header",
        ));
    };
    let mut generators: Vec<Generator> = Vec::new();
    for (name, pos) in header {
        if generators.iter().any(|g| g.name == name) {
            return Err(err(
                ParseErrorKind::DuplicateGenerator,
                pos,
                format!("generator '{name}' declared twice"),
            ));
        }
        if generators.len() == 256 {
            return Err(err(ParseErrorKind::Syntax, pos, "at most 256 generators"));
        }
        generators.push(Generator {
            index: generators.len(),
            name,
        });
    }
    if generators.is_empty() {
        return Err(err(
            ParseErrorKind::MissingHeader,
            header_pos,
            "'generators:' lists no names",
        ));
    }

    let resolver = Resolver {
        names: &generators,
        alg: FreeLieAlgebra::new(),
    };
    let mut relations = Vec::with_capacity(raw.len());
    for r in &raw {
        let lhs = resolver.expr(&r.lhs)?;
        let rhs = resolver.expr(&r.rhs)?;
        let rel = &lhs - &rhs;
        let _ = r.pos;
        relations.push(rel);
    }
    Ok(Presentation::new(generators, relations).expect("names were resolved against the header"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::{tower_to_poly, Tower};
    use crate::linalg::int;

    #[test]
    fn single_quadruple_relation() {
        let p =
            parse_presentation("generators: x1 x2 x3\nrelation: [x1,[x2,[x1,x3]]] = 2*x1").unwrap();
        assert_eq!(p.generators().len(), 3);
        assert_eq!(p.relations().len(), 1);
        let expected = &tower_to_poly(&Tower::one_based(&[1, 2, 1, 3])).unwrap()
            - &LiePoly::generator(0).scaled(&int(2));
        assert_eq!(p.relations()[0], expected);
    }

    #[test]
    fn sl2_fixture() {
        let p = parse_presentation(
            "generators: e f h\nrelation: [h,e] = 2*e\nrelation: [h,f] = -2*f\nrelation: [e,f] = h",
        )
        .unwrap();
        assert_eq!(p.generator_names(), vec!["e", "f", "h"]);
        assert_eq!(p.relations().len(), 3);
    }

    #[test]
    fn unclosed_bracket_is_reported_at_the_bracket() {
        let e = parse_presentation("relation: [x1,").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnclosedBracket);
        assert_eq!((e.line, e.column), (1, 11));
    }

    #[test]
    fn unknown_generator() {
        let e = parse_presentation("generators: a b\nrelation: [a,c] = 0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator);
        assert_eq!((e.line, e.column), (2, 14));
    }

    #[test]
    fn malformed_brackets() {
        let one = parse_presentation("generators: a b\nrelation: [a] = 0").unwrap_err();
        assert_eq!(one.kind, ParseErrorKind::MalformedBracket);
        let three = parse_presentation("generators: a b\nrelation: [a,b,a] = 0").unwrap_err();
        assert_eq!(three.kind, ParseErrorKind::MalformedBracket);
        let missing = parse_presentation("generators: a b\nrelation: [a,b = 0").unwrap_err();
        assert_eq!(missing.kind, ParseErrorKind::UnclosedBracket);
    }

    #[test]
    fn comments_whitespace_and_rationals() {
        let p = parse_presentation(
            "# sl2\ngenerators: e f h # three\n\nrelation: [ h , e ]\n   = 2 * e\nrelation: 1/2*[e,f] - 1/2*h = 0\n",
        )
        .unwrap();
        assert_eq!(p.relations().len(), 2);
        assert_eq!(p.relations()[1].len(), 2);
    }

    #[test]
    fn scalar_terms_are_rejected() {
        let e = parse_presentation("generators: a\nrelation: a = 2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ScalarTerm);
    }

    #[test]
    fn header_is_required() {
        let e = parse_presentation("relation: [a,b] = 0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingHeader);
        let e = parse_presentation("generators: a a").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateGenerator);
    }

    #[test]
    fn garbage_after_relation() {
        let e = parse_presentation("generators: a b\nrelation: [a,b] = 0 ]").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.column), (2, 21));
    }
}
