//! Lexer and recursive-descent parser for polynomial expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' INT)?
//! primary := INT ('/' INT)? | IDENT | '(' sum ')'
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Monomial, Poly, PowerSeries, Rational, RingElement, TestRing};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

/// Where a fragment of text sits in its file, for error positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Origin {
    pub line: usize,
    pub column: usize,
}

impl Default for Origin {
    fn default() -> Self {
        Origin { line: 1, column: 1 }
    }
}

fn lex(text: &str, origin: Origin) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = origin.line;
    let mut column = origin.column;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Int(s.parse().expect("digits form an integer"))
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Ident(s)
        } else {
            chars.next();
            column += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(Error::Syntax {
                        line: l,
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

/// Expression tree. Variables are checked against the alphabet at parse
/// time, exponents are non-negative literals.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u16),
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    alphabet: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, at: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        })
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        if self.peek().tok == Tok::Slash {
            let t = self.peek().clone();
            return self.error(&t, "`/` is only allowed between integer literals");
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Int(ref n) => match n.to_u16() {
                Some(e) => Ok(Expr::Pow(Box::new(base), e)),
                None => self.error(&t, format!("exponent {n} is too large")),
            },
            Tok::Minus => self.error(&t, "negative exponent"),
            ref other => self.error(&t, format!("expected an integer exponent, found {}", other.describe())),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Int(n) => {
                if self.peek().tok != Tok::Slash {
                    return Ok(Expr::Number(Rational::from_integer(n)));
                }
                self.bump();
                let d = self.bump();
                match d.tok {
                    Tok::Int(ref den) if den.is_zero() => self.error(&d, "division by zero"),
                    Tok::Int(den) => Ok(Expr::Number(Rational::new(n, den))),
                    _ => self.error(&d, "`/` is only allowed between integer literals"),
                }
            }
            Tok::Ident(name) => {
                if self.alphabet.contains(&name) {
                    Ok(Expr::Var(name))
                } else {
                    Err(Error::UnknownVariable(name))
                }
            }
            Tok::LParen => {
                let inner = self.sum()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return self.error(&close, format!("expected `)`, found {}", close.tok.describe()));
                }
                Ok(inner)
            }
            other => self.error(&t, format!("expected an expression, found {}", other.describe())),
        }
    }
}

/// Parses `text` with variables drawn from `alphabet`.
pub fn parse_expr(text: &str, alphabet: &[String]) -> Result<Expr> {
    parse_expr_at(text, alphabet, Origin::default())
}

/// As [`parse_expr`], reporting positions relative to `origin`.
pub fn parse_expr_at(text: &str, alphabet: &[String], origin: Origin) -> Result<Expr> {
    let mut p = Parser {
        tokens: lex(text, origin)?,
        pos: 0,
        alphabet,
    };
    let e = p.sum()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.error(&t, format!("unexpected {}", t.tok.describe()));
    }
    Ok(e)
}

impl Expr {
    /// Expands into a polynomial over `vars`, which must contain every
    /// variable of the tree.
    pub fn lower(&self, vars: &[String]) -> Result<Poly> {
        Ok(match self {
            Expr::Number(q) => Poly::constant(vars, q.clone()),
            Expr::Var(name) => {
                let i = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                Poly::var(vars, i)
            }
            Expr::Neg(e) => e.lower(vars)?.neg(),
            Expr::Add(a, b) => a.lower(vars)?.add(&b.lower(vars)?),
            Expr::Sub(a, b) => a.lower(vars)?.sub(&b.lower(vars)?),
            Expr::Mul(a, b) => a.lower(vars)?.mul(&b.lower(vars)?),
            Expr::Pow(a, e) => a.lower(vars)?.pow(u32::from(*e), Rational::from_integer(1.into())),
        })
    }
}

/// Parses and expands a rational polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly> {
    parse_expr(text, vars)?.lower(vars)
}

pub fn parse_poly_at(text: &str, vars: &[String], origin: Origin) -> Result<Poly> {
    parse_expr_at(text, vars, origin)?.lower(vars)
}

/// Splits a polynomial over `vars` followed by the ring's generators into a
/// polynomial over `vars` with test-ring coefficients.
pub fn split_generators(p: &Poly, nvars: usize, ring: &Arc<TestRing>) -> Poly<RingElement> {
    let vars = p.vars()[..nvars].to_vec();
    let mut out = Poly::<RingElement>::zero(&vars);
    for (m, q) in p.terms() {
        let exps = m.exponents();
        let outer = Monomial::from_exponents(exps[..nvars].to_vec());
        let inner = Monomial::from_exponents(exps[nvars..].to_vec());
        out.add_term(outer, RingElement::monomial(ring, inner, q.clone()));
    }
    out
}

/// Parses a polynomial over `vars` whose coefficients may involve the
/// generators of `ring`.
pub fn parse_ring_poly_at(
    text: &str,
    vars: &[String],
    ring: &Arc<TestRing>,
    origin: Origin,
) -> Result<Poly<RingElement>> {
    for g in ring.generators() {
        if vars.contains(g) {
            return Err(Error::Parameter(format!(
                "`{g}` is both a variable and a ring generator"
            )));
        }
    }
    let mut all = vars.to_vec();
    all.extend(ring.generators().iter().cloned());
    let p = parse_poly_at(text, &all, origin)?;
    Ok(split_generators(&p, vars.len(), ring))
}

pub fn parse_ring_poly(text: &str, vars: &[String], ring: &Arc<TestRing>) -> Result<Poly<RingElement>> {
    parse_ring_poly_at(text, vars, ring, Origin::default())
}

/// A univariate polynomial over the test-ring as a series of the given
/// precision. Terms at or above the precision are dropped.
pub fn ring_poly_to_series(p: &Poly<RingElement>, ring: &Arc<TestRing>, precision: usize) -> PowerSeries {
    assert_eq!(p.vars().len(), 1, "series conversion needs one variable");
    let mut s = PowerSeries::zero(ring, precision);
    for (m, c) in p.terms() {
        let k = usize::from(m.exponent(0));
        if k < precision {
            s.set_coeff(k, c.clone());
        }
    }
    s
}

/// Parses a polynomial in `var` with coefficients in `ring` as a series.
pub fn parse_series(text: &str, var: &str, ring: &Arc<TestRing>, precision: usize) -> Result<PowerSeries> {
    parse_series_at(text, var, ring, precision, Origin::default())
}

pub fn parse_series_at(
    text: &str,
    var: &str,
    ring: &Arc<TestRing>,
    precision: usize,
    origin: Origin,
) -> Result<PowerSeries> {
    let p = parse_ring_poly_at(text, &[var.to_string()], ring, origin)?;
    Ok(ring_poly_to_series(&p, ring, precision))
}

/// A ring element written in the generators of `ring`.
pub fn parse_ring_element(text: &str, ring: &Arc<TestRing>) -> Result<RingElement> {
    parse_poly(text, ring.generators())?.to_ring_element(ring)
}

/// Parses a comma-separated list of monomial relations, such as `a^2, a*b`.
pub fn parse_relations(text: &str, generators: &[String], origin: Origin) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    let mut column = origin.column;
    for piece in text.split(',') {
        let at = Origin {
            line: origin.line,
            column,
        };
        column += piece.chars().count() + 1;
        if piece.trim().is_empty() {
            return Err(Error::Syntax {
                line: at.line,
                column: at.column,
                message: "empty relation".into(),
            });
        }
        let p = parse_poly_at(piece, generators, at)?;
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((m, _)), None) => out.push(m.clone()),
            _ => return Err(Error::NonMonomialRelation(piece.trim().to_string())),
        }
    }
    Ok(out)
}

/// Parses a comma-separated list of identifiers, rejecting repeats.
pub fn parse_names(text: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for piece in text.split(',') {
        let name = piece.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::Parameter(format!("`{name}` is not a valid name")));
        }
        if out.iter().any(|n| n == name) {
            return Err(Error::Parameter(format!("`{name}` is listed twice")));
        }
        out.push(name.to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::ratio;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn precedence() {
        let v = names(&["x"]);
        assert_eq!(parse_poly("-x^2", &v).unwrap().render(), "-x^2");
        assert_eq!(parse_poly("2*x^2*3", &v).unwrap().render(), "6*x^2");
        assert_eq!(parse_poly("1 - x - x", &v).unwrap().render(), "-2*x + 1");
        assert_eq!(parse_poly("(x+1)^2", &v).unwrap().render(), "x^2 + 2*x + 1");
        assert_eq!(parse_poly("--x", &v).unwrap().render(), "x");
    }

    #[test]
    fn literal_fractions() {
        let v = names(&["x"]);
        let p = parse_poly("3/6*x", &v).unwrap();
        assert_eq!(p.coeff(&Monomial::var(1, 0, 1)), Some(&ratio(1, 2)));
        assert!(matches!(parse_poly("x/2", &v), Err(Error::Syntax { column: 2, .. })));
        assert!(matches!(parse_poly("1/x", &v), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse_poly("1/0", &v), Err(Error::Syntax { .. })));
    }

    #[test]
    fn positions() {
        let v = names(&["x"]);
        assert_eq!(
            parse_poly("x +\n  * x", &v),
            Err(Error::Syntax {
                line: 2,
                column: 3,
                message: "expected an expression, found `*`".into()
            })
        );
        assert!(
            matches!(parse_poly("x ^ -1", &v), Err(Error::Syntax { message, .. }) if message == "negative exponent")
        );
        assert_eq!(parse_poly("x + q", &v), Err(Error::UnknownVariable("q".into())));
        assert!(matches!(parse_poly("x $", &v), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse_poly("(x", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("2 x", &v), Err(Error::Syntax { .. })));
    }

    #[test]
    fn relations() {
        let g = names(&["a", "b"]);
        let r = parse_relations("a^2, a*b,b^3", &g, Origin::default()).unwrap();
        assert_eq!(r.len(), 3);
        assert!(matches!(
            parse_relations("a^2 + b", &g, Origin::default()),
            Err(Error::NonMonomialRelation(_))
        ));
        assert!(parse_relations("a^2,", &g, Origin::default()).is_err());
    }
}
