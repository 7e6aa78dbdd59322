//! Parser for the `.cfspec` sequence description language.
//!
//! ```text
//! spec    := clause+ ;
//! clause  := ("even" | "odd" | "b" | "b0" | "list" | "period") ":" body ";" ;
//! body    := expr | "[" expr ("," expr)* "]" ;
//! expr    := sum ;
//! sum     := product (("+" | "-") product)* ;
//! product := unary (("*" | "/") unary)* ;
//! unary   := "-" unary | power ;
//! power   := atom ("^" exponent)? ;
//! exponent:= "-" exponent | power ;
//! atom    := number | "i" | "n" | "(" expr ")" | ("sqrt" | "abs") "(" expr ")" ;
//! ```
//!
//! `even: E` gives a_{2n} = E(n) for n ≥ 1 and `odd: O` gives a_{2n+1} = O(n)
//! for n ≥ 0. `b: F` sets bₙ = F(n) (a bracketed body cycles through its
//! items), `b0` sets the constant term. `list` and `period` give literal and
//! cyclic numerators. `#` starts a comment that runs to the end of the line.

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::{Error, ParseError, Position, Result};
use crate::expr::Expr;
use crate::scalar::{Scalar, DEFAULT_PRECISION};
use crate::sequence::{Denominators, Numerators, SequenceSpec, Term};

/// Maximum nesting of parentheses and unary operators.
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(RBig),
    Ident(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Position,
}

fn err<T>(pos: Position, message: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError {
        position: pos,
        message: message.into(),
    })
}

fn tokenize(text: &str) -> std::result::Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
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
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut int = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                int.push(d);
                chars.next();
                column += 1;
            }
            let mut frac = String::new();
            if chars.peek() == Some(&'.') {
                chars.next();
                column += 1;
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    frac.push(d);
                    chars.next();
                    column += 1;
                }
                if frac.is_empty() {
                    return err(Position { line, column }, "expected digits after decimal point");
                }
            }
            let digits: IBig = format!("{int}{frac}").parse().expect("ascii digits");
            let scale = UBig::from(10u8).pow(frac.len());
            out.push(Token {
                tok: Tok::Number(RBig::from_parts(digits, scale)),
                pos,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                ident.push(d);
                chars.next();
                column += 1;
            }
            out.push(Token {
                tok: Tok::Ident(ident),
                pos,
            });
            continue;
        }
        if "+-*/^()[],;:".contains(c) {
            chars.next();
            column += 1;
            out.push(Token { tok: Tok::Sym(c), pos });
            continue;
        }
        return err(pos, format!("unexpected character {c:?}"));
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Position { line, column },
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    depth: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Number(q) => format!("number {q}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::Eof => "end of input".to_string(),
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let t = self.peek();
            err(t.pos, format!("expected '{c}', found {}", describe(&t.tok)))
        }
    }

    fn enter(&mut self) -> std::result::Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return err(self.peek().pos, "expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn product(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        if self.eat('-') {
            self.enter()?;
            let e = Expr::Neg(Box::new(self.unary()?));
            self.depth -= 1;
            return Ok(e);
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> std::result::Result<Expr, ParseError> {
        self.enter()?;
        let e = if self.eat('-') {
            Expr::Neg(Box::new(self.exponent()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Number(q) => Ok(Expr::Number(q)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(ref s) => match s.as_str() {
                "n" => Ok(Expr::Index),
                "i" => Ok(Expr::Imag),
                "sqrt" | "abs" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(if s == "sqrt" {
                        Expr::Sqrt(Box::new(e))
                    } else {
                        Expr::Abs(Box::new(e))
                    })
                }
                _ => err(t.pos, format!("unknown identifier '{s}'")),
            },
            other => err(t.pos, format!("expected an expression, found {}", describe(&other))),
        }
    }
}

#[derive(Debug)]
enum Body {
    Expr(Expr),
    List(Vec<Expr>),
}

struct Clause {
    keyword: String,
    pos: Position,
    body: Body,
}

impl Parser {
    fn clause(&mut self) -> std::result::Result<Clause, ParseError> {
        let t = self.bump();
        let keyword = match &t.tok {
            Tok::Ident(s) if ["even", "odd", "b", "b0", "list", "period"].contains(&s.as_str()) => s.clone(),
            other => {
                return err(
                    t.pos,
                    format!(
                        "expected a clause keyword (even, odd, b, b0, list, period), found {}",
                        describe(other)
                    ),
                )
            }
        };
        self.expect(':')?;
        let body = if self.eat('[') {
            let mut items = vec![self.literal()?];
            while self.eat(',') {
                items.push(self.literal()?);
            }
            self.expect(']')?;
            Body::List(items)
        } else {
            Body::Expr(self.expr()?)
        };
        self.expect(';')?;
        Ok(Clause {
            keyword,
            pos: t.pos,
            body,
        })
    }

    fn literal(&mut self) -> std::result::Result<Expr, ParseError> {
        let pos = self.peek().pos;
        let e = self.expr()?;
        if e.depends_on_index() {
            return err(pos, "list items must not depend on n");
        }
        Ok(e)
    }
}

fn expect_expr(c: Clause) -> std::result::Result<Expr, ParseError> {
    match c.body {
        Body::Expr(e) => Ok(e),
        Body::List(_) => err(c.pos, format!("'{}' takes an expression, not a list", c.keyword)),
    }
}

fn expect_list(c: Clause) -> std::result::Result<Vec<Term>, ParseError> {
    match c.body {
        Body::List(items) => Ok(items.into_iter().map(Term::Formula).collect()),
        Body::Expr(_) => err(c.pos, format!("'{}' takes a bracketed list", c.keyword)),
    }
}

/// Parses a single expression (used for criterion parameters).
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        at: 0,
        depth: 0,
    };
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::Eof {
        return Err(ParseError {
            position: t.pos,
            message: format!("unexpected {} after expression", describe(&t.tok)),
        }
        .into());
    }
    Ok(e)
}

/// Parses DSL text into a sequence spec.
pub fn parse_spec(text: &str) -> Result<SequenceSpec> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        at: 0,
        depth: 0,
    };
    let mut clauses: Vec<Clause> = Vec::new();
    while p.peek().tok != Tok::Eof {
        let c = p.clause()?;
        if let Some(prev) = clauses.iter().find(|x| x.keyword == c.keyword) {
            return Err(ParseError {
                position: c.pos,
                message: format!("duplicate '{}' clause (first at {})", c.keyword, prev.pos),
            }
            .into());
        }
        clauses.push(c);
    }
    if clauses.is_empty() {
        return Err(ParseError {
            position: p.peek().pos,
            message: "empty spec: at least one clause is required".into(),
        }
        .into());
    }

    let mut take = |k: &str| clauses.iter().position(|c| c.keyword == k).map(|i| clauses.remove(i));
    let even = take("even");
    let odd = take("odd");
    let list = take("list");
    let period = take("period");
    let b = take("b");
    let b0 = take("b0");

    let parity = even.is_some() || odd.is_some();
    let forms = [parity, list.is_some(), period.is_some()]
        .iter()
        .filter(|x| **x)
        .count();
    let anchor = [&even, &odd, &list, &period, &b, &b0]
        .into_iter()
        .flatten()
        .map(|c| c.pos)
        .max_by_key(|p| (p.line, p.column))
        .unwrap();
    if forms > 1 {
        return Err(ParseError {
            position: anchor,
            message: "conflicting clauses: use exactly one of even/odd, list, or period".into(),
        }
        .into());
    }
    if forms == 0 {
        return Err(ParseError {
            position: anchor,
            message: "no partial numerators: add even/odd, list, or period".into(),
        }
        .into());
    }

    let numerators = match (even, odd, list, period) {
        (Some(e), Some(o), None, None) => Numerators::Parity {
            even: Term::Formula(expect_expr(e)?),
            odd: Term::Formula(expect_expr(o)?),
        },
        (Some(c), None, None, None) | (None, Some(c), None, None) => {
            let missing = if c.keyword == "even" { "odd" } else { "even" };
            return Err(ParseError {
                position: c.pos,
                message: format!("'{}' needs a matching '{missing}' clause", c.keyword),
            }
            .into());
        }
        (None, None, Some(l), None) => Numerators::List(expect_list(l)?),
        (None, None, None, Some(p)) => Numerators::Periodic(expect_list(p)?),
        _ => unreachable!(),
    };
    let denominators = match b {
        None => Denominators::Unit,
        Some(c) => match c.body {
            Body::Expr(e) => Denominators::Formula(Term::Formula(e)),
            Body::List(items) => Denominators::Periodic(items.into_iter().map(Term::Formula).collect()),
        },
    };
    let b0 = match b0 {
        None => Term::Value(Scalar::zero()),
        Some(c) => {
            let pos = c.pos;
            let e = expect_expr(c)?;
            if e.depends_on_index() {
                return Err(ParseError {
                    position: pos,
                    message: "'b0' must not depend on n".into(),
                }
                .into());
            }
            Term::Formula(e)
        }
    };
    SequenceSpec::new(b0, numerators, denominators)
}

/// (aₙ, bₙ) at the default precision: exact when the rule only uses field
/// operations on rational literals.
pub fn eval_term(spec: &SequenceSpec, n: u64) -> Result<(Scalar, Scalar)> {
    spec.term(n, DEFAULT_PRECISION)
}

/// Like [`eval_term`] with an explicit float precision for irrational elements.
pub fn eval_term_with_precision(spec: &SequenceSpec, n: u64, precision: usize) -> Result<(Scalar, Scalar)> {
    if precision < crate::scalar::MIN_PRECISION {
        return Err(Error::InvalidParameter(format!("precision {precision} is below 64 bits")));
    }
    spec.term(n, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::SpecKind;

    fn pos_of(text: &str) -> Position {
        match parse_spec(text) {
            Err(Error::Parse(e)) => e.position,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn example_parity_spec() {
        let s = parse_spec("even: -36/23; odd: 1/23;").unwrap();
        assert_eq!(s.kind(), SpecKind::ParityForm);
        assert_eq!(eval_term(&s, 1).unwrap().0, Scalar::ratio(1, 23));
        assert_eq!(eval_term(&s, 2).unwrap().0, Scalar::ratio(-36, 23));
        assert_eq!(eval_term(&s, 3).unwrap().0, Scalar::ratio(1, 23));
        assert_eq!(s.period(), Some(2));
    }

    #[test]
    fn growing_parity_spec() {
        let s = parse_spec("odd: 4*(n+1); even: 25*n;").unwrap();
        let a: Vec<Scalar> = (1..=4).map(|n| eval_term(&s, n).unwrap().0).collect();
        assert_eq!(a, [4, 25, 8, 50].map(Scalar::from).to_vec());
        let s = parse_spec("even: 25*n; odd: 4*(n+1);").unwrap();
        assert_eq!(eval_term(&s, 4).unwrap().0, Scalar::from(50));
        assert_eq!(eval_term(&s, 8).unwrap().0, Scalar::from(100));
    }

    #[test]
    fn periodic_spec() {
        let s = parse_spec("period: [1/4];").unwrap();
        assert_eq!(eval_term(&s, 1_000_000).unwrap(), (Scalar::ratio(1, 4), Scalar::one()));
        let s = parse_spec("period:[0.3];").unwrap();
        assert_eq!(eval_term(&s, 7).unwrap().0, Scalar::ratio(3, 10));
    }

    #[test]
    fn irrational_terms_use_floats() {
        let s = parse_spec("even: sqrt(2)*n; odd: 1;").unwrap();
        let (a2, _) = eval_term(&s, 2).unwrap();
        assert!(!a2.is_exact());
        assert_eq!(a2.precision(), Some(DEFAULT_PRECISION));
        let (a3, _) = eval_term(&s, 3).unwrap();
        assert!(a3.is_exact());
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        let e = parse_expr("-2^2").unwrap();
        assert_eq!(e.eval(0, 64).unwrap(), Scalar::from(-4));
        let e = parse_expr("2^-1").unwrap();
        assert_eq!(e.eval(0, 64).unwrap(), Scalar::ratio(1, 2));
        let e = parse_expr("2^3^2").unwrap();
        assert_eq!(e.eval(0, 64).unwrap(), Scalar::from(512));
        let e = parse_expr("(3+4*i)*i").unwrap();
        assert_eq!(e.eval(0, 64).unwrap(), Scalar::exact(RBig::from(-4), RBig::from(3)));
    }

    #[test]
    fn denominators_and_constant() {
        let s = parse_spec("b0: 1/2; b: 2*n; period: [1];").unwrap();
        assert_eq!(s.b0(128).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(eval_term(&s, 3).unwrap().1, Scalar::from(6));
        let s = parse_spec("b: [1, 2]; list: [1, 1, 1];").unwrap();
        assert_eq!(eval_term(&s, 3).unwrap().1, Scalar::one());
        assert_eq!(eval_term(&s, 2).unwrap().1, Scalar::from(2));
    }

    #[test]
    fn zero_numerator_reported_lazily() {
        let s = parse_spec("even: n-2; odd: 1;").unwrap();
        assert!(eval_term(&s, 2).is_ok());
        assert_eq!(eval_term(&s, 4), Err(Error::ZeroPartialNumerator { index: 4 }));
    }

    #[test]
    fn positioned_errors() {
        assert_eq!(pos_of("even: 1;\nodd: 2 +;"), Position { line: 2, column: 9 });
        assert_eq!(pos_of("period: [1/4]"), Position { line: 1, column: 14 });
        assert_eq!(pos_of("even: 1; odd: 1; list: [1];"), Position { line: 1, column: 18 });
        assert_eq!(pos_of("even: 1; even: 2; odd: 1;"), Position { line: 1, column: 10 });
        assert_eq!(pos_of("foo: 1;"), Position { line: 1, column: 1 });
        assert_eq!(pos_of("even: 1;"), Position { line: 1, column: 1 });
        assert_eq!(pos_of("list: [n];"), Position { line: 1, column: 8 });
        assert_eq!(pos_of("period: [1.];"), Position { line: 1, column: 12 });
        assert_eq!(pos_of("period: [$];"), Position { line: 1, column: 10 });
        assert_eq!(pos_of(""), Position { line: 1, column: 1 });
        assert_eq!(pos_of("b0: n; period: [1];"), Position { line: 1, column: 1 });
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = format!("period: [{}1{}];", "(".repeat(10_000), ")".repeat(10_000));
        assert!(matches!(parse_spec(&text), Err(Error::Parse(_))));
        let text = format!("period: [{}1];", "-".repeat(10_000));
        assert!(matches!(parse_spec(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn comments_are_ignored() {
        let s = parse_spec("# Worpitzky boundary\nperiod: [1/4]; # quarter\n").unwrap();
        assert_eq!(eval_term(&s, 2).unwrap().0, Scalar::ratio(1, 4));
    }
}
