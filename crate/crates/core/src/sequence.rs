//! Rules producing the elements (aₙ, bₙ) of `b₀ + K(aₙ/bₙ)`.
//!
//! A [`SequenceSpec`] is immutable and cheap to clone. Derived specs (even and
//! odd parts, unit-denominator forms) keep a handle on their parent and compute
//! elements on demand, so unbounded inputs give unbounded outputs.

use std::fmt;
use std::sync::Arc;

use crate::contraction;
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};
use crate::recurrence;
use crate::scalar::{Scalar, DEFAULT_PRECISION};

/// A single element: a fixed value or a formula evaluated at the index.
#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Value(Scalar),
    Formula(Expr),
}

impl Term {
    pub fn eval(&self, n: i64, precision: usize) -> Result<Scalar, EvalError> {
        match self {
            Term::Value(s) => Ok(s.clone()),
            Term::Formula(e) => e.eval(n, precision),
        }
    }

    fn depends_on_index(&self) -> bool {
        matches!(self, Term::Formula(e) if e.depends_on_index())
    }

    fn is_one(&self) -> bool {
        match self {
            Term::Value(s) => s.is_one(),
            Term::Formula(e) => !e.depends_on_index() && e.eval(0, DEFAULT_PRECISION).is_ok_and(|v| v.is_one()),
        }
    }

    /// DSL text for this element.
    pub fn to_dsl(&self) -> String {
        match self {
            Term::Formula(e) => e.to_string(),
            Term::Value(Scalar::Exact(z)) => Expr::from_exact(&z.re, &z.im).to_string(),
            Term::Value(s @ Scalar::Float(_)) => {
                let digits = crate::scalar::decimal_digits(s.precision().unwrap());
                let (re, im) = s.to_decimal(digits);
                let re = decimal_literal(&re);
                if s.is_real() {
                    re
                } else {
                    format!("({re})+({})*i", decimal_literal(&im))
                }
            }
        }
    }
}

impl From<Scalar> for Term {
    fn from(s: Scalar) -> Self {
        Term::Value(s)
    }
}

impl From<Expr> for Term {
    fn from(e: Expr) -> Self {
        Term::Formula(e)
    }
}

/// Turns `d.ddde±x` into a plain decimal literal the DSL accepts.
fn decimal_literal(sci: &str) -> String {
    if sci == "0" {
        return sci.to_string();
    }
    let (mant, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i64 = exp.parse().expect("exponent");
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let point = 1 + exp;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
    };
    if sign.is_empty() {
        body
    } else {
        format!("-({body})")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Numerators {
    /// `a_{2n} = even(n)` for n ≥ 1 and `a_{2n+1} = odd(n)` for n ≥ 0.
    Parity { even: Term, odd: Term },
    Periodic(Vec<Term>),
    List(Vec<Term>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Denominators {
    Unit,
    Formula(Term),
    Periodic(Vec<Term>),
    List(Vec<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecKind {
    ParityForm,
    Periodic,
    List,
    EvenPart,
    OddPart,
    UnitForm,
}

#[derive(Debug)]
enum Rule {
    Elements {
        b0: Term,
        numerators: Numerators,
        denominators: Denominators,
    },
    EvenPart(SequenceSpec),
    OddPart(SequenceSpec),
    UnitForm(SequenceSpec),
}

#[derive(Clone, Debug)]
pub struct SequenceSpec {
    rule: Arc<Rule>,
}

fn eval_at(term: &Term, position: i64, index: u64, precision: usize) -> Result<Scalar> {
    term.eval(position, precision).map_err(|e| Error::Evaluation {
        index,
        message: e.to_string(),
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SequenceSpec {
    pub fn new(b0: impl Into<Term>, numerators: Numerators, denominators: Denominators) -> Result<Self> {
        let empty = match &numerators {
            Numerators::Periodic(p) | Numerators::List(p) => p.is_empty(),
            Numerators::Parity { .. } => false,
        } || matches!(&denominators, Denominators::Periodic(p) | Denominators::List(p) if p.is_empty());
        if empty {
            return Err(Error::InvalidInput("element lists must not be empty".into()));
        }
        Ok(SequenceSpec {
            rule: Arc::new(Rule::Elements {
                b0: b0.into(),
                numerators,
                denominators,
            }),
        })
    }

    /// `K(aₙ/1)` with aₙ cycling through `pattern`.
    pub fn periodic(pattern: Vec<Scalar>) -> Result<Self> {
        Self::new(
            Scalar::zero(),
            Numerators::Periodic(pattern.into_iter().map(Term::Value).collect()),
            Denominators::Unit,
        )
    }

    /// Finite `K(aₙ/1)` with the given numerators.
    pub fn list(elements: Vec<Scalar>) -> Result<Self> {
        Self::new(
            Scalar::zero(),
            Numerators::List(elements.into_iter().map(Term::Value).collect()),
            Denominators::Unit,
        )
    }

    /// Finite `b₀ + K(aₙ/bₙ)` with explicit elements.
    pub fn from_elements(b0: Scalar, a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidInput(format!(
                "{} numerators but {} denominators",
                a.len(),
                b.len()
            )));
        }
        Self::new(
            b0,
            Numerators::List(a.into_iter().map(Term::Value).collect()),
            Denominators::List(b.into_iter().map(Term::Value).collect()),
        )
    }

    /// `K(aₙ/1)` with `a_{2n} = even(n)`, `a_{2n+1} = odd(n)`.
    pub fn parity(even: Expr, odd: Expr) -> Self {
        Self::new(
            Scalar::zero(),
            Numerators::Parity {
                even: Term::Formula(even),
                odd: Term::Formula(odd),
            },
            Denominators::Unit,
        )
        .expect("parity specs are never empty")
    }

    pub(crate) fn derived_even(parent: SequenceSpec) -> Self {
        SequenceSpec {
            rule: Arc::new(Rule::EvenPart(parent)),
        }
    }

    pub(crate) fn derived_odd(parent: SequenceSpec) -> Self {
        SequenceSpec {
            rule: Arc::new(Rule::OddPart(parent)),
        }
    }

    pub(crate) fn derived_unit(parent: SequenceSpec) -> Self {
        SequenceSpec {
            rule: Arc::new(Rule::UnitForm(parent)),
        }
    }

    pub fn kind(&self) -> SpecKind {
        match &*self.rule {
            Rule::Elements { numerators, .. } => match numerators {
                Numerators::Parity { .. } => SpecKind::ParityForm,
                Numerators::Periodic(_) => SpecKind::Periodic,
                Numerators::List(_) => SpecKind::List,
            },
            Rule::EvenPart(_) => SpecKind::EvenPart,
            Rule::OddPart(_) => SpecKind::OddPart,
            Rule::UnitForm(_) => SpecKind::UnitForm,
        }
    }

    /// Element rules, for specs that are not derived from another spec.
    pub fn elements(&self) -> Option<(&Term, &Numerators, &Denominators)> {
        match &*self.rule {
            Rule::Elements {
                b0,
                numerators,
                denominators,
            } => Some((b0, numerators, denominators)),
            _ => None,
        }
    }

    /// Number of elements, or `None` for an unbounded spec.
    pub fn len(&self) -> Option<u64> {
        match &*self.rule {
            Rule::Elements {
                numerators,
                denominators,
                ..
            } => {
                let a = match numerators {
                    Numerators::List(v) => Some(v.len() as u64),
                    _ => None,
                };
                let b = match denominators {
                    Denominators::List(v) => Some(v.len() as u64),
                    _ => None,
                };
                match (a, b) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                }
            }
            Rule::EvenPart(p) => p.len().map(|l| l / 2),
            Rule::OddPart(p) => p.len().map(|l| l.saturating_sub(1) / 2),
            Rule::UnitForm(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Smallest p such that (aₙ, bₙ) = (a_{n+p}, b_{n+p}) for all n ≥ 1, when
    /// that is known from the rule's form.
    pub fn period(&self) -> Option<u64> {
        let Rule::Elements {
            numerators,
            denominators,
            ..
        } = &*self.rule
        else {
            return None;
        };
        let a = match numerators {
            Numerators::Periodic(v) if v.iter().all(|t| !t.depends_on_index()) => v.len() as u64,
            Numerators::Parity { even, odd } if !even.depends_on_index() && !odd.depends_on_index() => 2,
            _ => return None,
        };
        let b = match denominators {
            Denominators::Unit => 1,
            Denominators::Formula(t) if !t.depends_on_index() => 1,
            Denominators::Periodic(v) if v.iter().all(|t| !t.depends_on_index()) => v.len() as u64,
            _ => return None,
        };
        Some(a / gcd(a, b) * b)
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::OutOfRange { index: 0, len: self.len().unwrap_or(u64::MAX) });
        }
        match self.len() {
            Some(len) if n > len => Err(Error::OutOfRange { index: n, len }),
            _ => Ok(()),
        }
    }

    pub fn b0(&self, precision: usize) -> Result<Scalar> {
        match &*self.rule {
            Rule::Elements { b0, .. } => eval_at(b0, 0, 0, precision),
            Rule::EvenPart(p) | Rule::UnitForm(p) => p.b0(precision),
            Rule::OddPart(p) => contraction::odd_constant(p, precision),
        }
    }

    /// Partial numerator aₙ (n ≥ 1). A zero value is an error.
    pub fn numerator(&self, n: u64, precision: usize) -> Result<Scalar> {
        Ok(self.term(n, precision)?.0)
    }

    /// Partial denominator bₙ (n ≥ 1).
    pub fn denominator(&self, n: u64, precision: usize) -> Result<Scalar> {
        self.check_index(n)?;
        match &*self.rule {
            Rule::Elements { denominators, .. } => self.raw_denominator(denominators, n, precision),
            _ => Ok(self.term(n, precision)?.1),
        }
    }

    fn raw_denominator(&self, d: &Denominators, n: u64, precision: usize) -> Result<Scalar> {
        match d {
            Denominators::Unit => Ok(Scalar::one()),
            Denominators::Formula(t) => eval_at(t, n as i64, n, precision),
            Denominators::Periodic(v) => eval_at(&v[((n - 1) % v.len() as u64) as usize], n as i64, n, precision),
            Denominators::List(v) => eval_at(&v[(n - 1) as usize], n as i64, n, precision),
        }
    }

    /// Element pair (aₙ, bₙ), n ≥ 1. Float fallbacks use `precision` bits.
    pub fn term(&self, n: u64, precision: usize) -> Result<(Scalar, Scalar)> {
        self.check_index(n)?;
        let (a, b) = match &*self.rule {
            Rule::Elements {
                numerators,
                denominators,
                ..
            } => {
                let a = match numerators {
                    Numerators::Parity { even, odd } => {
                        let k = (n / 2) as i64;
                        if n.is_multiple_of(2) {
                            eval_at(even, k, n, precision)?
                        } else {
                            eval_at(odd, k, n, precision)?
                        }
                    }
                    Numerators::Periodic(v) => {
                        eval_at(&v[((n - 1) % v.len() as u64) as usize], n as i64, n, precision)?
                    }
                    Numerators::List(v) => eval_at(&v[(n - 1) as usize], n as i64, n, precision)?,
                };
                (a, self.raw_denominator(denominators, n, precision)?)
            }
            Rule::EvenPart(p) => contraction::even_element(p, n, precision)?,
            Rule::OddPart(p) => contraction::odd_element(p, n, precision)?,
            Rule::UnitForm(p) => (recurrence::unit_element(p, n, precision)?, Scalar::one()),
        };
        if a.is_zero() {
            return Err(Error::ZeroPartialNumerator { index: n });
        }
        Ok((a, b))
    }

    /// Checks that bₙ = 1 for 1 ≤ n ≤ `upto` (bounded by the spec's length).
    pub fn require_unit_denominators(&self, upto: u64, precision: usize) -> Result<()> {
        if let Rule::Elements { denominators, .. } = &*self.rule {
            match denominators {
                Denominators::Unit => return Ok(()),
                Denominators::Formula(t) if t.is_one() => return Ok(()),
                _ => {}
            }
        }
        if let Rule::UnitForm(_) = &*self.rule {
            return Ok(());
        }
        let upto = self.len().map_or(upto, |l| l.min(upto));
        for n in 1..=upto {
            if !self.denominator(n, precision)?.is_one() {
                return Err(Error::WrongForm(format!(
                    "expected unit partial denominators, b_{n} is not 1"
                )));
            }
        }
        Ok(())
    }

    /// Canonical DSL text; parsing it back gives an element-wise equal spec.
    pub fn to_dsl(&self) -> Option<String> {
        let (b0, numerators, denominators) = self.elements()?;
        let mut out = String::new();
        if !matches!(b0, Term::Value(v) if v.is_zero()) {
            out.push_str(&format!("b0: {};\n", b0.to_dsl()));
        }
        match denominators {
            Denominators::Unit => {}
            Denominators::Formula(t) => out.push_str(&format!("b: {};\n", t.to_dsl())),
            Denominators::Periodic(v) | Denominators::List(v) => {
                out.push_str(&format!("b: {};\n", list_dsl(v)));
            }
        }
        match numerators {
            Numerators::Parity { even, odd } => {
                out.push_str(&format!("even: {};\nodd: {};\n", even.to_dsl(), odd.to_dsl()));
            }
            Numerators::Periodic(v) => out.push_str(&format!("period: {};\n", list_dsl(v))),
            Numerators::List(v) => out.push_str(&format!("list: {};\n", list_dsl(v))),
        }
        Some(out)
    }
}

fn list_dsl(v: &[Term]) -> String {
    let items: Vec<String> = v.iter().map(Term::to_dsl).collect();
    format!("[{}]", items.join(", "))
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.rule {
            Rule::Elements { .. } => f.write_str(self.to_dsl().unwrap().trim_end()),
            Rule::EvenPart(p) => write!(f, "even-part({p})"),
            Rule::OddPart(p) => write!(f, "odd-part({p})"),
            Rule::UnitForm(p) => write!(f, "unit-form({p})"),
        }
    }
}
