//! Closed-form expressions in the index variable `n`.

use std::fmt;

use dashu_base::Sign;
use dashu_ratio::RBig;

use crate::real::{Real, ENCLOSURE_PRECISION};
use crate::scalar::Scalar;

/// Largest accepted integer exponent magnitude.
pub const MAX_EXPONENT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(RBig),
    Imag,
    Index,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Abs(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    DivisionByZero,
    NonIntegerExponent,
    ExponentTooLarge,
    NotReal,
    NegativeSqrt,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalError::DivisionByZero => "division by zero",
            EvalError::NonIntegerExponent => "exponent is not an integer",
            EvalError::ExponentTooLarge => "exponent magnitude exceeds 10000",
            EvalError::NotReal => "expression is not real-valued",
            EvalError::NegativeSqrt => "square root of a negative number in a real parameter",
        })
    }
}

impl std::error::Error for EvalError {}

fn integer_exponent(e: &Real) -> Result<i64, EvalError> {
    let q = e.as_exact().ok_or(EvalError::NonIntegerExponent)?;
    if !q.denominator().is_one() {
        return Err(EvalError::NonIntegerExponent);
    }
    let k = i64::try_from(q.numerator().clone()).map_err(|_| EvalError::ExponentTooLarge)?;
    if k.unsigned_abs() > MAX_EXPONENT {
        return Err(EvalError::ExponentTooLarge);
    }
    Ok(k)
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        if v < 0 {
            Expr::Neg(Box::new(Expr::Number(RBig::from(-v))))
        } else {
            Expr::Number(RBig::from(v))
        }
    }

    pub fn rational(q: RBig) -> Expr {
        if q.sign() == Sign::Negative {
            Expr::Neg(Box::new(Expr::Number(-q)))
        } else {
            Expr::Number(q)
        }
    }

    /// Literal expression for an exact complex value.
    pub fn from_exact(re: &RBig, im: &RBig) -> Expr {
        if im.is_zero() {
            return Expr::rational(re.clone());
        }
        let imag = if im.is_one() {
            Expr::Imag
        } else {
            Expr::Mul(Box::new(Expr::rational(im.clone())), Box::new(Expr::Imag))
        };
        if re.is_zero() {
            imag
        } else {
            Expr::Add(Box::new(Expr::rational(re.clone())), Box::new(imag))
        }
    }

    pub fn depends_on_index(&self) -> bool {
        match self {
            Expr::Index => true,
            Expr::Number(_) | Expr::Imag => false,
            Expr::Neg(a) | Expr::Sqrt(a) | Expr::Abs(a) => a.depends_on_index(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_index() || b.depends_on_index()
            }
        }
    }

    /// Complex value at index `n`. Field operations on rational literals stay
    /// exact; `sqrt`/`abs` fall back to big floats of `precision` bits when the
    /// result is irrational.
    pub fn eval(&self, n: i64, precision: usize) -> Result<Scalar, EvalError> {
        Ok(match self {
            Expr::Number(q) => Scalar::rational(q.clone()),
            Expr::Imag => Scalar::imaginary_unit(),
            Expr::Index => Scalar::from(n),
            Expr::Neg(a) => -a.eval(n, precision)?,
            Expr::Add(a, b) => a.eval(n, precision)? + b.eval(n, precision)?,
            Expr::Sub(a, b) => a.eval(n, precision)? - b.eval(n, precision)?,
            Expr::Mul(a, b) => a.eval(n, precision)? * b.eval(n, precision)?,
            Expr::Div(a, b) => {
                let d = b.eval(n, precision)?;
                a.eval(n, precision)?
                    .checked_div(&d)
                    .ok_or(EvalError::DivisionByZero)?
            }
            Expr::Pow(a, e) => {
                let k = integer_exponent(&e.eval_real(n)?)?;
                a.eval(n, precision)?.powi(k).ok_or(EvalError::DivisionByZero)?
            }
            Expr::Sqrt(a) => a.eval(n, precision)?.sqrt(precision),
            Expr::Abs(a) => a.eval(n, precision)?.modulus(precision),
        })
    }

    /// Certified real value at index `n`, for parameter sequences.
    pub fn eval_real(&self, n: i64) -> Result<Real, EvalError> {
        Ok(match self {
            Expr::Number(q) => Real::Exact(q.clone()),
            Expr::Imag => return Err(EvalError::NotReal),
            Expr::Index => Real::from_int(n),
            Expr::Neg(a) => a.eval_real(n)?.neg(),
            Expr::Add(a, b) => a.eval_real(n)?.add(&b.eval_real(n)?),
            Expr::Sub(a, b) => a.eval_real(n)?.sub(&b.eval_real(n)?),
            Expr::Mul(a, b) => a.eval_real(n)?.mul(&b.eval_real(n)?),
            Expr::Div(a, b) => a
                .eval_real(n)?
                .div(&b.eval_real(n)?)
                .ok_or(EvalError::DivisionByZero)?,
            Expr::Pow(a, e) => {
                let k = integer_exponent(&e.eval_real(n)?)?;
                let base = a.eval_real(n)?;
                let mut acc = Real::one();
                for _ in 0..k.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                if k < 0 {
                    Real::one().div(&acc).ok_or(EvalError::DivisionByZero)?
                } else {
                    acc
                }
            }
            Expr::Sqrt(a) => a.eval_real(n)?.sqrt().ok_or(EvalError::NegativeSqrt)?,
            Expr::Abs(a) => match a.eval_real(n) {
                Ok(x) => x.max(&x.neg()),
                Err(EvalError::NotReal) => Real::modulus(&a.eval(n, ENCLOSURE_PRECISION)?),
                Err(e) => return Err(e),
            },
        })
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Number(q) if !q.denominator().is_one() => 2,
            Expr::Neg(_) => 3,
            Expr::Number(q) if q.sign() == Sign::Negative => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Number(q) => write!(f, "{q}"),
            Expr::Imag => f.write_str("i"),
            Expr::Index => f.write_str("n"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 4)
            }
            Expr::Add(a, b) => binary(f, a, "+", b, 1),
            Expr::Sub(a, b) => binary(f, a, "-", b, 1),
            Expr::Mul(a, b) => binary(f, a, "*", b, 2),
            Expr::Div(a, b) => binary(f, a, "/", b, 2),
            Expr::Pow(a, e) => {
                a.write_at(f, 5)?;
                f.write_str("^")?;
                e.write_at(f, 4)
            }
            Expr::Sqrt(a) => {
                f.write_str("sqrt(")?;
                a.write_at(f, 0)?;
                f.write_str(")")
            }
            Expr::Abs(a) => {
                f.write_str("abs(")?;
                a.write_at(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, level: u8) -> fmt::Result {
    a.write_at(f, level)?;
    f.write_str(op)?;
    b.write_at(f, level + 1)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: i64) -> Box<Expr> {
        Box::new(Expr::int(v))
    }

    #[test]
    fn evaluates_field_operations_exactly() {
        // 4*(n+1) at n = 2
        let e = Expr::Mul(num(4), Box::new(Expr::Add(Box::new(Expr::Index), num(1))));
        assert_eq!(e.eval(2, 128).unwrap(), Scalar::from(12));
        assert!(!Expr::int(3).depends_on_index());
        assert!(e.depends_on_index());
    }

    #[test]
    fn exponent_rules() {
        let e = Expr::Pow(num(2), Box::new(Expr::Index));
        assert_eq!(e.eval(10, 128).unwrap(), Scalar::from(1024));
        let bad = Expr::Pow(num(2), Box::new(Expr::Div(num(1), num(2))));
        assert_eq!(bad.eval(1, 128), Err(EvalError::NonIntegerExponent));
        let huge = Expr::Pow(num(2), num(100_000));
        assert_eq!(huge.eval(1, 128), Err(EvalError::ExponentTooLarge));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let e = Expr::Div(num(1), Box::new(Expr::Sub(Box::new(Expr::Index), num(3))));
        assert_eq!(e.eval(3, 128), Err(EvalError::DivisionByZero));
        assert!(e.eval(4, 128).is_ok());
    }

    #[test]
    fn real_evaluation_rejects_imaginary() {
        assert_eq!(Expr::Imag.eval_real(1).unwrap_err(), EvalError::NotReal);
        let abs = Expr::Abs(Box::new(Expr::Add(num(3), Box::new(Expr::Mul(num(4), Box::new(Expr::Imag))))));
        assert_eq!(abs.eval_real(1).unwrap().as_exact(), Some(&RBig::from(5)));
        assert_eq!(Expr::Sqrt(num(-1)).eval_real(1).unwrap_err(), EvalError::NegativeSqrt);
    }

    #[test]
    fn printing_respects_precedence() {
        let e = Expr::Neg(Box::new(Expr::Pow(num(2), num(2))));
        assert_eq!(e.to_string(), "-2^2");
        let e = Expr::Pow(Box::new(Expr::Neg(num(2))), num(2));
        assert_eq!(e.to_string(), "(-2)^2");
        let e = Expr::Sub(num(1), Box::new(Expr::Sub(num(2), num(3))));
        assert_eq!(e.to_string(), "1-(2-3)");
        let e = Expr::rational(RBig::from(-36) / RBig::from(23));
        assert_eq!(e.to_string(), "-(36/23)");
        let e = Expr::from_exact(&RBig::from(1), &RBig::from(-2));
        assert_eq!(e.eval(0, 64).unwrap(), Scalar::exact(RBig::ONE, RBig::from(-2)));
    }
}
