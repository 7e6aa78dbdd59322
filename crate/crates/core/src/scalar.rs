//! Complex scalars over two interchangeable backends.
//!
//! [`Scalar::Exact`] holds a pair of arbitrary-size rationals and never rounds.
//! [`Scalar::Float`] holds a pair of binary big floats; every value carries its
//! own precision and operations run at the larger precision of the operands.
//! Mixing the two promotes the exact operand to the float's precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_base::{Abs, BitTest, Sign, SquareRoot, UnsignedAbs};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use dashu_ratio::RBig;
use num_complex::Complex;

use crate::error::{Error, Result};

/// Binary big float with round-half-even semantics.
pub type Float = FBig<HalfEven>;

pub const DEFAULT_PRECISION: usize = 128;
pub const MIN_PRECISION: usize = 64;

/// Which arithmetic a recurrence run is carried out in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float { precision: usize },
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Float {
            precision: DEFAULT_PRECISION,
        }
    }
}

impl Backend {
    pub fn float(precision: usize) -> Result<Self> {
        if precision < MIN_PRECISION {
            return Err(Error::InvalidParameter(format!(
                "precision must be at least {MIN_PRECISION} bits, got {precision}"
            )));
        }
        Ok(Backend::Float { precision })
    }

    /// Precision used for transcendental fallbacks while generating elements.
    pub fn working_precision(&self) -> usize {
        match self {
            Backend::Exact => DEFAULT_PRECISION,
            Backend::Float { precision } => *precision,
        }
    }

    /// Brings an element into this backend. Exact runs reject float elements.
    pub fn convert(&self, value: &Scalar, index: u64) -> Result<Scalar> {
        match (self, value) {
            (Backend::Exact, Scalar::Exact(_)) => Ok(value.clone()),
            (Backend::Exact, Scalar::Float(_)) => Err(Error::NotRational { index }),
            (Backend::Float { precision }, _) => Ok(value.to_float(*precision)),
        }
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.convert(&Scalar::from(v), 0)
            .expect("integers are exact")
    }

    pub fn label(&self) -> String {
        match self {
            Backend::Exact => "exact-rational".to_string(),
            Backend::Float { precision } => format!("big-float({precision})"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Complex<RBig>),
    Float(Complex<Float>),
}

pub(crate) fn float_from_rational(q: &RBig, precision: usize) -> Float {
    q.to_float::<HalfEven, 2>(precision).value()
}

pub(crate) fn is_zero_float<R: dashu_float::round::Round>(x: &FBig<R>) -> bool {
    x.repr().significand().is_zero()
}

pub(crate) fn float_zero(precision: usize) -> Float {
    Float::ZERO.with_precision(precision).value()
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn exact_sqrt(q: &RBig) -> Option<RBig> {
    if q.sign() == Sign::Negative {
        return None;
    }
    let num = q.numerator().unsigned_abs();
    let den = q.denominator();
    let rn = num.sqrt();
    let rd = den.sqrt();
    if &rn * &rn == num && &rd * &rd == *den {
        Some(RBig::from_parts(IBig::from(rn), rd))
    } else {
        None
    }
}

fn float_sqrt(x: &Float) -> Float {
    if x.sign() == Sign::Negative || is_zero_float(x) {
        float_zero(x.precision().max(MIN_PRECISION))
    } else {
        x.sqrt()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from(0)
    }

    pub fn one() -> Self {
        Scalar::from(1)
    }

    pub fn imaginary_unit() -> Self {
        Scalar::Exact(Complex::new(RBig::ZERO, RBig::ONE))
    }

    pub fn rational(q: RBig) -> Self {
        Scalar::Exact(Complex::new(q, RBig::ZERO))
    }

    pub fn exact(re: RBig, im: RBig) -> Self {
        Scalar::Exact(Complex::new(re, im))
    }

    /// `numerator / denominator` as an exact scalar. Panics on a zero denominator.
    pub fn ratio(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Scalar::rational(RBig::from(numerator) / RBig::from(denominator))
    }

    pub fn from_f64(v: f64, precision: usize) -> Self {
        let q = RBig::try_from(v).expect("finite f64");
        Scalar::rational(q).to_float(precision)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn precision(&self) -> Option<usize> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(z) => Some(z.re.precision().max(z.im.precision())),
        }
    }

    pub fn as_exact(&self) -> Option<&Complex<RBig>> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Float(_) => None,
        }
    }

    /// Real rational value, if this is an exact scalar with zero imaginary part.
    pub fn as_real_rational(&self) -> Option<&RBig> {
        match self {
            Scalar::Exact(z) if z.im.is_zero() => Some(&z.re),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.re.is_zero() && z.im.is_zero(),
            Scalar::Float(z) => is_zero_float(&z.re) && is_zero_float(&z.im),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.re.is_one() && z.im.is_zero(),
            Scalar::Float(z) => z.re == Float::ONE && is_zero_float(&z.im),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.im.is_zero(),
            Scalar::Float(z) => is_zero_float(&z.im),
        }
    }

    pub fn to_float(&self, precision: usize) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Float(Complex::new(
                float_from_rational(&z.re, precision),
                float_from_rational(&z.im, precision),
            )),
            Scalar::Float(z) => Scalar::Float(Complex::new(
                z.re.clone().with_precision(precision).value(),
                z.im.clone().with_precision(precision).value(),
            )),
        }
    }

    fn float_parts(&self, precision: usize) -> Complex<Float> {
        match self.to_float(precision) {
            Scalar::Float(z) => z,
            Scalar::Exact(_) => unreachable!(),
        }
    }

    pub fn re(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::rational(z.re.clone()),
            Scalar::Float(z) => {
                let p = z.re.precision();
                Scalar::Float(Complex::new(z.re.clone(), float_zero(p)))
            }
        }
    }

    pub fn im(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::rational(z.im.clone()),
            Scalar::Float(z) => {
                let p = z.im.precision();
                Scalar::Float(Complex::new(z.im.clone(), float_zero(p)))
            }
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(z.conj()),
            Scalar::Float(z) => Scalar::Float(Complex::new(z.re.clone(), -z.im.clone())),
        }
    }

    /// |z|² as a real scalar; exact in the rational backend.
    pub fn norm_sqr(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::rational(&z.re * &z.re + &z.im * &z.im),
            Scalar::Float(z) => {
                let p = z.re.precision();
                Scalar::Float(Complex::new(&z.re * &z.re + &z.im * &z.im, float_zero(p)))
            }
        }
    }

    /// |z|, exact when |z|² is a rational perfect square.
    pub fn modulus(&self, precision: usize) -> Scalar {
        if let Scalar::Exact(z) = self {
            let n = &z.re * &z.re + &z.im * &z.im;
            if let Some(r) = exact_sqrt(&n) {
                return Scalar::rational(r);
            }
        }
        let p = self.precision().unwrap_or(precision);
        let n = self.norm_sqr().float_parts(p).re;
        Scalar::Float(Complex::new(float_sqrt(&n), float_zero(p)))
    }

    /// Principal square root (non-negative real part; the negative real axis maps
    /// to the positive imaginary axis). Exact for real rational perfect squares.
    pub fn sqrt(&self, precision: usize) -> Scalar {
        if let Some(q) = self.as_real_rational() {
            if q.sign() != Sign::Negative {
                if let Some(r) = exact_sqrt(q) {
                    return Scalar::rational(r);
                }
            } else if let Some(r) = exact_sqrt(&q.clone().abs()) {
                return Scalar::exact(RBig::ZERO, r);
            }
        }
        let p = self.precision().unwrap_or(precision);
        let z = self.float_parts(p);
        let two = Float::from(2).with_precision(p).value();
        let r = float_sqrt(&(&z.re * &z.re + &z.im * &z.im));
        if z.re.sign() != Sign::Negative {
            let t = float_sqrt(&((&r + &z.re) / &two));
            if is_zero_float(&t) {
                return Scalar::Float(Complex::new(float_zero(p), float_zero(p)));
            }
            let im = &z.im / (&two * &t);
            Scalar::Float(Complex::new(t, im))
        } else {
            let t = float_sqrt(&((&r - &z.re) / &two));
            let re = z.im.clone().abs() / (&two * &t);
            let im = if z.im.sign() == Sign::Negative { -t } else { t };
            Scalar::Float(Complex::new(re, im))
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    pub fn recip(&self) -> Option<Scalar> {
        Scalar::one().checked_div(self)
    }

    /// Integer power by repeated squaring; `None` for a negative power of zero.
    pub fn powi(&self, exponent: i64) -> Option<Scalar> {
        let mut base = if exponent < 0 { self.recip()? } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc = match self {
            Scalar::Exact(_) => Scalar::one(),
            Scalar::Float(_) => Scalar::one().to_float(self.precision().unwrap()),
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    pub fn to_c64(&self) -> (f64, f64) {
        match self {
            Scalar::Exact(z) => (z.re.to_f64().value(), z.im.to_f64().value()),
            Scalar::Float(z) => (z.re.to_f64().value(), z.im.to_f64().value()),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_c64();
        re.hypot(im)
    }

    /// log₂|z|, usable far outside the f64 exponent range. `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let n = match self {
            Scalar::Exact(z) => {
                let n = &z.re * &z.re + &z.im * &z.im;
                float_from_rational(&n, 64)
            }
            Scalar::Float(z) => {
                let re = z.re.clone().with_precision(64).value();
                let im = z.im.clone().with_precision(64).value();
                &re * &re + &im * &im
            }
        };
        let repr = n.repr();
        let sig = repr.significand();
        let bits = sig.unsigned_abs().bit_len() as isize;
        let shift = bits - 60;
        let mant = if shift > 0 {
            sig.clone() >> (shift as usize)
        } else {
            sig.clone() << ((-shift) as usize)
        };
        let mant = mant.to_f64().value().abs();
        0.5 * (mant.log2() + (repr.exponent() + shift) as f64)
    }

    /// Real-part ordering for real-valued scalars.
    pub fn partial_cmp_real(&self, other: &Scalar) -> Option<Ordering> {
        if !self.is_real() || !other.is_real() {
            return None;
        }
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.re.cmp(&b.re)),
            _ => {
                let p = self.precision().or(other.precision()).unwrap();
                let a = self.float_parts(p).re;
                let b = other.float_parts(p).re;
                a.partial_cmp(&b)
            }
        }
    }

    /// Fixed-format decimal rendering of both components with `digits`
    /// significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        match self {
            Scalar::Exact(z) => (
                rational_to_decimal(&z.re, digits),
                rational_to_decimal(&z.im, digits),
            ),
            Scalar::Float(z) => (float_to_decimal(&z.re, digits), float_to_decimal(&z.im, digits)),
        }
    }
}

/// Number of decimal digits that a float of `precision` bits carries.
pub fn decimal_digits(precision: usize) -> usize {
    ((precision as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

pub fn rational_to_decimal(q: &RBig, digits: usize) -> String {
    let bits = ((digits as f64) / std::f64::consts::LOG10_2).ceil() as usize + 16;
    float_to_decimal(&float_from_rational(q, bits), digits)
}

/// Scientific notation `[-]d.ddd…e±x` with exactly `digits` significant
/// digits, or `0` for zero.
pub fn float_to_decimal<R: dashu_float::round::Round>(x: &FBig<R>, digits: usize) -> String {
    if is_zero_float(x) {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let dec = x.clone().with_base_and_precision::<10>(digits).value();
    let repr = dec.repr();
    let sig = repr.significand().clone();
    let mut exp = repr.exponent();
    let negative = sig.sign() == Sign::Negative;
    let mut text = sig.unsigned_abs().to_string();
    while text.len() > digits && text.ends_with('0') {
        exp += 1;
        text.pop();
    }
    while text.len() < digits {
        text.push('0');
        exp -= 1;
    }
    let sci_exp = exp + text.len() as isize - 1;
    let (head, tail) = text.split_at(1);
    let mut out = String::with_capacity(digits + 8);
    if negative {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push('e');
    if sci_exp < 0 {
        out.push('-');
    } else {
        out.push('+');
    }
    out.push_str(&sci_exp.unsigned_abs().to_string());
    out
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::rational(RBig::from(v))
    }
}

impl From<RBig> for Scalar {
    fn from(q: RBig) -> Self {
        Scalar::rational(q)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self - other).is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) if z.im.is_zero() => write!(f, "{}", z.re),
            Scalar::Exact(z) => write!(f, "({})+({})i", z.re, z.im),
            Scalar::Float(z) => {
                let d = decimal_digits(z.re.precision().max(MIN_PRECISION));
                let (re, im) = (float_to_decimal(&z.re, d), float_to_decimal(&z.im, d));
                if is_zero_float(&z.im) {
                    f.write_str(&re)
                } else {
                    write!(f, "({re})+({im})i")
                }
            }
        }
    }
}

fn common_precision(a: &Scalar, b: &Scalar) -> usize {
    match (a.precision(), b.precision()) {
        (Some(p), Some(q)) => p.max(q),
        (Some(p), None) | (None, Some(p)) => p,
        (None, None) => unreachable!("called only for mixed or float operands"),
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.$method(b)),
                    (Scalar::Float(a), Scalar::Float(b))
                        if a.re.precision() == b.re.precision() =>
                    {
                        Scalar::Float(a.$method(b))
                    }
                    _ => {
                        let p = common_precision(self, rhs);
                        Scalar::Float(self.float_parts(p).$method(rhs.float_parts(p)))
                    }
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }

        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binary_op!(Add, add);
binary_op!(Sub, sub);
binary_op!(Mul, mul);
binary_op!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z.clone()),
            Scalar::Float(z) => Scalar::Float(Complex::new(-z.re.clone(), -z.im.clone())),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// A point of the extended complex plane.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Finite(Scalar),
    Infinity,
}

impl Value {
    /// `numerator / denominator`, or infinity when the denominator vanishes.
    pub fn quotient(numerator: &Scalar, denominator: &Scalar) -> Value {
        match numerator.checked_div(denominator) {
            Some(v) => Value::Finite(v),
            None => Value::Infinity,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Value::Finite(s) => Some(s),
            Value::Infinity => None,
        }
    }

    pub fn to_c64(&self) -> Option<(f64, f64)> {
        self.finite().map(Scalar::to_c64)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(s) => s.fmt(f),
            Value::Infinity => f.write_str("inf"),
        }
    }
}
