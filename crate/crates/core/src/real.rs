//! Certified real numbers for inequality checks.
//!
//! A [`Real`] is either an exact rational or an enclosure `[lo, hi]` whose
//! endpoints are rounded outward. Comparisons answer `Some(_)` only when the
//! answer holds for every point of both enclosures, so a certificate is never
//! accepted because of rounding.

use std::cmp::Ordering;

use dashu_base::Sign;
use dashu_float::round::mode::{Down, HalfEven, Up};
use dashu_float::FBig;
use dashu_ratio::RBig;

use crate::scalar::{exact_sqrt, is_zero_float, float_to_decimal, rational_to_decimal, Scalar};

/// Working precision of enclosure endpoints.
pub const ENCLOSURE_PRECISION: usize = 256;

type Lo = FBig<Down>;
type Hi = FBig<Up>;

#[derive(Clone, Debug)]
pub enum Real {
    Exact(RBig),
    Enclosure { lo: Lo, hi: Hi },
}

fn lo_of(q: &RBig) -> Lo {
    q.to_float::<Down, 2>(ENCLOSURE_PRECISION).value()
}

fn hi_of(q: &RBig) -> Hi {
    q.to_float::<Up, 2>(ENCLOSURE_PRECISION).value()
}

fn lo_zero() -> Lo {
    Lo::ZERO.with_precision(ENCLOSURE_PRECISION).value()
}

fn hi_zero() -> Hi {
    Hi::ZERO.with_precision(ENCLOSURE_PRECISION).value()
}

fn as_lo(x: &Hi) -> Lo {
    x.clone().with_rounding::<Down>()
}

fn as_hi(x: &Lo) -> Hi {
    x.clone().with_rounding::<Up>()
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(RBig::ZERO)
    }

    pub fn one() -> Self {
        Real::Exact(RBig::ONE)
    }

    pub fn from_int(v: i64) -> Self {
        Real::Exact(RBig::from(v))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Real::Exact(RBig::from(n) / RBig::from(d))
    }

    /// The real part of a real-valued scalar. Float scalars become point
    /// enclosures of the value they store.
    pub fn from_scalar(s: &Scalar) -> Option<Real> {
        if !s.is_real() {
            return None;
        }
        Some(match s {
            Scalar::Exact(z) => Real::Exact(z.re.clone()),
            Scalar::Float(z) => Real::from_float(&z.re),
        })
    }

    pub fn from_float(x: &FBig<HalfEven>) -> Real {
        let lo = x.clone().with_rounding::<Down>().with_precision(ENCLOSURE_PRECISION).value();
        let hi = x.clone().with_rounding::<Up>().with_precision(ENCLOSURE_PRECISION).value();
        Real::Enclosure { lo, hi }
    }

    /// |z|² of a scalar.
    pub fn norm_sqr(s: &Scalar) -> Real {
        match s {
            Scalar::Exact(z) => Real::Exact(&z.re * &z.re + &z.im * &z.im),
            Scalar::Float(z) => {
                let re = Real::from_float(&z.re);
                let im = Real::from_float(&z.im);
                re.square().add(&im.square())
            }
        }
    }

    /// |z| of a scalar, exact when |z|² is a rational perfect square.
    pub fn modulus(s: &Scalar) -> Real {
        Real::norm_sqr(s).sqrt().expect("norm is non-negative")
    }

    pub fn as_exact(&self) -> Option<&RBig> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Enclosure { .. } => None,
        }
    }

    pub fn bounds(&self) -> (Lo, Hi) {
        match self {
            Real::Exact(q) => (lo_of(q), hi_of(q)),
            Real::Enclosure { lo, hi } => (lo.clone(), hi.clone()),
        }
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(-q.clone()),
            Real::Enclosure { lo, hi } => Real::Enclosure {
                lo: as_lo(&-hi.clone()),
                hi: as_hi(&-lo.clone()),
            },
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            return Real::Exact(a + b);
        }
        let (al, ah) = self.bounds();
        let (bl, bh) = other.bounds();
        Real::Enclosure {
            lo: al + bl,
            hi: ah + bh,
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Real) -> Real {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            return Real::Exact(a * b);
        }
        let (al, ah) = self.bounds();
        let (bl, bh) = other.bounds();
        let (al_h, bl_h) = (as_hi(&al), as_hi(&bl));
        let (ah_l, bh_l) = (as_lo(&ah), as_lo(&bh));
        let lows = [&al * &bl, &al * &bh_l, &ah_l * &bl, &ah_l * &bh_l];
        let highs = [&al_h * &bl_h, &al_h * &bh, &ah * &bl_h, &ah * &bh];
        let lo = lows.into_iter().reduce(|a, b| if b < a { b } else { a }).unwrap();
        let hi = highs.into_iter().reduce(|a, b| if b > a { b } else { a }).unwrap();
        Real::Enclosure { lo, hi }
    }

    pub fn square(&self) -> Real {
        if let Real::Exact(q) = self {
            return Real::Exact(q * q);
        }
        let sq = self.mul(self);
        // x² is non-negative even when the enclosure straddles zero
        match sq {
            Real::Enclosure { lo, hi } if lo.sign() == Sign::Negative => Real::Enclosure { lo: lo_zero(), hi },
            other => other,
        }
    }

    /// `None` unless the divisor is certainly nonzero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            return if b.is_zero() { None } else { Some(Real::Exact(a / b)) };
        }
        let (bl, bh) = other.bounds();
        let positive = bl.sign() == Sign::Positive && !is_zero_float(&bl);
        let negative = bh.sign() == Sign::Negative && !is_zero_float(&bh);
        if !positive && !negative {
            return None;
        }
        let one_lo = lo_of(&RBig::ONE);
        let one_hi = hi_of(&RBig::ONE);
        let recip = Real::Enclosure {
            lo: one_lo / as_lo(&bh),
            hi: one_hi / as_hi(&bl),
        };
        Some(self.mul(&recip))
    }

    /// `None` when the value is certainly negative.
    pub fn sqrt(&self) -> Option<Real> {
        if let Real::Exact(q) = self {
            if q.sign() == Sign::Negative {
                return None;
            }
            if let Some(r) = exact_sqrt(q) {
                return Some(Real::Exact(r));
            }
        }
        let (lo, hi) = self.bounds();
        if hi.sign() == Sign::Negative && !is_zero_float(&hi) {
            return None;
        }
        let lo = if lo.sign() == Sign::Negative || is_zero_float(&lo) {
            lo_zero()
        } else {
            lo.sqrt()
        };
        let hi = if is_zero_float(&hi) { hi_zero() } else { hi.sqrt() };
        Some(Real::Enclosure { lo, hi })
    }

    /// Certified ordering: `None` when the enclosures overlap.
    pub fn cmp_certified(&self, other: &Real) -> Option<Ordering> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            return Some(a.cmp(b));
        }
        let (al, ah) = self.bounds();
        let (bl, bh) = other.bounds();
        if ah < as_hi(&bl) {
            Some(Ordering::Less)
        } else if al > as_lo(&bh) {
            Some(Ordering::Greater)
        } else if al == as_lo(&ah) && bl == as_lo(&bh) && al == bl {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `Some(true)` if certainly `self >= other`, `Some(false)` if certainly
    /// `self < other`, `None` if undecided.
    pub fn ge(&self, other: &Real) -> Option<bool> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            return Some(a >= b);
        }
        let (al, ah) = self.bounds();
        let (bl, bh) = other.bounds();
        if al >= as_lo(&bh) {
            Some(true)
        } else if ah < as_hi(&bl) {
            Some(false)
        } else {
            None
        }
    }

    pub fn le(&self, other: &Real) -> Option<bool> {
        other.ge(self)
    }

    pub fn gt(&self, other: &Real) -> Option<bool> {
        other.ge(self).map(|b| !b)
    }

    pub fn lt(&self, other: &Real) -> Option<bool> {
        self.ge(other).map(|b| !b)
    }

    pub fn is_positive(&self) -> Option<bool> {
        self.gt(&Real::zero())
    }

    /// Pointwise minimum of two enclosures.
    pub fn min(&self, other: &Real) -> Real {
        if let (Real::Exact(a), Real::Exact(b)) = (self, other) {
            return Real::Exact(a.min(b).clone());
        }
        match self.cmp_certified(other) {
            Some(Ordering::Less | Ordering::Equal) => return self.clone(),
            Some(Ordering::Greater) => return other.clone(),
            None => {}
        }
        let (al, ah) = self.bounds();
        let (bl, bh) = other.bounds();
        Real::Enclosure {
            lo: if al < bl { al } else { bl },
            hi: if ah < bh { ah } else { bh },
        }
    }

    pub fn max(&self, other: &Real) -> Real {
        self.neg().min(&other.neg()).neg()
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64().value(),
            Real::Enclosure { lo, hi } => {
                0.5 * (lo.to_f64().value() + hi.to_f64().value())
            }
        }
    }

    /// Decimal rendering. Enclosures print their upper endpoint when `upper`
    /// is set and their lower endpoint otherwise.
    pub fn to_decimal(&self, digits: usize, upper: bool) -> String {
        match self {
            Real::Exact(q) => rational_to_decimal(q, digits),
            Real::Enclosure { lo, hi } => {
                if upper {
                    float_to_decimal(hi, digits)
                } else {
                    float_to_decimal(lo, digits)
                }
            }
        }
    }
}
