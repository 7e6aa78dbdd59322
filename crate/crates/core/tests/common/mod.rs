#![allow(dead_code)]

use contfrac::{Scalar, SequenceSpec};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use rand::RngExt;

pub fn q(n: i64, d: i64) -> RBig {
    RBig::from_parts(IBig::from(n), UBig::from(d as u64))
}

/// Random nonzero rational with |x| ≤ bound and denominator ≤ 6.
pub fn rational(rng: &mut impl RngExt, bound: i64) -> RBig {
    let den = rng.random_range(1..=6i64);
    loop {
        let num = rng.random_range(-bound * den..=bound * den);
        if num != 0 {
            return q(num, den);
        }
    }
}

/// Random nonzero Gaussian rational, |re|, |im| ≤ bound / √2 so |x| ≤ bound.
pub fn gaussian(rng: &mut impl RngExt, bound: i64) -> Scalar {
    if rng.random_bool(0.5) {
        return Scalar::rational(rational(rng, bound));
    }
    loop {
        let den = rng.random_range(1..=6i64);
        let lim = bound * den * 7 / 10;
        let re = rng.random_range(-lim..=lim);
        let im = rng.random_range(-lim..=lim);
        if re != 0 || im != 0 {
            return Scalar::exact(q(re, den), q(im, den));
        }
    }
}

/// Random exact point on the unit circle: ((1−t²)/(1+t²), 2t/(1+t²)) with
/// random quadrant.
pub fn unit_phase(rng: &mut impl RngExt) -> Scalar {
    let p = rng.random_range(0..=12i64);
    let d = rng.random_range(1..=12i64);
    let s = p * p + d * d;
    let re = q(d * d - p * p, s);
    let im = q(2 * p * d, s);
    let re = if rng.random_bool(0.5) { -re } else { re };
    let im = if rng.random_bool(0.5) { -im } else { im };
    Scalar::exact(re, im)
}

pub fn scaled(modulus: &RBig, phase: &Scalar) -> Scalar {
    &Scalar::rational(modulus.clone()) * phase
}

/// b₀ + K(aₙ/bₙ) with `len` random rational elements.
pub fn random_rational_spec(rng: &mut impl RngExt, len: usize, bound: i64, unit: bool) -> SequenceSpec {
    let b0 = if rng.random_bool(0.5) { Scalar::zero() } else { gaussian(rng, bound) };
    let a = (0..len).map(|_| gaussian(rng, bound)).collect();
    let b = (0..len)
        .map(|_| if unit { Scalar::one() } else { gaussian(rng, bound) })
        .collect();
    SequenceSpec::from_elements(b0, a, b).expect("nonzero numerators")
}

pub fn dist(x: &Scalar, y: &Scalar) -> f64 {
    let (a, b) = x.to_c64();
    let (c, d) = y.to_c64();
    (a - c).hypot(b - d)
}
