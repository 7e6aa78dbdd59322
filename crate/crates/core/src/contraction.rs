//! Even and odd parts: canonical contractions whose approximants are the
//! even- (resp. odd-) indexed approximants of the input.
//!
//! Even part, for b_{2k} ≠ 0:
//!
//! ```text
//! b₀ + b₂a₁/(b₂b₁ + a₂) − (a₂a₃b₄/b₂)/(a₄ + b₃b₄ + a₃b₄/b₂) − (a₄a₅b₆/b₄)/(a₆ + b₅b₆ + a₅b₆/b₄) − ⋯
//! ```
//!
//! Odd part, for b_{2k+1} ≠ 0:
//!
//! ```text
//! (b₀b₁ + a₁)/b₁ − (a₁a₂b₃/b₁)/(b₁(a₃ + b₂b₃) + a₂b₃) − (a₃a₄b₅b₁/b₃)/(a₅ + b₄b₅ + a₄b₅/b₃)
//!                − (a₅a₆b₇/b₅)/(a₇ + b₆b₇ + a₆b₇/b₅) − ⋯
//! ```

use crate::error::{Error, Parity, Result};
use crate::real::Real;
use crate::recurrence::{states, ApproximantState};
use crate::scalar::{Backend, Scalar, Value};
use crate::sequence::SequenceSpec;

/// Which canonical contraction to build.
pub type ContractionKind = Parity;

fn nonzero_denominator(spec: &SequenceSpec, index: u64, kind: Parity, precision: usize) -> Result<Scalar> {
    let b = spec.denominator(index, precision)?;
    if b.is_zero() {
        Err(Error::ContractionUndefined { kind, index })
    } else {
        Ok(b)
    }
}

fn validate_finite(spec: &SequenceSpec, kind: Parity) -> Result<()> {
    if let Some(len) = spec.len() {
        let start = if kind == Parity::Even { 2 } else { 1 };
        let mut i = start;
        while i <= len {
            nonzero_denominator(spec, i, kind, Backend::default().working_precision())?;
            i += 2;
        }
    }
    Ok(())
}

/// The even part. Finite specs are validated eagerly; unbounded specs report
/// a zero b_{2k} when the affected element is generated.
pub fn even_part(spec: &SequenceSpec) -> Result<SequenceSpec> {
    validate_finite(spec, Parity::Even)?;
    Ok(SequenceSpec::derived_even(spec.clone()))
}

/// The odd part; see [`even_part`] for validation.
pub fn odd_part(spec: &SequenceSpec) -> Result<SequenceSpec> {
    validate_finite(spec, Parity::Odd)?;
    nonzero_denominator(spec, 1, Parity::Odd, Backend::default().working_precision())?;
    Ok(SequenceSpec::derived_odd(spec.clone()))
}

pub fn contract(spec: &SequenceSpec, kind: ContractionKind) -> Result<SequenceSpec> {
    match kind {
        Parity::Even => even_part(spec),
        Parity::Odd => odd_part(spec),
    }
}

pub(crate) fn even_element(p: &SequenceSpec, k: u64, precision: usize) -> Result<(Scalar, Scalar)> {
    let kind = Parity::Even;
    let (a_even, b_even) = p.term(2 * k, precision)?;
    if b_even.is_zero() {
        return Err(Error::ContractionUndefined { kind, index: 2 * k });
    }
    let (a_odd, b_odd) = p.term(2 * k - 1, precision)?;
    if k == 1 {
        return Ok((&b_even * &a_odd, &b_even * &b_odd + &a_even));
    }
    let (a_prev, _) = p.term(2 * k - 2, precision)?;
    let b_prev = nonzero_denominator(p, 2 * k - 2, kind, precision)?;
    let num = -(&a_prev * &a_odd * &b_even / &b_prev);
    let den = &a_even + &b_odd * &b_even + &a_odd * &b_even / &b_prev;
    Ok((num, den))
}

pub(crate) fn odd_constant(p: &SequenceSpec, precision: usize) -> Result<Scalar> {
    let b0 = p.b0(precision)?;
    let (a1, _) = p.term(1, precision)?;
    let b1 = nonzero_denominator(p, 1, Parity::Odd, precision)?;
    Ok((&b0 * &b1 + &a1) / &b1)
}

pub(crate) fn odd_element(p: &SequenceSpec, k: u64, precision: usize) -> Result<(Scalar, Scalar)> {
    let kind = Parity::Odd;
    let (a_next, b_next) = p.term(2 * k + 1, precision)?;
    if b_next.is_zero() {
        return Err(Error::ContractionUndefined { kind, index: 2 * k + 1 });
    }
    let (a_even, b_even) = p.term(2 * k, precision)?;
    let (a_odd, _) = p.term(2 * k - 1, precision)?;
    let b_odd = nonzero_denominator(p, 2 * k - 1, kind, precision)?;
    if k == 1 {
        // a_odd = a₁, b_odd = b₁, a_even = a₂, a_next = a₃
        let num = -(&a_odd * &a_even * &b_next / &b_odd);
        let den = &b_odd * (&a_next + &b_even * &b_next) + &a_even * &b_next;
        return Ok((num, den));
    }
    let mut num = -(&a_odd * &a_even * &b_next / &b_odd);
    if k == 2 {
        num = num * nonzero_denominator(p, 1, kind, precision)?;
    }
    let den = &a_next + &b_even * &b_next + &a_even * &b_next / &b_odd;
    Ok((num, den))
}

/// Outcome of comparing a contraction against the input's approximants.
#[derive(Clone, Debug)]
pub struct ContractionCheck {
    pub kind: ContractionKind,
    /// Contraction approximants compared, k = 0..=checked.
    pub checked: u64,
    /// Largest |C_k/D_k − f_{n_k}| (as a float); infinite when exactly one
    /// side is the point at infinity.
    pub max_residual: f64,
    /// Every residual is identically zero.
    pub exact: bool,
    /// Whether C_k = A_{n_k} and D_k = B_{n_k} hold as well (k ≥ 1).
    pub canonical: bool,
}

fn residual(x: &Value, y: &Value) -> (f64, bool) {
    match (x, y) {
        (Value::Infinity, Value::Infinity) => (0.0, true),
        (Value::Finite(a), Value::Finite(b)) => {
            let d = a - b;
            (Real::norm_sqr(&d).to_f64().sqrt(), d.is_zero())
        }
        _ => (f64::INFINITY, false),
    }
}

/// Compares the first `k_max` approximants of the even (odd) part with
/// A_{2k}/B_{2k} (A_{2k+1}/B_{2k+1}) of the input.
pub fn verify_contraction(
    spec: &SequenceSpec,
    k_max: u64,
    kind: ContractionKind,
    backend: Backend,
) -> Result<ContractionCheck> {
    let contracted = contract(spec, kind)?;
    let offset = if kind == Parity::Even { 0 } else { 1 };
    let originals = states(spec, 2 * k_max + offset, backend)?;
    let contracted_states = states(&contracted, k_max, backend)?;

    let precision = backend.working_precision();
    let head = ApproximantState::initial(backend, &contracted.b0(precision)?)?;
    let original_head = if kind == Parity::Even {
        ApproximantState::initial(backend, &spec.b0(precision)?)?.approximant()
    } else {
        originals[0].approximant()
    };

    let mut max_residual = 0f64;
    let mut exact = true;
    let mut canonical = true;
    let (r, z) = residual(&head.approximant(), &original_head);
    max_residual = max_residual.max(r);
    exact &= z;
    for (k, c) in contracted_states.iter().enumerate() {
        let o = &originals[2 * (k + 1) + offset as usize - 1];
        let (r, z) = residual(&c.approximant(), &o.approximant());
        max_residual = max_residual.max(r);
        exact &= z;
        canonical &= c.a_cur == o.a_cur && c.b_cur == o.b_cur;
    }
    Ok(ContractionCheck {
        kind,
        checked: k_max,
        max_residual,
        exact,
        canonical,
    })
}
