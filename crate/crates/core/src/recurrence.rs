//! Canonical numerators and denominators via the three-term recurrences
//!
//! ```text
//! A_n = b_n A_{n-1} + a_n A_{n-2},   A_{-1} = 1, A_0 = b_0
//! B_n = b_n B_{n-1} + a_n B_{n-2},   B_{-1} = 0, B_0 = 1
//! ```
//!
//! together with the determinant identity
//! `A_n B_{n-1} - A_{n-1} B_n = (-1)^{n-1} a_1 ⋯ a_n`.

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar, Value};
use crate::sequence::SequenceSpec;

/// Rolling recurrence state at index `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximantState {
    pub n: u64,
    pub a_prev: Scalar,
    pub a_cur: Scalar,
    pub b_prev: Scalar,
    pub b_cur: Scalar,
    /// a_1 a_2 ⋯ a_n
    pub a_product: Scalar,
}

impl ApproximantState {
    /// State at n = 0 for the given constant term, in `backend`.
    pub fn initial(backend: Backend, b0: &Scalar) -> Result<Self> {
        Ok(ApproximantState {
            n: 0,
            a_prev: backend.from_int(1),
            a_cur: backend.convert(b0, 0)?,
            b_prev: backend.from_int(0),
            b_cur: backend.from_int(1),
            a_product: backend.from_int(1),
        })
    }

    /// Applies one step of the recurrence with elements (a, b) = (a_{n+1}, b_{n+1}).
    pub fn step(&self, a: &Scalar, b: &Scalar) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroPartialNumerator { index: self.n + 1 });
        }
        Ok(ApproximantState {
            n: self.n + 1,
            a_prev: self.a_cur.clone(),
            a_cur: b * &self.a_cur + a * &self.a_prev,
            b_prev: self.b_cur.clone(),
            b_cur: b * &self.b_cur + a * &self.b_prev,
            a_product: &self.a_product * a,
        })
    }

    /// f_n = A_n / B_n, infinite when B_n = 0.
    pub fn approximant(&self) -> Value {
        Value::quotient(&self.a_cur, &self.b_cur)
    }

    /// A_n B_{n-1} - A_{n-1} B_n - (-1)^{n-1} a_1⋯a_n, identically zero in
    /// exact arithmetic.
    pub fn determinant_residual(&self) -> Scalar {
        let det = &self.a_cur * &self.b_prev - &self.a_prev * &self.b_cur;
        // (-1)^{n-1}: positive for odd n. At n = 0 the seeds give det = -1.
        if self.n % 2 == 1 {
            det - &self.a_product
        } else {
            det + &self.a_product
        }
    }
}

/// Free-function form of [`ApproximantState::step`].
pub fn step(state: &ApproximantState, a: &Scalar, b: &Scalar) -> Result<ApproximantState> {
    state.step(a, b)
}

/// Lazily advances the recurrence over a spec, yielding states for n = 1, 2, …
pub struct Approximants {
    spec: SequenceSpec,
    backend: Backend,
    state: ApproximantState,
    failed: bool,
}

impl Approximants {
    pub fn new(spec: &SequenceSpec, backend: Backend) -> Result<Self> {
        let b0 = spec.b0(backend.working_precision())?;
        Ok(Approximants {
            spec: spec.clone(),
            backend,
            state: ApproximantState::initial(backend, &b0)?,
            failed: false,
        })
    }

    pub fn state(&self) -> &ApproximantState {
        &self.state
    }

    fn advance(&mut self) -> Result<ApproximantState> {
        let n = self.state.n + 1;
        let (a, b) = self.spec.term(n, self.backend.working_precision())?;
        let a = self.backend.convert(&a, n)?;
        let b = self.backend.convert(&b, n)?;
        self.state = self.state.step(&a, &b)?;
        Ok(self.state.clone())
    }
}

impl Iterator for Approximants {
    type Item = Result<ApproximantState>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.spec.len().is_some_and(|l| self.state.n >= l) {
            return None;
        }
        let r = self.advance();
        self.failed = r.is_err();
        Some(r)
    }
}

/// States for n = 1..=count; errors if the spec is shorter or an element fails.
pub fn states(spec: &SequenceSpec, count: u64, backend: Backend) -> Result<Vec<ApproximantState>> {
    if let Some(len) = spec.len() {
        if count > len {
            return Err(Error::OutOfRange { index: count, len });
        }
    }
    Approximants::new(spec, backend)?.take(count as usize).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub n: u64,
    pub value: Value,
    pub residual: Scalar,
}

/// Approximants f_1 … f_N with their determinant residuals.
pub fn evaluate_trace(spec: &SequenceSpec, terms: u64, backend: Backend) -> Result<Vec<TraceEntry>> {
    if terms == 0 {
        return Err(Error::InvalidInput("at least one term is required".into()));
    }
    Ok(states(spec, terms, backend)?
        .into_iter()
        .map(|s| TraceEntry {
            n: s.n,
            value: s.approximant(),
            residual: s.determinant_residual(),
        })
        .collect())
}

/// The equivalent fraction `b₀ + K(cₙ/1)` with identical approximants:
/// c₁ = a₁/b₁, cₙ = aₙ/(b_{n-1} bₙ). A zero bₙ is reported when element n
/// (or n + 1) is generated.
pub fn equivalence_to_unit(spec: &SequenceSpec) -> SequenceSpec {
    SequenceSpec::derived_unit(spec.clone())
}

pub(crate) fn unit_element(parent: &SequenceSpec, n: u64, precision: usize) -> Result<Scalar> {
    let (a, b) = parent.term(n, precision)?;
    if b.is_zero() {
        return Err(Error::TransformUndefined { index: n });
    }
    if n == 1 {
        return Ok(&a / &b);
    }
    let prev = parent.denominator(n - 1, precision)?;
    if prev.is_zero() {
        return Err(Error::TransformUndefined { index: n - 1 });
    }
    Ok(a / (prev * b))
}

/// B_{2n+1}/B_{2n} computed two ways.
#[derive(Clone, Debug, PartialEq)]
pub struct TailRatio {
    /// From the recurrence.
    pub recurrence: Value,
    /// From the finite descending fraction `1 + a_{2n+1}/1 + a_{2n}/1 + ⋯ + a_2/1`.
    pub descending: Value,
}

impl TailRatio {
    pub fn value(&self) -> &Value {
        &self.recurrence
    }

    pub fn is_infinite(&self) -> bool {
        !self.recurrence.is_finite()
    }
}

/// B_{2n+1}/B_{2n} for a unit-denominator spec.
pub fn tail_ratio(spec: &SequenceSpec, n: u64, backend: Backend) -> Result<TailRatio> {
    let top = 2 * n + 1;
    let precision = backend.working_precision();
    spec.require_unit_denominators(top, precision)?;
    let all = states(spec, top, backend)?;
    let b_even = if n == 0 {
        backend.from_int(1)
    } else {
        all[(2 * n - 1) as usize].b_cur.clone()
    };
    let b_odd = &all[(top - 1) as usize].b_cur;
    let recurrence = Value::quotient(b_odd, &b_even);

    // r_m = B_m / B_{m-1} = 1 + a_m / r_{m-1}, r_1 = 1.
    let one = backend.from_int(1);
    let mut r = Value::Finite(one.clone());
    for m in 2..=top {
        let a = backend.convert(&spec.numerator(m, precision)?, m)?;
        r = match r {
            Value::Infinity => Value::Finite(one.clone()),
            Value::Finite(prev) => match a.checked_div(&prev) {
                Some(q) => Value::Finite(&one + &q),
                None => Value::Infinity,
            },
        };
    }
    Ok(TailRatio {
        recurrence,
        descending: r,
    })
}
