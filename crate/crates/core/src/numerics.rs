//! Convergence diagnostics: limit estimation, even/odd gaps and the ratio
//! B_{2n+1}/B_{2n}.
//!
//! The gaps come from the determinant identity:
//!
//! ```text
//! |f_{2n} − f_{2n−1}|   = |a₁⋯a_{2n}| / |B_{2n} B_{2n−1}|
//! |f_{2n+1} − f_{2n−1}| = |b_{2n+1}| |a₁⋯a_{2n}| / |B_{2n+1} B_{2n−1}|
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::recurrence::{ApproximantState, Approximants};
use crate::scalar::{Backend, Scalar, Value};
use crate::sequence::SequenceSpec;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_WINDOW: usize = 6;

/// Outcome of [`limit_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate {
    pub estimate: Option<Scalar>,
    pub cauchy: bool,
}

fn distance_sq(x: &Scalar, y: &Scalar) -> f64 {
    Real::norm_sqr(&(x - y)).to_f64()
}

/// The last approximant, when every pairwise difference inside the trailing
/// `window` is below `tol · max(1, |f_last|)` and all of them are finite.
pub fn limit_estimate(trace: &[Value], tol: f64, window: usize) -> Result<LimitEstimate> {
    if trace.is_empty() {
        return Err(Error::InvalidInput("empty trace".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if window < 2 {
        return Err(Error::InvalidParameter(format!("window must be at least 2, got {window}")));
    }
    let none = LimitEstimate {
        estimate: None,
        cauchy: false,
    };
    if trace.len() < window {
        return Ok(none);
    }
    let tail: Option<Vec<&Scalar>> = trace[trace.len() - window..].iter().map(Value::finite).collect();
    let Some(tail) = tail else {
        return Ok(none);
    };
    let last = tail[window - 1];
    let scale = tol * last.abs_f64().max(1.0);
    let bound = scale * scale;
    for i in 0..window {
        for j in i + 1..window {
            if !(distance_sq(tail[i], tail[j]) < bound) {
                return Ok(none);
            }
        }
    }
    Ok(LimitEstimate {
        estimate: Some(last.clone()),
        cauchy: true,
    })
}

/// A gap |x − y| held as its square so exact runs stay exact.
#[derive(Clone, Debug)]
pub enum Gap {
    Finite(Real),
    Infinite,
}

impl Gap {
    fn between(x: &Value, y: &Value) -> Gap {
        match (x, y) {
            (Value::Finite(x), Value::Finite(y)) => Gap::Finite(Real::norm_sqr(&(x - y))),
            _ => Gap::Infinite,
        }
    }

    /// |num|² / |den|², infinite when den = 0.
    fn ratio(num: &Scalar, den: &Scalar) -> Gap {
        if den.is_zero() {
            return Gap::Infinite;
        }
        match Real::norm_sqr(num).div(&Real::norm_sqr(den)) {
            Some(q) => Gap::Finite(q),
            None => Gap::Infinite,
        }
    }

    pub fn squared(&self) -> Option<&Real> {
        match self {
            Gap::Finite(r) => Some(r),
            Gap::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Gap::Finite(r) => r.to_f64().max(0.0).sqrt(),
            Gap::Infinite => f64::INFINITY,
        }
    }

    /// Exact agreement of two exact gaps.
    pub fn exactly_equal(&self, other: &Gap) -> bool {
        match (self, other) {
            (Gap::Infinite, Gap::Infinite) => true,
            (Gap::Finite(a), Gap::Finite(b)) => matches!((a.as_exact(), b.as_exact()), (Some(x), Some(y)) if x == y),
            _ => false,
        }
    }

    /// Relative disagreement, for float runs.
    pub fn relative_difference(&self, other: &Gap) -> f64 {
        let (a, b) = (self.to_f64(), other.to_f64());
        if a.is_infinite() || b.is_infinite() {
            return if a == b { 0.0 } else { f64::INFINITY };
        }
        let scale = a.abs().max(b.abs());
        if scale == 0.0 {
            0.0
        } else {
            (a - b).abs() / scale
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            Gap::Finite(r) => r.sqrt().expect("non-negative").to_decimal(digits, false),
            Gap::Infinite => "inf".into(),
        }
    }
}

/// A gap computed directly and through the determinant identity.
#[derive(Clone, Debug)]
pub struct GapPoint {
    pub n: u64,
    pub direct: Gap,
    pub formula: Gap,
}

#[derive(Clone, Debug, Default)]
pub struct GapTraces {
    /// |f_{2n} − f_{2n−1}| for 2n ≤ N.
    pub even_odd: Vec<GapPoint>,
    /// |f_{2n+1} − f_{2n−1}| for 2n + 1 ≤ N, n ≥ 1.
    pub odd: Vec<GapPoint>,
}

/// Incremental gap computation over successive recurrence states.
#[derive(Default)]
struct GapTracker {
    before: Option<ApproximantState>,
    prev: Option<ApproximantState>,
    traces: GapTraces,
}

impl GapTracker {
    fn push(&mut self, state: &ApproximantState, b: &Scalar) {
        let m = state.n;
        if m >= 2 && m.is_multiple_of(2) {
            let prev = self.prev.as_ref().expect("previous state");
            self.traces.even_odd.push(GapPoint {
                n: m / 2,
                direct: Gap::between(&state.approximant(), &prev.approximant()),
                formula: Gap::ratio(&state.a_product, &(&state.b_cur * &state.b_prev)),
            });
        } else if m >= 3 {
            let prev = self.prev.as_ref().expect("previous state");
            let before = self.before.as_ref().expect("state two back");
            self.traces.odd.push(GapPoint {
                n: m / 2,
                direct: Gap::between(&state.approximant(), &before.approximant()),
                formula: Gap::ratio(&(b * &prev.a_product), &(&state.b_cur * &before.b_cur)),
            });
        }
        self.before = self.prev.take();
        self.prev = Some(state.clone());
    }
}

/// Drives the recurrence while handing each state and its bₙ to `visit`.
fn walk(
    spec: &SequenceSpec,
    terms: u64,
    backend: Backend,
    mut visit: impl FnMut(&ApproximantState, &Scalar),
) -> Result<u64> {
    if terms == 0 {
        return Err(Error::InvalidInput("at least one term is required".into()));
    }
    let precision = backend.working_precision();
    let mut used = 0;
    for state in Approximants::new(spec, backend)?.take(terms as usize) {
        let state = state?;
        let b = backend.convert(&spec.denominator(state.n, precision)?, state.n)?;
        visit(&state, &b);
        used = state.n;
    }
    Ok(used)
}

/// Even/odd gap traces, each computed directly and by the product formula.
pub fn even_odd_gap(spec: &SequenceSpec, terms: u64, backend: Backend) -> Result<GapTraces> {
    let mut tracker = GapTracker::default();
    walk(spec, terms, backend, |s, b| tracker.push(s, b))?;
    Ok(tracker.traces)
}

/// max |B_{2n+1}/B_{2n}| over 1 ≤ n, 2n + 1 ≤ N.
#[derive(Clone, Debug)]
pub enum BRatio {
    /// Squared maximum and the n attaining it.
    Bounded { max_sq: Real, at: u64 },
    /// B_{2n} = 0 at this n.
    Unbounded { at: u64 },
    /// Fewer than three terms.
    Empty,
}

impl BRatio {
    pub fn max_f64(&self) -> Option<f64> {
        match self {
            BRatio::Bounded { max_sq, .. } => Some(max_sq.to_f64().max(0.0).sqrt()),
            BRatio::Unbounded { .. } => Some(f64::INFINITY),
            BRatio::Empty => None,
        }
    }

    /// Certified `max ≤ bound`.
    pub fn at_most(&self, bound: i64) -> Option<bool> {
        match self {
            BRatio::Bounded { max_sq, .. } => max_sq.le(&Real::from_int(bound * bound)),
            BRatio::Unbounded { .. } => Some(false),
            BRatio::Empty => Some(true),
        }
    }

    pub fn to_decimal(&self, digits: usize) -> Option<String> {
        match self {
            BRatio::Bounded { max_sq, .. } => Some(max_sq.sqrt().expect("non-negative").to_decimal(digits, true)),
            BRatio::Unbounded { .. } => Some("inf".into()),
            BRatio::Empty => None,
        }
    }
}

#[derive(Default)]
struct BRatioTracker {
    best: Option<(Real, u64)>,
    unbounded: Option<u64>,
    b_even: Option<Scalar>,
}

impl BRatioTracker {
    fn push(&mut self, state: &ApproximantState) {
        if self.unbounded.is_some() {
            return;
        }
        let m = state.n;
        if m.is_multiple_of(2) {
            self.b_even = Some(state.b_cur.clone());
            return;
        }
        let Some(den) = self.b_even.as_ref() else {
            return;
        };
        let n = m / 2;
        let q = if den.is_zero() {
            None
        } else {
            Real::norm_sqr(&state.b_cur).div(&Real::norm_sqr(den))
        };
        match q {
            None => self.unbounded = Some(n),
            Some(q) => {
                let better = match &self.best {
                    None => true,
                    Some((b, _)) => q.gt(b) == Some(true),
                };
                if better {
                    self.best = Some((q, n));
                } else if let Some((b, at)) = self.best.take() {
                    // keep an enclosure of the maximum even when undecided
                    self.best = Some((b.max(&q), at));
                }
            }
        }
    }

    fn finish(self) -> BRatio {
        match (self.unbounded, self.best) {
            (Some(at), _) => BRatio::Unbounded { at },
            (None, Some((max_sq, at))) => BRatio::Bounded { max_sq, at },
            (None, None) => BRatio::Empty,
        }
    }
}

/// Largest |B_{2n+1}/B_{2n}| on the prefix of a unit-denominator spec.
pub fn b_ratio_scan(spec: &SequenceSpec, terms: u64, backend: Backend) -> Result<BRatio> {
    spec.require_unit_denominators(terms, backend.working_precision())?;
    let mut tracker = BRatioTracker::default();
    walk(spec, terms, backend, |s, _| tracker.push(s))?;
    Ok(tracker.finish())
}

/// Least-squares slopes of ln(gap) against n and against ln n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateEstimate {
    /// ln(gap) per term: negative for geometric decay.
    pub per_term: f64,
    /// exponent p in gap ~ n^p: negative for algebraic decay.
    pub power: f64,
    pub kind: RateKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateKind {
    Geometric,
    Algebraic,
    NotDecreasing,
}

fn fit(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}

/// Fits the second half of the finite, nonzero part of a gap trace.
pub fn rate_estimate(gaps: &[(u64, f64)]) -> Option<RateEstimate> {
    let pts: Vec<(f64, f64)> = gaps
        .iter()
        .filter(|(_, g)| g.is_finite() && *g > 0.0)
        .map(|(n, g)| (*n as f64, g.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let tail = &pts[pts.len() / 2..];
    let (per_term, r2_lin) = fit(tail);
    let logs: Vec<(f64, f64)> = tail.iter().map(|(n, y)| (n.ln(), *y)).collect();
    let (power, r2_log) = fit(&logs);
    let kind = if per_term >= 0.0 || power >= 0.0 {
        RateKind::NotDecreasing
    } else if r2_log > r2_lin {
        RateKind::Algebraic
    } else {
        RateKind::Geometric
    };
    Some(RateEstimate { per_term, power, kind })
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub terms_used: u64,
    /// f_1 … f_N
    pub values: Vec<Value>,
    pub limit_estimate: Option<Scalar>,
    pub cauchy_satisfied: bool,
    /// Limit estimates of the even- and odd-indexed subsequences.
    pub even_limit: Option<Scalar>,
    pub odd_limit: Option<Scalar>,
    pub gaps: GapTraces,
    /// Present for unit-denominator specs.
    pub b_ratio: Option<BRatio>,
    /// Largest determinant residual relative to the size of its terms.
    pub determinant_residual_max: f64,
    pub rate: Option<RateEstimate>,
}

impl ConvergenceReport {
    /// |f_{2n} − f_{2n−1}| from the product formula, which unlike the direct
    /// difference does not cancel in float runs.
    pub fn gap_trace(&self) -> Vec<(u64, f64)> {
        self.gaps.even_odd.iter().map(|p| (p.n, p.formula.to_f64())).collect()
    }

    pub fn odd_gap_trace(&self) -> Vec<(u64, f64)> {
        self.gaps.odd.iter().map(|p| (p.n, p.formula.to_f64())).collect()
    }

    /// Last finite approximant.
    pub fn final_value(&self) -> Option<&Scalar> {
        self.values.iter().rev().find_map(Value::finite)
    }

    pub fn last_gap(&self) -> Option<f64> {
        self.gaps.even_odd.last().map(|p| p.formula.to_f64())
    }
}

fn relative_residual(state: &ApproximantState) -> f64 {
    let r = state.determinant_residual();
    if r.is_zero() {
        return 0.0;
    }
    let scale = [
        &state.a_cur * &state.b_prev,
        &state.a_prev * &state.b_cur,
        state.a_product.clone(),
    ]
    .iter()
    .map(Scalar::abs_f64)
    .fold(0.0, f64::max);
    let r = r.abs_f64();
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

/// One pass over the first `terms` approximants collecting every diagnostic.
pub fn analyze(spec: &SequenceSpec, terms: u64, backend: Backend, tol: f64, window: usize) -> Result<ConvergenceReport> {
    let unit = spec.require_unit_denominators(terms, backend.working_precision()).is_ok();
    let mut values = Vec::new();
    let mut gaps = GapTracker::default();
    let mut ratios = BRatioTracker::default();
    let mut residual = 0f64;
    let used = walk(spec, terms, backend, |s, b| {
        values.push(s.approximant());
        gaps.push(s, b);
        if unit {
            ratios.push(s);
        }
        residual = residual.max(relative_residual(s));
    })?;
    let all = limit_estimate(&values, tol, window)?;
    let evens: Vec<Value> = values.iter().skip(1).step_by(2).cloned().collect();
    let odds: Vec<Value> = values.iter().step_by(2).cloned().collect();
    let sub = |v: &[Value]| -> Result<Option<Scalar>> {
        if v.is_empty() {
            return Ok(None);
        }
        Ok(limit_estimate(v, tol, window)?.estimate)
    };
    let even_limit = sub(&evens)?;
    let odd_limit = sub(&odds)?;
    let traces = gaps.traces;
    let gap_values: Vec<(u64, f64)> = traces.even_odd.iter().map(|p| (p.n, p.formula.to_f64())).collect();
    Ok(ConvergenceReport {
        terms_used: used,
        values,
        limit_estimate: all.estimate,
        cauchy_satisfied: all.cauchy,
        even_limit,
        odd_limit,
        rate: rate_estimate(&gap_values),
        gaps: traces,
        b_ratio: unit.then(|| ratios.finish()),
        determinant_residual_max: residual,
    })
}
