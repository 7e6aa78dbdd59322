//! Evaluation of general continued fractions `b₀ + K(aₙ/bₙ)`, their even and
//! odd contractions, and convergence certificates for `K(aₙ/1)`.
//!
//! Values live in one of two backends ([`Backend::Exact`] rationals or
//! [`Backend::Float`] big floats). Sequences come from the small `.cfspec`
//! language in [`speclang`] or are built directly as [`SequenceSpec`]s.

pub mod cli;
pub mod contraction;
pub mod criteria;
pub mod error;
pub mod expr;
pub mod numerics;
pub mod real;
pub mod recurrence;
pub mod scalar;
pub mod sequence;
pub mod speclang;

pub use criteria::{check, certificate_search, Certificate, Criterion, Params, Status, Verdict};
pub use contraction::{even_part, odd_part, verify_contraction, ContractionKind};
pub use error::{Error, Parity, ParseError, Position, Result};
pub use expr::Expr;
pub use numerics::{analyze, b_ratio_scan, even_odd_gap, limit_estimate, ConvergenceReport};
pub use real::Real;
pub use recurrence::{equivalence_to_unit, evaluate_trace, tail_ratio, ApproximantState, TraceEntry};
pub use scalar::{Backend, Scalar, Value};
pub use sequence::SequenceSpec;
pub use speclang::{eval_term, parse_expr, parse_spec};
