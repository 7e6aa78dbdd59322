//! Convergence certificates for `K(aₙ/1)` checked on finite prefixes.
//!
//! Every checker compares element moduli against thresholds with certified
//! arithmetic ([`Real`]): a comparison that rounding cannot decide counts as
//! a violation and is flagged `undecided`. A verdict of
//! [`Status::HoldsOnPrefix`] means every inequality instance with indices up
//! to `checked_up_to` was verified.

mod classical;
mod search;
mod theorem;

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::real::Real;
use crate::scalar::Scalar;
use crate::sequence::SequenceSpec;
use crate::speclang::parse_expr;

pub use classical::{
    classical_check, hayden_check, lange_check, pringsheim_check, thron_check, wall_fundamental_check,
    worpitzky_check,
};
pub use search::{certificate_search, SearchTarget};
pub use theorem::{cor1_beta, corollary_check, theorem3_check};

/// Precision used when an element has to be generated in big-float form.
pub const ELEMENT_PRECISION: usize = 256;

/// Violations kept in a verdict; the total is still counted.
pub const MAX_VIOLATIONS: usize = 32;

const RENDER_DIGITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Worpitzky,
    Pringsheim,
    WallFundamental,
    Theorem3,
    Cornew,
    Cor1,
    Cor2,
    Thron,
    Hayden,
    Lange,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::Worpitzky,
        Criterion::Pringsheim,
        Criterion::WallFundamental,
        Criterion::Theorem3,
        Criterion::Cornew,
        Criterion::Cor1,
        Criterion::Cor2,
        Criterion::Thron,
        Criterion::Hayden,
        Criterion::Lange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Worpitzky => "worpitzky",
            Criterion::Pringsheim => "pringsheim",
            Criterion::WallFundamental => "wall-fundamental",
            Criterion::Theorem3 => "theorem3",
            Criterion::Cornew => "cornew",
            Criterion::Cor1 => "cor1",
            Criterion::Cor2 => "cor2",
            Criterion::Thron => "thron",
            Criterion::Hayden => "hayden",
            Criterion::Lange => "lange",
        }
    }

    /// Checkers that encode only a fragment of the original hypotheses.
    pub fn is_partial(self) -> bool {
        matches!(self, Criterion::Hayden | Criterion::Lange)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Criterion::ALL.iter().map(|c| c.name()).collect();
                Error::InvalidParameter(format!("unknown criterion `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// Which of two alternative condition sets to check. For `cornew` the first
/// set is the one with thresholds in cₙ, βₙ and the second uses c_{n+1}, β_{n+1}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    Cond1,
    Cond2,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Cond1 => "cond1",
            Variant::Cond2 => "cond2",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cond1" => Ok(Variant::Cond1),
            "cond2" => Ok(Variant::Cond2),
            _ => Err(Error::InvalidParameter(format!("unknown variant `{s}` (expected cond1 or cond2)"))),
        }
    }
}

/// Criterion parameters. Sequences are expressions in `n`; constants are
/// expressions that do not mention `n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub variant: Option<Variant>,
    pub c: Option<Expr>,
    pub beta: Option<Expr>,
    pub d: Option<Expr>,
    pub rho: Option<Expr>,
    pub a: Option<Expr>,
    pub r: Option<Expr>,
}

impl Params {
    pub fn theorem3(c: Expr, beta: Expr, variant: Variant) -> Self {
        Params {
            variant: Some(variant),
            c: Some(c),
            beta: Some(beta),
            ..Params::default()
        }
    }

    pub fn with_c(c: Expr) -> Self {
        Params {
            c: Some(c),
            ..Params::default()
        }
    }

    pub fn with_d(d: Expr) -> Self {
        Params {
            d: Some(d),
            ..Params::default()
        }
    }

    pub fn with_rho(rho: Expr) -> Self {
        Params {
            rho: Some(rho),
            ..Params::default()
        }
    }

    pub fn with_r(r: Expr) -> Self {
        Params {
            r: Some(r),
            ..Params::default()
        }
    }

    pub fn lange(a: Expr, rho: Expr, c: Option<Expr>) -> Self {
        Params {
            a: Some(a),
            rho: Some(rho),
            c,
            ..Params::default()
        }
    }

    /// Parses a parameter expression given on the command line.
    pub fn parse(name: &str, text: &str) -> Result<Expr> {
        parse_expr(text).map_err(|e| Error::InvalidParameter(format!("--{name}: {e}")))
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if let Some(v) = self.variant {
            out.push(("variant", v.to_string()));
        }
        let fields = [
            ("c", &self.c),
            ("beta", &self.beta),
            ("d", &self.d),
            ("rho", &self.rho),
            ("a", &self.a),
            ("r", &self.r),
        ];
        for (name, value) in fields {
            if let Some(e) = value {
                out.push((name, e.to_string()));
            }
        }
        out
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (k, v) in entries {
            map.serialize_entry(k, &v)?;
        }
        map.end()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.entries().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub criterion: Criterion,
    pub params: Params,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    HoldsOnPrefix,
    Violated,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::HoldsOnPrefix => "holds-on-prefix",
            Status::Violated => "violated",
        })
    }
}

/// One failing inequality instance. `index` is the element index, or the
/// parameter index for inequalities on parameters only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub inequality: String,
    pub lhs: String,
    pub rhs: String,
    pub undecided: bool,
}

/// Bound on approximants asserted after a passing check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscCheck {
    pub radius: String,
    pub max_modulus: String,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub criterion: Criterion,
    pub status: Status,
    pub checked_up_to: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    /// The prefix covers every distinct inequality instance.
    pub full_certification: bool,
    pub partial: bool,
    pub known_discrepancy: bool,
    pub disc: Option<DiscCheck>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::HoldsOnPrefix
    }

    /// The first failing instance.
    pub fn violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

pub(crate) fn render(x: &Real) -> String {
    x.to_decimal(RENDER_DIGITS, false)
}

/// Collects failing instances in the order they are checked.
pub(crate) struct Recorder {
    criterion: Criterion,
    violations: Vec<Violation>,
    count: u64,
    notes: Vec<String>,
}

impl Recorder {
    pub(crate) fn new(criterion: Criterion) -> Self {
        Recorder {
            criterion,
            violations: Vec::new(),
            count: 0,
            notes: Vec::new(),
        }
    }

    pub(crate) fn record(
        &mut self,
        index: u64,
        inequality: &str,
        outcome: Option<bool>,
        lhs: impl FnOnce() -> Real,
        rhs: &Real,
    ) {
        if outcome == Some(true) {
            return;
        }
        self.count += 1;
        if self.violations.len() < MAX_VIOLATIONS {
            self.violations.push(Violation {
                index,
                inequality: inequality.to_string(),
                lhs: render(&lhs()),
                rhs: render(rhs),
                undecided: outcome.is_none(),
            });
        }
    }

    pub(crate) fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub(crate) fn is_clean(&self) -> bool {
        self.count == 0
    }

    pub(crate) fn finish(self, checked_up_to: u64, full_certification: bool) -> Verdict {
        let holds = self.count == 0;
        let mut notes = self.notes;
        if self.criterion.is_partial() {
            notes.push("partial: only the quoted fragment of the hypotheses is checked".into());
        }
        if self.violations.iter().any(|v| v.undecided) {
            notes.push("some comparisons could not be decided at working precision".into());
        }
        Verdict {
            criterion: self.criterion,
            status: if holds { Status::HoldsOnPrefix } else { Status::Violated },
            checked_up_to,
            violation_count: self.count,
            violations: self.violations,
            full_certification: holds && full_certification,
            partial: self.criterion.is_partial(),
            known_discrepancy: false,
            disc: None,
            notes,
        }
    }
}

/// Number of elements actually available for a requested prefix.
pub(crate) fn prefix_len(spec: &SequenceSpec, terms: u64) -> Result<u64> {
    if terms == 0 {
        return Err(Error::InvalidInput("at least one term is required".into()));
    }
    Ok(spec.len().map_or(terms, |l| l.min(terms)))
}

pub(crate) fn element(spec: &SequenceSpec, n: u64) -> Result<Scalar> {
    spec.numerator(n, ELEMENT_PRECISION)
}

pub(crate) fn elements(spec: &SequenceSpec, upto: u64) -> Result<Vec<Scalar>> {
    (1..=upto).map(|n| element(spec, n)).collect()
}

/// Value of a parameter sequence at `n`.
pub(crate) fn param_at(expr: &Expr, name: &str, n: u64) -> Result<Real> {
    expr.eval_real(n as i64)
        .map_err(|e| Error::InvalidParameter(format!("{name} at n = {n}: {e}")))
}

pub(crate) fn required<'a>(value: &'a Option<Expr>, name: &str, criterion: Criterion) -> Result<&'a Expr> {
    value
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("{criterion} needs --{name}")))
}

pub(crate) fn constant(expr: &Expr, name: &str) -> Result<Real> {
    if expr.depends_on_index() {
        return Err(Error::InvalidParameter(format!("{name} must be a constant")));
    }
    param_at(expr, name, 0)
}

/// Certified |a| ≥ t.
pub(crate) fn modulus_ge(a: &Scalar, t: &Real) -> Option<bool> {
    match t.is_positive() {
        Some(true) => Real::norm_sqr(a).ge(&t.square()),
        Some(false) => Some(true),
        None => Real::modulus(a).ge(t),
    }
}

/// Certified |a| ≤ t.
pub(crate) fn modulus_le(a: &Scalar, t: &Real) -> Option<bool> {
    match t.ge(&Real::zero()) {
        Some(true) => Real::norm_sqr(a).le(&t.square()),
        Some(false) => Some(false),
        None => Real::modulus(a).le(t),
    }
}

/// Certified |a| < t.
pub(crate) fn modulus_lt(a: &Scalar, t: &Real) -> Option<bool> {
    match t.is_positive() {
        Some(true) => Real::norm_sqr(a).lt(&t.square()),
        Some(false) => Some(false),
        None => Real::modulus(a).lt(t),
    }
}

/// Smallest prefix length covering every distinct inequality instance of a
/// periodic spec, given the span of indices one instance inspects.
pub(crate) fn covers_period(spec: &SequenceSpec, checked: u64, first: u64, stride: u64, span: u64) -> bool {
    let Some(p) = spec.period() else {
        return false;
    };
    if spec.len().is_some() {
        return false;
    }
    // instances repeat after lcm(p, stride) / stride steps
    let g = gcd(p, stride);
    let instances = p / g;
    checked >= first + stride * (instances - 1) + span - 1
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Runs the checker for `criterion` with its parameters taken from `params`.
pub fn check(spec: &SequenceSpec, criterion: Criterion, params: &Params, terms: u64) -> Result<Verdict> {
    match criterion {
        Criterion::Worpitzky => worpitzky_check(spec, terms),
        Criterion::Pringsheim => pringsheim_check(spec, terms),
        Criterion::WallFundamental => wall_fundamental_check(spec, required(&params.r, "r", criterion)?, terms),
        Criterion::Theorem3 => theorem3_check(
            spec,
            required(&params.c, "c", criterion)?,
            required(&params.beta, "beta", criterion)?,
            params.variant.unwrap_or_default(),
            terms,
        ),
        Criterion::Cornew | Criterion::Cor1 | Criterion::Cor2 => corollary_check(spec, criterion, params, terms),
        Criterion::Thron | Criterion::Hayden | Criterion::Lange => classical_check(spec, criterion, params, terms),
    }
}

/// Whether `spec` looks like the growing example |a_{2n−1}| = 4n, |a_{2n}| = 25n
/// checked against cor2 with dₙ = 25n, whose hypotheses fail as indexed.
pub fn is_known_discrepancy(spec: &SequenceSpec, criterion: Criterion, params: &Params, terms: u64) -> bool {
    if criterion != Criterion::Cor2 {
        return false;
    }
    let Some(d) = &params.d else {
        return false;
    };
    let upto = spec.len().map_or(terms, |l| l.min(terms)).min(40);
    if upto < 3 {
        return false;
    }
    (1..=upto).all(|n| {
        let k = n.div_ceil(2) as i64;
        let expected = if n % 2 == 1 { 4 * k } else { 25 * k };
        let Ok(a) = element(spec, n) else {
            return false;
        };
        let target = Real::from_int(expected * expected);
        let element_ok = Real::norm_sqr(&a).cmp_certified(&target) == Some(std::cmp::Ordering::Equal);
        let d_ok = param_at(d, "d", n).is_ok_and(|v| v.as_exact() == Real::from_int(25 * n as i64).as_exact());
        element_ok && d_ok
    })
}

pub(crate) const DISCREPANCY_NOTE: &str = "known discrepancy: the sequence |a_(2n-1)| = 4n, |a_2n| = 25n is \
    stated to converge by this corollary, but with d_n = 25n its hypotheses fail as indexed \
    (d_1 = 25 is not > 25 and |a_(2n+1)| = 4(n+1) > 4n); use the numerical diagnostics as evidence instead";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_names_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        assert!("worpitsky".parse::<Criterion>().is_err());
    }

    #[test]
    fn params_serialize_in_fixed_order() {
        let p = Params::theorem3(Expr::rational(dashu_ratio::RBig::from(1) / dashu_ratio::RBig::from(23)), Expr::int(0), Variant::Cond2);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"variant":"cond2","c":"1/23","beta":"0"}"#);
    }

    #[test]
    fn period_coverage() {
        let spec = SequenceSpec::periodic(vec![Scalar::ratio(1, 4)]).unwrap();
        assert!(covers_period(&spec, 1, 1, 1, 1));
        let spec = crate::speclang::parse_spec("even: -36/23; odd: 1/23;").unwrap();
        assert!(covers_period(&spec, 3, 2, 2, 2));
        assert!(!covers_period(&spec, 2, 2, 2, 2));
    }
}
