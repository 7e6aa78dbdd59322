use std::fmt;
use std::str::FromStr;

use dashu_ratio::RBig;
use serde::Serialize;

use super::classical::{thron_check, thron_even_bound};
use super::{element, prefix_len, theorem3_check, Certificate, Criterion, Params, Variant, ELEMENT_PRECISION};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::real::Real;
use crate::sequence::SequenceSpec;

/// Points of the logarithmic c-grid for the constant certificate.
const C_GRID: usize = 128;
/// ρ = 10^{j/512}, j = 1..=512.
const RHO_GRID: u32 = 512;
const RHO_BISECTIONS: usize = 3;
/// Relative slack when rounding grid values to rationals.
const SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchTarget {
    Theorem3Constant,
    Thron,
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchTarget::Theorem3Constant => "theorem3-constant",
            SearchTarget::Thron => "thron",
        })
    }
}

impl FromStr for SearchTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem3-constant" | "theorem3" => Ok(SearchTarget::Theorem3Constant),
            "thron" => Ok(SearchTarget::Thron),
            _ => Err(Error::InvalidParameter(format!(
                "unknown search target `{s}` (expected theorem3-constant or thron)"
            ))),
        }
    }
}

/// Searches for parameters that pass the target's checker on the first
/// `terms` elements. Deterministic; `None` when nothing on the grid passes.
pub fn certificate_search(spec: &SequenceSpec, target: SearchTarget, terms: u64) -> Result<Option<Certificate>> {
    let upto = prefix_len(spec, terms)?;
    spec.require_unit_denominators(upto, ELEMENT_PRECISION)?;
    match target {
        SearchTarget::Theorem3Constant => theorem3_constant(spec, upto),
        SearchTarget::Thron => thron(spec, upto),
    }
}

fn rational(x: f64) -> Option<RBig> {
    RBig::simplest_from_f64(x)
}

struct Extremes {
    /// min |a_{2n}|
    even: Real,
    /// max |a_{2n+1}|, n ≥ 1
    odd: Real,
}

fn theorem3_extremes(spec: &SequenceSpec, upto: u64) -> Result<Extremes> {
    let mut even: Option<Real> = None;
    let mut odd: Option<Real> = None;
    for n in 2..=upto {
        let m = Real::norm_sqr(&element(spec, n)?);
        let slot = if n % 2 == 0 { &mut even } else { &mut odd };
        *slot = Some(match slot.take() {
            None => m,
            Some(prev) if n % 2 == 0 => prev.min(&m),
            Some(prev) => prev.max(&m),
        });
    }
    let root = |x: Real| x.sqrt().expect("non-negative");
    Ok(Extremes {
        even: root(even.expect("upto >= 3")),
        odd: root(odd.expect("upto >= 3")),
    })
}

/// Cheap screen of constant (c, β) against the extremes.
fn screen(x: &Extremes, c: &RBig, beta: &RBig) -> bool {
    let c = Real::Exact(c.clone());
    let b = Real::Exact(beta.clone());
    let one = Real::one();
    if c.is_positive() != Some(true) || b.is_positive() != Some(true) || b.lt(&one) != Some(true) {
        return false;
    }
    let lower = c.add(&one).div(&one.sub(&b)).expect("beta < 1");
    let quarter = b.square().mul(&lower).div(&Real::from_int(4)).expect("nonzero");
    x.even.ge(&lower) == Some(true) && x.odd.le(&c) == Some(true) && x.odd.le(&quarter) == Some(true)
}

fn theorem3_candidate(spec: &SequenceSpec, upto: u64, c: RBig, beta: RBig) -> Result<Option<Certificate>> {
    let params = Params::theorem3(Expr::rational(c), Expr::rational(beta), Variant::Cond1);
    let verdict = theorem3_check(
        spec,
        params.c.as_ref().unwrap(),
        params.beta.as_ref().unwrap(),
        Variant::Cond1,
        upto,
    )?;
    Ok(verdict.holds().then_some(Certificate {
        criterion: Criterion::Theorem3,
        params,
    }))
}

/// For constant parameters the odd bound forces c ≥ max|a_{2n+1}| and the
/// even bound gives β ≤ 1 − (c+1)/min|a_{2n}|; the remaining inequality
/// (E − c − 1)² ≥ 4Ec is tightest at the smallest c, so c = max|a_{2n+1}|
/// is tried first, then a logarithmic grid above it.
fn theorem3_constant(spec: &SequenceSpec, upto: u64) -> Result<Option<Certificate>> {
    if upto < 3 {
        return Ok(None);
    }
    let x = theorem3_extremes(spec, upto)?;
    if let (Some(e), Some(o)) = (x.even.as_exact(), x.odd.as_exact()) {
        if e > &RBig::ZERO {
            let beta = RBig::ONE - (o + RBig::ONE) / e;
            if screen(&x, o, &beta) {
                if let Some(cert) = theorem3_candidate(spec, upto, o.clone(), beta)? {
                    return Ok(Some(cert));
                }
            }
        }
    }
    let (e_lo, _) = x.even.bounds();
    let (_, o_hi) = x.odd.bounds();
    let e = e_lo.to_f64().value();
    let o = o_hi.to_f64().value();
    if !(e.is_finite() && o.is_finite() && o > 0.0) {
        return Ok(None);
    }
    let top = e.max(2.0 * o);
    for j in 0..C_GRID {
        let t = j as f64 / (C_GRID - 1) as f64;
        let c_f = o * (top / o).powf(t) * (1.0 + SLACK);
        let beta_f = (1.0 - (c_f + 1.0) / e) * (1.0 - SLACK);
        if !(beta_f > 0.0 && beta_f < 1.0) {
            continue;
        }
        let (Some(c), Some(beta)) = (rational(c_f), rational(beta_f)) else {
            continue;
        };
        if screen(&x, &c, &beta) {
            if let Some(cert) = theorem3_candidate(spec, upto, c, beta)? {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// max |a_{2n−1}|² and min over even indices of |a| + 2 cos arg a.
fn thron_extremes(spec: &SequenceSpec, upto: u64) -> Result<(Real, Option<Real>)> {
    let mut odd = Real::zero();
    let mut even: Option<Real> = None;
    let zero = Real::zero();
    for n in 1..=upto {
        let a = element(spec, n)?;
        if n % 2 == 1 {
            odd = odd.max(&Real::norm_sqr(&a));
        } else {
            // |a| − 2(0 − cos) = |a| + 2 cos arg a
            let slack = Real::modulus(&a).sub(&thron_even_bound(&a, &zero));
            even = Some(match even {
                None => slack,
                Some(prev) => prev.min(&slack),
            });
        }
    }
    Ok((odd, even))
}

enum RhoOutcome {
    TooSmall,
    TooLarge,
    Feasible,
}

fn thron(spec: &SequenceSpec, upto: u64) -> Result<Option<Certificate>> {
    let (odd, even) = thron_extremes(spec, upto)?;
    let classify = |rho: &RBig| {
        let sq = Real::Exact(rho * rho);
        if odd.le(&sq.square()) != Some(true) {
            RhoOutcome::TooSmall
        } else if even
            .as_ref()
            .is_some_and(|m| m.ge(&Real::from_int(2).mul(&sq)) != Some(true))
        {
            RhoOutcome::TooLarge
        } else {
            RhoOutcome::Feasible
        }
    };
    let validate = |rho: RBig| -> Result<Option<Certificate>> {
        let expr = Expr::rational(rho);
        let verdict = thron_check(spec, &expr, upto)?;
        Ok(verdict.holds().then(|| Certificate {
            criterion: Criterion::Thron,
            params: Params::with_rho(expr),
        }))
    };
    let grid = |j: u32| RBig::try_from(10f64.powf(j as f64 / RHO_GRID as f64)).expect("finite");
    let mut last_small: Option<RBig> = None;
    for j in 1..=RHO_GRID {
        let rho = grid(j);
        match classify(&rho) {
            RhoOutcome::Feasible => {
                if let Some(cert) = validate(rho)? {
                    return Ok(Some(cert));
                }
            }
            RhoOutcome::TooSmall => last_small = Some(rho),
            RhoOutcome::TooLarge => {
                // the odd bound only loosens and the even bound only tightens
                // as ρ grows, so a feasible ρ can only sit below this point
                let mut lo = last_small.unwrap_or(RBig::ONE);
                let mut hi = rho;
                for _ in 0..RHO_BISECTIONS {
                    let mid = (&lo + &hi) / RBig::from(2);
                    match classify(&mid) {
                        RhoOutcome::TooSmall => lo = mid,
                        RhoOutcome::TooLarge => hi = mid,
                        RhoOutcome::Feasible => return validate(mid),
                    }
                }
                return Ok(None);
            }
        }
    }
    Ok(None)
}
