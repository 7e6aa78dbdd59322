use dashu_ratio::RBig;

use super::{
    covers_period, element, elements, modulus_ge, modulus_le, modulus_lt, param_at, prefix_len, render, required,
    constant, Criterion, DiscCheck, Params, Recorder, Verdict, ELEMENT_PRECISION,
};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::real::Real;
use crate::recurrence::Approximants;
use crate::scalar::{Backend, Scalar, Value};
use crate::sequence::SequenceSpec;

fn unit_form(spec: &SequenceSpec, upto: u64) -> Result<()> {
    spec.require_unit_denominators(upto, ELEMENT_PRECISION)
}

/// Checks |f_n − b₀| < radius for n ≤ upto in a 256-bit float run.
fn disc_check(spec: &SequenceSpec, upto: u64, radius: &Real) -> Result<DiscCheck> {
    let backend = Backend::float(ELEMENT_PRECISION)?;
    let b0 = spec.b0(ELEMENT_PRECISION)?;
    let mut satisfied = true;
    let mut max_sq = Real::zero();
    for state in Approximants::new(spec, backend)?.take(upto as usize) {
        match state?.approximant() {
            Value::Infinity => {
                satisfied = false;
                break;
            }
            Value::Finite(f) => {
                let m = Real::norm_sqr(&(f - &b0));
                satisfied &= m.lt(&radius.square()) == Some(true);
                max_sq = max_sq.max(&m);
            }
        }
    }
    Ok(DiscCheck {
        radius: render(radius),
        max_modulus: render(&max_sq.sqrt().expect("non-negative")),
        satisfied,
    })
}

/// |aₙ| ≤ 1/4 for n ≤ N; on success also confirms |f_n| < 1/2.
pub fn worpitzky_check(spec: &SequenceSpec, terms: u64) -> Result<Verdict> {
    let upto = prefix_len(spec, terms)?;
    unit_form(spec, upto)?;
    let quarter = Real::ratio(1, 4);
    let mut rec = Recorder::new(Criterion::Worpitzky);
    for n in 1..=upto {
        let a = element(spec, n)?;
        rec.record(n, "|a_n| <= 1/4", modulus_le(&a, &quarter), || Real::modulus(&a), &quarter);
    }
    let full = covers_period(spec, upto, 1, 1, 1);
    let clean = rec.is_clean();
    let mut verdict = rec.finish(upto, full);
    if clean {
        verdict.disc = Some(disc_check(spec, upto, &Real::ratio(1, 2))?);
    }
    Ok(verdict)
}

/// |bₙ| ≥ |aₙ| + 1 for n ≤ N; on success also confirms |f_n − b₀| < 1.
pub fn pringsheim_check(spec: &SequenceSpec, terms: u64) -> Result<Verdict> {
    let upto = prefix_len(spec, terms)?;
    let mut rec = Recorder::new(Criterion::Pringsheim);
    for n in 1..=upto {
        let (a, b) = spec.term(n, ELEMENT_PRECISION)?;
        let rhs = Real::modulus(&a).add(&Real::one());
        rec.record(n, "|b_n| >= |a_n| + 1", modulus_ge(&b, &rhs), || Real::modulus(&b), &rhs);
    }
    let full = covers_period(spec, upto, 1, 1, 1);
    let clean = rec.is_clean();
    let mut verdict = rec.finish(upto, full);
    if clean {
        verdict.disc = Some(disc_check(spec, upto, &Real::one())?);
    }
    Ok(verdict)
}

/// Wall's fundamental inequalities with the given rₙ ≥ 0.
pub fn wall_fundamental_check(spec: &SequenceSpec, r: &Expr, terms: u64) -> Result<Verdict> {
    let upto = prefix_len(spec, terms)?;
    unit_form(spec, upto)?;
    let rs = (1..=upto)
        .map(|n| {
            let v = param_at(r, "r", n)?;
            match v.ge(&Real::zero()) {
                Some(true) => Ok(v),
                _ => Err(Error::InvalidParameter(format!("r must be non-negative, r_{n} = {}", render(&v)))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let a = elements(spec, upto)?;
    let one = Scalar::one();
    let mut rec = Recorder::new(Criterion::WallFundamental);
    for n in 1..=upto {
        let i = (n - 1) as usize;
        let (id, lhs, rhs) = match n {
            1 => (
                "r_1|1+a_1| >= |a_1|",
                rs[0].mul(&Real::modulus(&(&one + &a[0]))),
                Real::modulus(&a[0]),
            ),
            2 => (
                "r_2|1+a_1+a_2| >= |a_2|",
                rs[1].mul(&Real::modulus(&(&one + &a[0] + &a[1]))),
                Real::modulus(&a[1]),
            ),
            _ => (
                "r_n|1+a_(n-1)+a_n| >= r_n r_(n-2)|a_(n-1)| + |a_n|",
                rs[i].mul(&Real::modulus(&(&one + &a[i - 1] + &a[i]))),
                rs[i].mul(&rs[i - 2]).mul(&Real::modulus(&a[i - 1])).add(&Real::modulus(&a[i])),
            ),
        };
        rec.record(n, id, lhs.ge(&rhs), || lhs.clone(), &rhs);
    }
    let full = !r.depends_on_index() && covers_period(spec, upto, 2, 1, 2);
    Ok(rec.finish(upto, full))
}

/// ρ > 1 as a certified real.
fn thron_rho(rho: &Expr) -> Result<Real> {
    let rho = constant(rho, "rho")?;
    if rho.gt(&Real::one()) != Some(true) {
        return Err(Error::InvalidParameter(format!("rho must exceed 1, got {}", render(&rho))));
    }
    Ok(rho)
}

/// 2(ρ² − cos arg a) with cos arg a = Re(a)/|a|.
pub(crate) fn thron_even_bound(a: &Scalar, rho_sq: &Real) -> Real {
    let re = Real::from_scalar(&a.re()).expect("real part is real");
    let cos = re.div(&Real::modulus(a)).expect("elements are nonzero");
    Real::from_int(2).mul(&rho_sq.sub(&cos))
}

/// |a_{2n−1}| ≤ ρ² and |a_{2n}| ≥ 2(ρ² − cos arg a_{2n}).
pub fn thron_check(spec: &SequenceSpec, rho: &Expr, terms: u64) -> Result<Verdict> {
    let upto = prefix_len(spec, terms)?;
    unit_form(spec, upto)?;
    let rho = thron_rho(rho)?;
    let rho_sq = rho.square();
    let mut rec = Recorder::new(Criterion::Thron);
    for n in 1..=upto {
        let a = element(spec, n)?;
        if n % 2 == 1 {
            rec.record(n, "|a_(2n-1)| <= rho^2", modulus_le(&a, &rho_sq), || Real::modulus(&a), &rho_sq);
        } else {
            let bound = thron_even_bound(&a, &rho_sq);
            let lhs = Real::modulus(&a);
            rec.record(n, "|a_2n| >= 2(rho^2 - cos arg a_2n)", lhs.ge(&bound), || lhs.clone(), &bound);
        }
    }
    let full = covers_period(spec, upto, 1, 2, 2);
    Ok(rec.finish(upto, full))
}

/// For each n ≤ N − 1, |aₙ| < 1 or |a_{n+1}| < 1.
pub fn hayden_check(spec: &SequenceSpec, terms: u64) -> Result<Verdict> {
    let upto = prefix_len(spec, terms)?;
    unit_form(spec, upto)?;
    let one = Real::one();
    let a = elements(spec, upto)?;
    let mut rec = Recorder::new(Criterion::Hayden);
    for n in 1..upto {
        let i = (n - 1) as usize;
        let first = modulus_lt(&a[i], &one);
        let second = modulus_lt(&a[i + 1], &one);
        let outcome = match (first, second) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        };
        let smaller = || Real::modulus(&a[i]).min(&Real::modulus(&a[i + 1]));
        rec.record(n, "min(|a_n|, |a_(n+1)|) < 1", outcome, smaller, &one);
    }
    Ok(rec.finish(upto, false))
}

fn parts(s: &Scalar) -> (Real, Real) {
    (
        Real::from_scalar(&s.re()).expect("real part"),
        Real::from_scalar(&s.im()).expect("imaginary part"),
    )
}

/// |c_{2n−1} ± i·a| ≤ ρ with |a| < ρ < |a + 1|. Without an explicit cₙ the
/// principal square root of aₙ is used.
pub fn lange_check(spec: &SequenceSpec, a: &Expr, rho: &Expr, c: Option<&Expr>, terms: u64) -> Result<Verdict> {
    let upto = prefix_len(spec, terms)?;
    unit_form(spec, upto)?;
    if a.depends_on_index() {
        return Err(Error::InvalidParameter("a must be a constant".into()));
    }
    let shift = a
        .eval(0, ELEMENT_PRECISION)
        .map_err(|e| Error::InvalidParameter(format!("a: {e}")))?;
    let rho = constant(rho, "rho")?;
    let a_mod = Real::modulus(&shift);
    let a1_mod = Real::modulus(&(&shift + &Scalar::one()));
    if a_mod.lt(&rho) != Some(true) || rho.lt(&a1_mod) != Some(true) {
        return Err(Error::InvalidParameter(format!(
            "lange needs |a| < rho < |a+1|, got |a| = {}, rho = {}, |a+1| = {}",
            render(&a_mod),
            render(&rho),
            render(&a1_mod)
        )));
    }
    let (sa_re, sa_im) = parts(&shift);
    let rho_sq = rho.square();
    let mut rec = Recorder::new(Criterion::Lange);
    let mut n = 1;
    while n <= upto {
        let cn = match c {
            Some(e) => e
                .eval(n as i64, ELEMENT_PRECISION)
                .map_err(|err| Error::InvalidParameter(format!("c at n = {n}: {err}")))?,
            None => element(spec, n)?.sqrt(ELEMENT_PRECISION),
        };
        let (c_re, c_im) = parts(&cn);
        // i·a = −Im(a) + i·Re(a)
        for (sign, id) in [(1, "|c_(2n-1) + i a| <= rho"), (-1, "|c_(2n-1) - i a| <= rho")] {
            let (re, im) = if sign > 0 {
                (c_re.sub(&sa_im), c_im.add(&sa_re))
            } else {
                (c_re.add(&sa_im), c_im.sub(&sa_re))
            };
            let norm = re.square().add(&im.square());
            rec.record(n, id, norm.le(&rho_sq), || norm.sqrt().expect("non-negative"), &rho);
        }
        n += 2;
    }
    Ok(rec.finish(upto, false))
}

/// Dispatch for the classical comparison criteria.
pub fn classical_check(spec: &SequenceSpec, criterion: Criterion, params: &Params, terms: u64) -> Result<Verdict> {
    match criterion {
        Criterion::Thron => thron_check(spec, required(&params.rho, "rho", criterion)?, terms),
        Criterion::Hayden => hayden_check(spec, terms),
        Criterion::Lange => lange_check(
            spec,
            params.a.as_ref().unwrap_or(&Expr::Number(RBig::ZERO)),
            required(&params.rho, "rho", criterion)?,
            params.c.as_ref(),
            terms,
        ),
        other => Err(Error::InvalidParameter(format!("{other} is not a classical criterion"))),
    }
}
