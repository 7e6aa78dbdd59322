use super::{
    covers_period, element, is_known_discrepancy, modulus_ge, modulus_le, param_at, prefix_len, render, required,
    constant, Criterion, Params, Recorder, Variant, Verdict, DISCREPANCY_NOTE, ELEMENT_PRECISION,
};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::real::Real;
use crate::sequence::SequenceSpec;

type Bound = (&'static str, Real);

/// Lower bounds on |a_{2n}| and upper bounds on |a_{2n+1}| for one n.
struct Instance {
    even: Vec<Bound>,
    odd: Vec<Bound>,
}

/// Shared driver: for n ≥ 1 checks the even bounds at index 2n and the odd
/// bounds at 2n + 1. a₁ only has to be nonzero.
fn run(
    spec: &SequenceSpec,
    criterion: Criterion,
    terms: u64,
    mut param_checks: impl FnMut(u64, &mut Recorder) -> Result<()>,
    mut instance: impl FnMut(u64) -> Result<Instance>,
) -> Result<(Recorder, u64)> {
    let upto = prefix_len(spec, terms)?;
    spec.require_unit_denominators(upto, ELEMENT_PRECISION)?;
    element(spec, 1)?;
    let mut rec = Recorder::new(criterion);
    let mut n = 1;
    while 2 * n <= upto {
        param_checks(n, &mut rec)?;
        let bounds = instance(n)?;
        let a = element(spec, 2 * n)?;
        for (id, t) in &bounds.even {
            rec.record(2 * n, id, modulus_ge(&a, t), || Real::modulus(&a), t);
        }
        if 2 * n < upto {
            let a = element(spec, 2 * n + 1)?;
            for (id, t) in &bounds.odd {
                rec.record(2 * n + 1, id, modulus_le(&a, t), || Real::modulus(&a), t);
            }
        }
        n += 1;
    }
    Ok((rec, upto))
}

/// Values of cₙ and βₙ for n = 1..=count, validated.
fn c_beta(c: &Expr, beta: &Expr, count: u64) -> Result<(Vec<Real>, Vec<Real>)> {
    let mut cs = vec![Real::zero()];
    let mut bs = vec![Real::zero()];
    for n in 1..=count {
        let cn = param_at(c, "c", n)?;
        let bn = param_at(beta, "beta", n)?;
        if cn.is_positive() != Some(true) {
            return Err(Error::InvalidParameter(format!("c_n must be positive, c_{n} = {}", render(&cn))));
        }
        if bn.is_positive() != Some(true) || bn.lt(&Real::one()) != Some(true) {
            return Err(Error::InvalidParameter(format!(
                "beta_n must lie in (0, 1), beta_{n} = {}",
                render(&bn)
            )));
        }
        cs.push(cn);
        bs.push(bn);
    }
    Ok((cs, bs))
}

/// (c_m + 1)/(1 − β_m)
fn lower(cs: &[Real], bs: &[Real], m: usize) -> Result<Real> {
    cs[m]
        .add(&Real::one())
        .div(&Real::one().sub(&bs[m]))
        .ok_or_else(|| Error::InvalidParameter(format!("1 - beta_{m} is not certainly nonzero")))
}

/// βₙβ_{n+1}(c_m + 1)/(4(1 − β_m))
fn quarter(cs: &[Real], bs: &[Real], n: usize, m: usize) -> Result<Real> {
    Ok(bs[n].mul(&bs[n + 1]).mul(&lower(cs, bs, m)?).div(&Real::from_int(4)).expect("4 is nonzero"))
}

const EVEN_N: &str = "|a_2n| >= (c_n+1)/(1-beta_n)";
const EVEN_N1: &str = "|a_2n| >= (c_(n+1)+1)/(1-beta_(n+1))";
const ODD_C_N: &str = "|a_(2n+1)| <= c_n";
const ODD_C_N1: &str = "|a_(2n+1)| <= c_(n+1)";
const ODD_Q_N1: &str = "|a_(2n+1)| <= beta_n beta_(n+1) (c_(n+1)+1)/(4(1-beta_(n+1)))";
const ODD_Q_N: &str = "|a_(2n+1)| <= beta_n beta_(n+1) (c_n+1)/(4(1-beta_n))";

fn parameter_count(spec: &SequenceSpec, terms: u64) -> Result<u64> {
    Ok(prefix_len(spec, terms)? / 2 + 1)
}

/// The general criterion in cₙ, βₙ under condition set `variant`.
pub fn theorem3_check(spec: &SequenceSpec, c: &Expr, beta: &Expr, variant: Variant, terms: u64) -> Result<Verdict> {
    let (cs, bs) = c_beta(c, beta, parameter_count(spec, terms)?)?;
    let (rec, upto) = run(spec, Criterion::Theorem3, terms, |_, _| Ok(()), |n| {
        let n = n as usize;
        Ok(match variant {
            Variant::Cond1 => Instance {
                even: vec![(EVEN_N, lower(&cs, &bs, n)?)],
                odd: vec![
                    (ODD_C_N, cs[n].clone()),
                    (ODD_C_N1, cs[n + 1].clone()),
                    (ODD_Q_N1, quarter(&cs, &bs, n, n + 1)?),
                    (ODD_Q_N, quarter(&cs, &bs, n, n)?),
                ],
            },
            Variant::Cond2 => Instance {
                even: vec![(EVEN_N, lower(&cs, &bs, n)?), (EVEN_N1, lower(&cs, &bs, n + 1)?)],
                odd: vec![
                    (ODD_C_N, cs[n].clone()),
                    (ODD_C_N1, cs[n + 1].clone()),
                    (ODD_Q_N1, quarter(&cs, &bs, n, n + 1)?),
                ],
            },
        })
    })?;
    let constant_params = !c.depends_on_index() && !beta.depends_on_index();
    Ok(rec.finish(upto, constant_params && covers_period(spec, upto, 2, 2, 2)))
}

/// βₙ for the reduction of cor1 to the general criterion:
/// 2(√(c(2c+1)) − c)/(c + 1).
pub fn cor1_beta(c: &Expr) -> Expr {
    let two = || Box::new(Expr::int(2));
    let c = || Box::new(c.clone());
    let root = Expr::Sqrt(Box::new(Expr::Mul(
        c(),
        Box::new(Expr::Add(Box::new(Expr::Mul(two(), c())), Box::new(Expr::int(1)))),
    )));
    Expr::Div(
        Box::new(Expr::Mul(two(), Box::new(Expr::Sub(Box::new(root), c())))),
        Box::new(Expr::Add(c(), Box::new(Expr::int(1)))),
    )
}

/// T(c) = 1 + 3c + 2√(c(2c + 1))
fn cor1_threshold(c: &Real) -> Real {
    let root = c.mul(&Real::from_int(2).mul(c).add(&Real::one())).sqrt().expect("c > 0");
    Real::one().add(&Real::from_int(3).mul(c)).add(&Real::from_int(2).mul(&root))
}

fn cornew_check(spec: &SequenceSpec, params: &Params, terms: u64) -> Result<Verdict> {
    let criterion = Criterion::Cornew;
    let c = required(&params.c, "c", criterion)?;
    let beta = required(&params.beta, "beta", criterion)?;
    let variant = params.variant.unwrap_or_default();
    let (cs, bs) = c_beta(c, beta, parameter_count(spec, terms)?)?;
    for n in 1..cs.len() - 1 {
        for (name, v) in [("c", &cs), ("beta", &bs)] {
            if v[n].le(&v[n + 1]) != Some(true) {
                return Err(Error::InvalidParameter(format!(
                    "{name}_n must be increasing, {name}_{} = {} > {name}_{} = {}",
                    n,
                    render(&v[n]),
                    n + 1,
                    render(&v[n + 1])
                )));
            }
        }
    }
    let (rec, upto) = run(spec, criterion, terms, |_, _| Ok(()), |n| {
        let n = n as usize;
        Ok(match variant {
            Variant::Cond1 => Instance {
                even: vec![(EVEN_N, lower(&cs, &bs, n)?)],
                odd: vec![(ODD_C_N, cs[n].clone()), (ODD_Q_N, quarter(&cs, &bs, n, n)?)],
            },
            Variant::Cond2 => Instance {
                even: vec![(EVEN_N1, lower(&cs, &bs, n + 1)?)],
                odd: vec![(ODD_C_N, cs[n].clone()), (ODD_Q_N1, quarter(&cs, &bs, n, n + 1)?)],
            },
        })
    })?;
    let constant_params = !c.depends_on_index() && !beta.depends_on_index();
    Ok(rec.finish(upto, constant_params && covers_period(spec, upto, 2, 2, 2)))
}

fn cor1_check(spec: &SequenceSpec, params: &Params, terms: u64) -> Result<Verdict> {
    let c = constant(required(&params.c, "c", Criterion::Cor1)?, "c")?;
    if c.is_positive() != Some(true) {
        return Err(Error::InvalidParameter(format!("cor1 needs c > 0, got {}", render(&c))));
    }
    let t = cor1_threshold(&c);
    let (rec, upto) = run(spec, Criterion::Cor1, terms, |_, _| Ok(()), |_| {
        Ok(Instance {
            even: vec![("|a_2n| >= 1 + 3c + 2 sqrt(c(2c+1))", t.clone())],
            odd: vec![("|a_(2n+1)| <= c", c.clone())],
        })
    })?;
    Ok(rec.finish(upto, covers_period(spec, upto, 2, 2, 2)))
}

fn cor2_check(spec: &SequenceSpec, params: &Params, terms: u64) -> Result<Verdict> {
    let d = required(&params.d, "d", Criterion::Cor2)?;
    let count = parameter_count(spec, terms)?;
    let ds = std::iter::once(Ok(Real::zero()))
        .chain((1..=count).map(|n| param_at(d, "d", n)))
        .collect::<Result<Vec<_>>>()?;
    let floor = Real::from_int(25);
    let (mut rec, upto) = run(
        spec,
        Criterion::Cor2,
        terms,
        |n, rec| {
            let n = n as usize;
            rec.record(n as u64, "d_n > 25", ds[n].gt(&floor), || ds[n].clone(), &floor);
            rec.record(n as u64, "d_n <= d_(n+1)", ds[n].le(&ds[n + 1]), || ds[n].clone(), &ds[n + 1]);
            Ok(())
        },
        |n| {
            let n = n as usize;
            Ok(Instance {
                even: vec![("|a_2n| >= d_n", ds[n].clone())],
                odd: vec![(
                    "|a_(2n+1)| <= (4/25) d_n",
                    Real::ratio(4, 25).mul(&ds[n]),
                )],
            })
        },
    )?;
    let discrepancy = !rec.is_clean() && is_known_discrepancy(spec, Criterion::Cor2, params, terms);
    if discrepancy {
        rec.note(DISCREPANCY_NOTE);
    }
    let mut verdict = rec.finish(upto, !d.depends_on_index() && covers_period(spec, upto, 2, 2, 2));
    verdict.known_discrepancy = discrepancy;
    Ok(verdict)
}

/// Dispatch for the corollaries `cornew`, `cor1`, `cor2`.
pub fn corollary_check(spec: &SequenceSpec, criterion: Criterion, params: &Params, terms: u64) -> Result<Verdict> {
    match criterion {
        Criterion::Cornew => cornew_check(spec, params, terms),
        Criterion::Cor1 => cor1_check(spec, params, terms),
        Criterion::Cor2 => cor2_check(spec, params, terms),
        other => Err(Error::InvalidParameter(format!("{other} is not a corollary"))),
    }
}
