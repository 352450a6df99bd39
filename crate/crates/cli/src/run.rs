use rug::{Float, Rational};

use airy_resurgence::airy_oracle::{airy_zero, zero_by_oracle, OracleConfig};
use airy_resurgence::estimate::t_of_l;
use airy_resurgence::factorial_sum::{check_lambda, FactorialEngine};
use airy_resurgence::hyperasymptotics::{optimal_plan, HyperConfig, HyperEngine, TruncationPlan};
use airy_resurgence::resurgent_airy::{alien_first, build_table, phi_series, x_series, AlienCalculus};
use airy_resurgence::tables::{reference_tables, reproduce};
use airy_resurgence::{Method, ZeroEstimate};

use crate::output::{render_series, render_zeros, SeriesBlock};
use crate::{Failure, SeriesArgs, SeriesKind, TablesArgs, ZerosArgs};

const MIN_PRECISION: u32 = 64;
const MAX_ZERO_INDEX: u32 = 10;
const DEFAULT_LAMBDA: (u32, u32) = (6, 5);
const DEFAULT_N: usize = 61;

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(e.to_string())
}

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

/// Default level-1/2 target: `10^{-32}` unless the precision cannot carry it.
fn default_tol(prec: u32) -> f64 {
    1e-32f64.max(2f64.powi(-(prec as i32 - 40)))
}

/// Rejects flags that mean nothing for the chosen method.
fn check_flags(a: &ZerosArgs) -> Result<(), Failure> {
    let level = a.method.level();
    let reject = |flag: &str, present: bool| {
        if present {
            Err(usage(format!("{flag} does not apply to --method {}", a.method)))
        } else {
            Ok(())
        }
    };
    match a.method {
        Method::Factorial => {
            reject("--plan", a.plan.is_some())?;
            reject("--tol", a.tol.is_some())?;
        }
        Method::Oracle => {
            reject("--lambda", a.lambda.is_some())?;
            reject("--N", a.n.is_some())?;
            reject("--plan", a.plan.is_some())?;
            reject("--tol", a.tol.is_some())?;
        }
        _ => {
            reject("--lambda", a.lambda.is_some())?;
            reject("--N", a.n.is_some())?;
            reject("--tol", level == Some(0) && a.tol.is_some())?;
        }
    }
    if let (Some(plan), Some(level)) = (&a.plan, level) {
        if plan.len() != level + 1 {
            return Err(usage(format!("--method {} needs {} plan entries, got {}", a.method, level + 1, plan.len())));
        }
    }
    if a.precision < MIN_PRECISION {
        return Err(usage(format!("--precision must be at least {MIN_PRECISION}")));
    }
    if a.l.1 > MAX_ZERO_INDEX {
        return Err(usage(format!("--l must lie in 1..{MAX_ZERO_INDEX}")));
    }
    if let Some(t) = a.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(usage("--tol must lie in (0, 1)"));
        }
    }
    Ok(())
}

fn lambda_of(a: &ZerosArgs) -> Result<Rational, Failure> {
    let lambda = match &a.lambda {
        Some(s) => s.parse::<Rational>().map_err(|_| usage(format!("--lambda `{s}` is not a rational p/q")))?,
        None => Rational::from(DEFAULT_LAMBDA),
    };
    check_lambda(&lambda).map_err(|e| usage(e.to_string()))?;
    Ok(lambda)
}

pub fn compute_zeros(a: &ZerosArgs) -> Result<Vec<ZeroEstimate>, Failure> {
    check_flags(a)?;
    let p = a.precision;
    let ls: Vec<u32> = (a.l.0..=a.l.1).collect();
    let mut out = match a.method {
        Method::Factorial => {
            let lambda = lambda_of(a)?;
            let n = a.n.unwrap_or(DEFAULT_N);
            let engine = FactorialEngine::new(&lambda, n).map_err(numeric)?;
            ls.iter().map(|&l| engine.zero(l, n, p).map_err(numeric)).collect::<Result<Vec<_>, _>>()?
        }
        Method::Oracle => ls.iter().map(|&l| zero_by_oracle(l, p).map_err(numeric)).collect::<Result<Vec<_>, _>>()?,
        _ => {
            let level = a.method.level().expect("hyperasymptotic method");
            let plans = ls
                .iter()
                .map(|&l| match &a.plan {
                    Some(v) => TruncationPlan::new(v.clone()).map_err(|e| usage(e.to_string())),
                    None => optimal_plan(level, &t_of_l(l, p)).map_err(numeric),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let order = plans.iter().map(TruncationPlan::n0).max().unwrap_or(1) + 4;
            let engine = HyperEngine::new(order).map_err(numeric)?;
            let cfg = HyperConfig::new(p, a.tol.unwrap_or_else(|| default_tol(p))).map_err(|e| usage(e.to_string()))?;
            ls.iter()
                .zip(&plans)
                .map(|(&l, plan)| engine.zero(l, plan, &cfg).map_err(numeric))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    if a.verify {
        let cfg = OracleConfig::new(p + 64).map_err(numeric)?;
        out = out
            .into_iter()
            .map(|e| {
                let k = airy_zero(e.l, &cfg).map_err(numeric)?;
                Ok(e.with_oracle(Float::with_val(p, k)))
            })
            .collect::<Result<_, Failure>>()?;
    }
    Ok(out)
}

pub fn zeros(a: &ZerosArgs) -> Result<String, Failure> {
    let estimates = compute_zeros(a)?;
    render_zeros(&estimates, a.format).map_err(numeric)
}

pub fn series(a: &SeriesArgs) -> Result<String, Failure> {
    if a.order > a.max_order {
        return Err(usage(format!(
            "--order {} exceeds the memory guard {} (raise --max-order or AIRYZEROS_MAX_ORDER)",
            a.order, a.max_order
        )));
    }
    let n = a.order;
    let blocks = match a.what {
        SeriesKind::X => vec![SeriesBlock::new("X", &x_series(n).map_err(numeric)?)],
        SeriesKind::Phi => vec![SeriesBlock::new("phi", &phi_series(n).map_err(numeric)?)],
        SeriesKind::Alien1 => {
            let (plus, minus) = alien_first(n).map_err(numeric)?;
            vec![SeriesBlock::new("plus", &plus), SeriesBlock::new("minus", &minus)]
        }
        SeriesKind::Alien2 => {
            let s = AlienCalculus::new(n).and_then(|c| c.second_level()).map_err(numeric)?;
            vec![
                SeriesBlock::new("plus_plus", &s.pp),
                SeriesBlock::new("minus_minus", &s.mm),
                SeriesBlock::new("minus_plus", &s.pm),
                SeriesBlock::new("plus_minus", &s.mp),
            ]
        }
    };
    let validation = build_table(n).and_then(|t| t.validate()).map_err(|e| e.to_string());
    render_series(a.what, n, &blocks, &validation, a.format).map_err(numeric)
}

pub fn tables(a: &TablesArgs) -> Result<String, Failure> {
    let (lo, hi) = a.id.unwrap_or((1, 8));
    if hi > 8 {
        return Err(usage("--id must lie in 1..8"));
    }
    if a.precision < MIN_PRECISION {
        return Err(usage(format!("--precision must be at least {MIN_PRECISION}")));
    }
    let all = reference_tables().map_err(numeric)?;
    let mut out = String::new();
    let mut ok = true;
    for table in all.iter().filter(|t| (lo..=hi).contains(&t.id)) {
        let report = reproduce(table, a.precision, a.tol).map_err(numeric)?;
        ok &= report.ok();
        out.push_str(&report.render());
    }
    if ok {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}
