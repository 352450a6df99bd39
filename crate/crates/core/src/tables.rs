//! Printed reference tables and their reproduction against the oracle.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::airy_oracle::{airy_zero, OracleConfig, OracleError};
use crate::estimate::{fixed, sci, Method, ZeroEstimate};
use crate::factorial_sum::{FactorialEngine, FactorialError};
use crate::hyperasymptotics::{HyperConfig, HyperEngine, HyperError, TruncationPlan};

/// Estimates must round to within this many units of the last printed digit.
pub const ESTIMATE_UNITS: f64 = 1.0;
/// Printed error estimates must be matched within this factor.
pub const ERROR_ESTIMATE_FACTOR: f64 = 2.0;
/// Printed real errors must be matched in magnitude within this factor.
pub const REAL_ERROR_FACTOR: f64 = 3.0;

const REFERENCE: &str = include_str!("../data/reference_tables.toml");

#[derive(Debug, Error)]
pub enum TableError {
    #[error("no reference table with id {0} (expected 1..=8)")]
    Unknown(u32),
    #[error("bad fixture: {0}")]
    Fixture(String),
    #[error(transparent)]
    Factorial(#[from] FactorialError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub orders: Vec<usize>,
    pub estimate: String,
    #[serde(default)]
    pub error_estimate: Option<String>,
    #[serde(default)]
    pub real_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub id: u32,
    pub l: u32,
    pub method: Method,
    #[serde(default)]
    pub lambda: Option<String>,
    #[serde(default)]
    pub note: Option<String>,
    pub rows: Vec<ReferenceRow>,
}

#[derive(Deserialize)]
struct TableFile {
    table: Vec<ReferenceTable>,
}

pub fn reference_tables() -> Result<Vec<ReferenceTable>, TableError> {
    toml::from_str::<TableFile>(REFERENCE).map(|f| f.table).map_err(|e| TableError::Fixture(e.to_string()))
}

pub fn reference_table(id: u32) -> Result<ReferenceTable, TableError> {
    reference_tables()?.into_iter().find(|t| t.id == id).ok_or(TableError::Unknown(id))
}

/// Digits after the decimal point in a printed fixed-point number.
pub fn printed_decimals(printed: &str) -> usize {
    printed.split_once('.').map_or(0, |(_, f)| f.len())
}

/// `|round(value·10^d) − printed·10^d|` with `d` the printed decimals.
pub fn units_off(value: &Float, printed: &str) -> Result<f64, TableError> {
    let d = printed_decimals(printed);
    let digits: String = printed.chars().filter(|c| *c != '.').collect();
    let want: Integer = digits.parse().map_err(|_| TableError::Fixture(printed.to_string()))?;
    let p = value.prec().max(128);
    let scale = Float::with_val(p, Integer::from(Integer::u_pow_u(10, d as u32)));
    let got = Float::with_val(p, value * &scale).round().to_integer().expect("finite");
    Ok(Integer::from(&got - &want).abs().to_f64())
}

pub fn parse_printed(s: &str) -> Result<f64, TableError> {
    s.parse::<f64>().map_err(|_| TableError::Fixture(s.to_string()))
}

/// `max(a/b, b/a)` for magnitudes.
fn spread(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    if a == 0.0 || b == 0.0 {
        return f64::INFINITY;
    }
    (a / b).max(b / a)
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub reference: ReferenceRow,
    pub estimate: ZeroEstimate,
    pub units_off: f64,
    /// Exact − Est.
    pub real_error: Float,
    pub error_spread: Option<f64>,
    pub real_error_spread: Option<f64>,
}

impl RowReport {
    pub fn estimate_ok(&self) -> bool {
        self.units_off <= ESTIMATE_UNITS
    }

    pub fn error_estimate_ok(&self) -> Option<bool> {
        self.error_spread.map(|s| s <= ERROR_ESTIMATE_FACTOR)
    }

    pub fn real_error_ok(&self) -> Option<bool> {
        self.real_error_spread.map(|s| s <= REAL_ERROR_FACTOR)
    }

    pub fn ok(&self) -> bool {
        self.estimate_ok() && self.error_estimate_ok().unwrap_or(true) && self.real_error_ok().unwrap_or(true)
    }
}

#[derive(Clone, Debug)]
pub struct TableReport {
    pub reference: ReferenceTable,
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(RowReport::ok)
    }

    pub fn render(&self) -> String {
        let r = &self.reference;
        let mut out = format!("table {}: k_{} by {}", r.id, r.l, r.method);
        if let Some(l) = &r.lambda {
            out.push_str(&format!(", lambda = {l}"));
        }
        if let Some(n) = &r.note {
            out.push_str(&format!(" ({n})"));
        }
        out.push('\n');
        for row in &self.rows {
            let d = printed_decimals(&row.reference.estimate);
            let orders: Vec<String> = row.reference.orders.iter().map(|n| n.to_string()).collect();
            out.push_str(&format!(
                "  [{}] computed {}  printed {}  ({} units) {}\n",
                orders.join(","),
                fixed(&row.estimate.k, d + 3),
                row.reference.estimate,
                row.units_off,
                mark(row.estimate_ok()),
            ));
            if let (Some(p), Some(ours)) = (&row.reference.error_estimate, &row.estimate.error_estimate) {
                out.push_str(&format!(
                    "      error estimate {}  printed {}  {}\n",
                    sci(ours, 3),
                    p,
                    mark(row.error_estimate_ok().unwrap_or(false))
                ));
            }
            if let Some(p) = &row.reference.real_error {
                out.push_str(&format!(
                    "      real error {}  printed {}  {}\n",
                    sci(&row.real_error, 3),
                    p,
                    mark(row.real_error_ok().unwrap_or(false))
                ));
            }
        }
        out.push_str(if self.ok() { "  all rows match\n" } else { "  MISMATCH\n" });
        out
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

/// Recomputes a reference table at `prec` bits; `tol` drives levels 1 and 2.
pub fn reproduce(table: &ReferenceTable, prec: u32, tol: f64) -> Result<TableReport, TableError> {
    let oracle = airy_zero(table.l, &OracleConfig::new(prec + 64)?)?;
    let max_order = table.rows.iter().flat_map(|r| r.orders.first().copied()).max().unwrap_or(1);
    let estimates: Vec<ZeroEstimate> = match table.method {
        Method::Factorial => {
            let lambda: Rational = table
                .lambda
                .as_deref()
                .ok_or_else(|| TableError::Fixture("factorial table without lambda".into()))?
                .parse()
                .map_err(|_| TableError::Fixture("lambda".into()))?;
            let engine = FactorialEngine::new(&lambda, max_order)?;
            table.rows.iter().map(|r| engine.zero(table.l, r.orders[0], prec)).collect::<Result<_, _>>()?
        }
        Method::Hyper0 | Method::Hyper1 | Method::Hyper2 => {
            let engine = HyperEngine::new(max_order + 4)?;
            let cfg = HyperConfig::new(prec, tol)?;
            table
                .rows
                .iter()
                .map(|r| {
                    let plan = TruncationPlan::new(r.orders.clone())?;
                    engine.zero(table.l, &plan, &cfg)
                })
                .collect::<Result<_, _>>()?
        }
        Method::Oracle => return Err(TableError::Fixture("oracle is not a table method".into())),
    };
    let mut rows = Vec::new();
    for (reference, est) in table.rows.iter().zip(estimates) {
        let est = est.with_oracle(oracle.clone());
        let real_error = Float::with_val(prec, &oracle - &est.k);
        let error_spread = match (&reference.error_estimate, &est.error_estimate) {
            (Some(p), Some(ours)) => Some(spread(ours.to_f64(), parse_printed(p)?)),
            _ => None,
        };
        let real_error_spread = match &reference.real_error {
            Some(p) => Some(spread(real_error.to_f64(), parse_printed(p)?)),
            None => None,
        };
        rows.push(RowReport {
            units_off: units_off(&est.k, &reference.estimate)?,
            reference: reference.clone(),
            estimate: est,
            real_error,
            error_spread,
            real_error_spread,
        });
    }
    Ok(TableReport { reference: table.clone(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        let t = reference_tables().unwrap();
        assert_eq!(t.iter().map(|t| t.id).collect::<Vec<_>>(), (1..=8).collect::<Vec<_>>());
        assert_eq!(t[7].rows[0].orders, vec![52, 35, 17]);
        assert!(matches!(reference_table(9), Err(TableError::Unknown(9))));
    }

    #[test]
    fn unit_distance() {
        let v = Float::with_val(128, -2.338107342449);
        assert_eq!(units_off(&v, "-2.338107342").unwrap(), 0.0);
        assert_eq!(units_off(&v, "-2.338107341").unwrap(), 1.0);
        assert_eq!(units_off(&Float::with_val(128, -2.33863), "-2.33865").unwrap(), 2.0);
    }

    #[test]
    fn spread_is_symmetric() {
        assert_eq!(spread(2.0, 1.0), 2.0);
        assert_eq!(spread(-1.0, 2.0), 2.0);
        assert!(spread(0.0, 1.0).is_infinite());
    }
}
