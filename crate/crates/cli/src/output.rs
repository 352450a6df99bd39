use std::fmt::Write as _;

use serde::Serialize;

use airy_resurgence::estimate::{fixed, sci};
use airy_resurgence::exact_series::{rational_string, FormalSeries, GaussianRational, GaussianRationalRepr};
use airy_resurgence::ZeroEstimate;

use crate::{Format, SeriesFormat, SeriesKind};

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("csv output is not UTF-8")]
    Utf8,
}

/// Decimal places that the working precision supports, less a guard.
fn digits_for(prec: u32) -> usize {
    ((prec.saturating_sub(8)) as f64 * std::f64::consts::LOG10_2).floor() as usize
}

fn text_line(e: &ZeroEstimate) -> String {
    let d = digits_for(e.precision_bits);
    let mut s = format!("k_{} = {}  [{}", e.l, fixed(&e.k, d), e.method);
    if let Some(l) = &e.params.lambda {
        let _ = write!(s, ", lambda {l}");
    }
    if let Some(n) = e.params.n {
        let _ = write!(s, ", N {n}");
    }
    if let Some(plan) = &e.params.plan {
        let v: Vec<String> = plan.iter().map(usize::to_string).collect();
        let _ = write!(s, ", plan {}", v.join(","));
    }
    s.push(']');
    if let Some(err) = &e.error_estimate {
        let _ = write!(s, "  error estimate {}", sci(err, 3));
        if let Some(note) = &e.params.estimate_note {
            let _ = write!(s, " ({note})");
        }
    }
    if let (Some(k), Some(err)) = (&e.oracle_k, &e.true_error) {
        let _ = write!(s, "\n    oracle {}  true error {}", fixed(k, d), sci(err, 3));
    }
    s.push('\n');
    s
}

/// Flat CSV row in the JSON field order; `params` is embedded as JSON.
#[derive(Serialize)]
struct CsvRow {
    l: u32,
    t: String,
    method: String,
    params: String,
    x: String,
    k: String,
    error_estimate: Option<String>,
    oracle_k: Option<String>,
    true_error: Option<String>,
    precision_bits: u32,
}

pub fn render_zeros(estimates: &[ZeroEstimate], format: Format) -> Result<String, OutputError> {
    match format {
        Format::Text => Ok(estimates.iter().map(text_line).collect()),
        Format::Json => {
            let records: Vec<_> = estimates.iter().map(ZeroEstimate::to_record).collect();
            let mut s = serde_json::to_string_pretty(&records)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in estimates {
                let r = e.to_record();
                w.serialize(CsvRow {
                    l: r.l,
                    t: r.t,
                    method: r.method.to_string(),
                    params: serde_json::to_string(&r.params)?,
                    x: r.x,
                    k: r.k,
                    error_estimate: r.error_estimate,
                    oracle_k: r.oracle_k,
                    true_error: r.true_error,
                    precision_bits: r.precision_bits,
                })?;
            }
            let bytes = w.into_inner().map_err(|e| OutputError::Csv(e.into_error().into()))?;
            String::from_utf8(bytes).map_err(|_| OutputError::Utf8)
        }
    }
}

/// One named coefficient list.
pub struct SeriesBlock {
    pub name: &'static str,
    pub coeffs: Vec<GaussianRational>,
    pub real: bool,
}

impl SeriesBlock {
    pub fn new(name: &'static str, s: &FormalSeries) -> Self {
        Self { name, coeffs: s.coeffs().to_vec(), real: s.is_real() }
    }
}

#[derive(Serialize)]
struct SeriesJson<'a> {
    what: &'a str,
    order: usize,
    series: serde_json::Map<String, serde_json::Value>,
    invariants_valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariant_failure: Option<&'a str>,
}

fn what_name(w: SeriesKind) -> &'static str {
    match w {
        SeriesKind::X => "X",
        SeriesKind::Alien1 => "alien1",
        SeriesKind::Alien2 => "alien2",
        SeriesKind::Phi => "phi",
    }
}

/// `p/q` for real coefficients, `{"re","im"}` otherwise.
fn coefficient_json(block: &SeriesBlock) -> serde_json::Value {
    if block.real {
        block.coeffs.iter().map(|c| serde_json::Value::String(rational_string(&c.re))).collect()
    } else {
        let reprs: Vec<GaussianRationalRepr> = block.coeffs.iter().map(GaussianRationalRepr::from).collect();
        serde_json::to_value(reprs).expect("strings serialise")
    }
}

pub fn render_series(
    what: SeriesKind,
    order: usize,
    blocks: &[SeriesBlock],
    validation: &Result<(), String>,
    format: SeriesFormat,
) -> Result<String, OutputError> {
    match format {
        SeriesFormat::Json => {
            let series = blocks.iter().map(|b| (b.name.to_string(), coefficient_json(b))).collect();
            let doc = SeriesJson {
                what: what_name(what),
                order,
                series,
                invariants_valid: validation.is_ok(),
                invariant_failure: validation.as_ref().err().map(String::as_str),
            };
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            Ok(s)
        }
        SeriesFormat::Text => {
            let mut s = String::new();
            for b in blocks {
                let _ = writeln!(s, "{} (order {order}):", b.name);
                for (n, c) in b.coeffs.iter().enumerate() {
                    let _ = writeln!(s, "  {n:>4}  {c}");
                }
            }
            let status = match validation {
                Ok(()) => "all hold".to_string(),
                Err(e) => format!("FAILED: {e}"),
            };
            let _ = writeln!(s, "table invariants: {status}");
            Ok(s)
        }
    }
}
