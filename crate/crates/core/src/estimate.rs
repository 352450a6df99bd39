//! One computed Airy zero with its method metadata.

use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mp_numerics::pi;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Factorial,
    Hyper0,
    Hyper1,
    Hyper2,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Factorial => "factorial",
            Method::Hyper0 => "hyper0",
            Method::Hyper1 => "hyper1",
            Method::Hyper2 => "hyper2",
            Method::Oracle => "oracle",
        }
    }

    /// Hyperasymptotic level for the `hyper*` methods.
    pub fn level(self) -> Option<usize> {
        match self {
            Method::Hyper0 => Some(0),
            Method::Hyper1 => Some(1),
            Method::Hyper2 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown method `{0}` (expected factorial, hyper0, hyper1, hyper2 or oracle)")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "factorial" => Ok(Method::Factorial),
            "hyper0" => Ok(Method::Hyper0),
            "hyper1" => Ok(Method::Hyper1),
            "hyper2" => Ok(Method::Hyper2),
            "oracle" => Ok(Method::Oracle),
            other => Err(UnknownMethod(other.to_string())),
        }
    }
}

/// Method parameters; absent entries are omitted from JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<String>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub plan: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tol: Option<String>,
    /// Set when the error estimate is known not to apply at this `t`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimate_note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroEstimate {
    pub l: u32,
    pub t: Float,
    pub method: Method,
    pub params: Params,
    pub x: Float,
    pub k: Float,
    pub error_estimate: Option<Float>,
    pub oracle_k: Option<Float>,
    pub true_error: Option<Float>,
    pub precision_bits: u32,
}

impl ZeroEstimate {
    /// Builds an estimate from `x = s₀X(t)`; `k = −x^{2/3}`.
    pub fn from_x(l: u32, t: Float, method: Method, params: Params, x: Float, precision_bits: u32) -> Self {
        let k = k_from_x(&x);
        Self { l, t, method, params, x, k, error_estimate: None, oracle_k: None, true_error: None, precision_bits }
    }

    /// Attaches the reference zero and `|k − oracle_k|`.
    pub fn with_oracle(mut self, oracle_k: Float) -> Self {
        let err = Float::with_val(self.k.prec(), &self.k - &oracle_k).abs();
        self.true_error = Some(err);
        self.oracle_k = Some(oracle_k);
        self
    }

    pub fn to_record(&self) -> ZeroRecord {
        ZeroRecord {
            l: self.l,
            t: float_string(&self.t),
            method: self.method,
            params: self.params.clone(),
            x: float_string(&self.x),
            k: float_string(&self.k),
            error_estimate: self.error_estimate.as_ref().map(float_string),
            oracle_k: self.oracle_k.as_ref().map(float_string),
            true_error: self.true_error.as_ref().map(float_string),
            precision_bits: self.precision_bits,
        }
    }

    pub fn from_record(r: &ZeroRecord) -> Result<Self, ParseFloatError> {
        let p = r.precision_bits;
        let parse = |s: &str| parse_float(s, p);
        let opt = |s: &Option<String>| s.as_deref().map(parse).transpose();
        Ok(Self {
            l: r.l,
            t: parse(&r.t)?,
            method: r.method,
            params: r.params.clone(),
            x: parse(&r.x)?,
            k: parse(&r.k)?,
            error_estimate: opt(&r.error_estimate)?,
            oracle_k: opt(&r.oracle_k)?,
            true_error: opt(&r.true_error)?,
            precision_bits: p,
        })
    }
}

/// Serialised form; every number is a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub l: u32,
    pub t: String,
    pub method: Method,
    pub params: Params,
    pub x: String,
    pub k: String,
    pub error_estimate: Option<String>,
    pub oracle_k: Option<String>,
    pub true_error: Option<String>,
    pub precision_bits: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid decimal `{0}`")]
pub struct ParseFloatError(pub String);

/// Shortest decimal string that reads back to the same value at the same precision.
pub fn float_string(x: &Float) -> String {
    x.to_string_radix(10, None)
}

pub fn parse_float(s: &str, prec: u32) -> Result<Float, ParseFloatError> {
    Float::parse(s).map(|v| Float::with_val(prec, v)).map_err(|_| ParseFloatError(s.to_string()))
}

/// Fixed-point decimal with `digits` places after the point.
pub fn fixed(x: &Float, digits: usize) -> String {
    let p = x.prec().max(64);
    let scale = Float::with_val(p, 10u32).pow_u(digits as u32);
    let scaled = Float::with_val(p, x * &scale).round();
    let int = scaled.to_integer().expect("finite value");
    let neg = int < 0;
    let mut s = int.abs().to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let (a, b) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{a}")
    } else {
        format!("{sign}{a}.{b}")
    }
}

/// Short scientific form such as `1.3e-13`.
pub fn sci(x: &Float, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x.to_f64())
}

/// `t_l = (3/2)(l − 1/4)π`.
pub fn t_of_l(l: u32, prec: u32) -> Float {
    pi(prec) * (4 * l - 1) * 3u32 / 8u32
}

/// `k = −x^{2/3}` on the real branch, `x > 0`.
pub fn k_from_x(x: &Float) -> Float {
    -Float::with_val(x.prec(), x.square_ref()).cbrt()
}

/// `dk/dx = −(2/3)x^{−1/3}`, used to move error estimates from `x` to `k`.
pub fn dk_dx_abs(x: &Float) -> Float {
    let p = x.prec();
    Float::with_val(p, x.cbrt_ref()).recip() * 2u32 / 3u32
}

trait PowU {
    fn pow_u(self, n: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(self, n: u32) -> Float {
        use rug::ops::Pow;
        self.pow(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Factorial, Method::Hyper0, Method::Hyper1, Method::Hyper2, Method::Oracle] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.as_str()));
        }
        assert!("hyper3".parse::<Method>().is_err());
    }

    #[test]
    fn t_for_first_zero() {
        let t = t_of_l(1, 128);
        assert!((t.to_f64() - 9.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn k_of_eight() {
        assert_eq!(k_from_x(&Float::with_val(64, 8)), -4);
    }

    #[test]
    fn fixed_rounds_half_away() {
        let x = Float::with_val(128, -2.3386367186);
        assert_eq!(fixed(&x, 5), "-2.33864");
        assert_eq!(fixed(&Float::with_val(64, 0.004), 2), "0.00");
        assert_eq!(fixed(&Float::with_val(64, 12.5), 0), "13");
    }

    #[test]
    fn record_round_trip() {
        let p = 200;
        let x = Float::with_val(p, 3.5) / 7u32 + Float::with_val(p, 1).exp();
        let e = ZeroEstimate::from_x(2, t_of_l(2, p), Method::Hyper1, Params::default(), x, p)
            .with_oracle(Float::with_val(p, -4.0879494441309706166));
        let json = serde_json::to_string(&e.to_record()).unwrap();
        let back: ZeroRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(ZeroEstimate::from_record(&back).unwrap(), e);
    }
}
