//! Convergent factorial-series resummation via the Stirling transform.

use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::estimate::{dk_dx_abs, t_of_l, Method, Params, ZeroEstimate};
use crate::mp_numerics::{pochhammer_ratios_real, NumericError};
use crate::resurgent_airy::{x_series, AiryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactorialError {
    #[error("λ = {0} outside (0, 4/π)")]
    LambdaOutOfRange(Rational),
    #[error("need {needed} coefficients, have {have}")]
    TooFewCoefficients { needed: usize, have: usize },
    #[error("rigorous bound needs Re t > B")]
    OutsideHalfPlane,
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Airy(#[from] AiryError),
}

/// π rounded up at 62 digits; `λ < 4/π` is tested as `λ·π_up < 4`.
const PI_UPPER: &str = "3.14159265358979323846264338327950288419716939937510582097494460";

/// Signed Stirling numbers of the first kind, `∏_{j<n}(x − j) = Σ_k s(n,k)x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<Integer>>,
}

impl StirlingTable {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `s(n,k)`, zero outside `0 ≤ k ≤ n`.
    pub fn get(&self, n: usize, k: usize) -> Integer {
        self.rows.get(n).and_then(|r| r.get(k)).cloned().unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[Integer] {
        &self.rows[n]
    }
}

/// Rows `0..=n_max` via `s(n+1,k) = s(n,k−1) − n·s(n,k)`.
pub fn stirling_first(n_max: usize) -> StirlingTable {
    let mut rows = vec![vec![Integer::from(1)]];
    for n in 0..n_max {
        let prev = &rows[n];
        let mut next = vec![Integer::new(); n + 2];
        for (k, slot) in next.iter_mut().enumerate() {
            if k >= 1 {
                *slot += &prev[k - 1];
            }
            if k <= n {
                *slot -= Integer::from(&prev[k] * n as u64);
            }
        }
        rows.push(next);
    }
    StirlingTable { rows }
}

/// `λ` and the coefficients `βₙ` of `Σ βₙ n!/∏_{j=0..n}(λt + j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialCoefficients {
    pub lambda: Rational,
    pub beta: Vec<Rational>,
}

pub fn check_lambda(lambda: &Rational) -> Result<(), FactorialError> {
    let pi_up = Rational::from_str_radix(&decimal_to_fraction(PI_UPPER), 10).expect("valid constant");
    if lambda.cmp0().is_le() || Rational::from(lambda * &pi_up) >= 4 {
        return Err(FactorialError::LambdaOutOfRange(lambda.clone()));
    }
    Ok(())
}

fn decimal_to_fraction(s: &str) -> String {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    format!("{int}{frac}/1{}", "0".repeat(frac.len()))
}

/// `βₙ = (1/n!) Σ_{k=1}^{n+1} (−1)^{n−k+1} s(n,k−1) λ^{k−1} α_k` for `n = 0..len(α)−2`.
///
/// `α₀` is not used: it is added separately as the constant term.
pub fn beta_transform(alpha: &[Rational], lambda: &Rational) -> Result<FactorialCoefficients, FactorialError> {
    check_lambda(lambda)?;
    if alpha.len() < 2 {
        return Err(FactorialError::TooFewCoefficients { needed: 2, have: alpha.len() });
    }
    let count = alpha.len() - 1;
    let table = stirling_first(count);
    let mut scaled = Vec::with_capacity(alpha.len());
    let mut power = Rational::from(1);
    // λ^{k−1}α_k for k ≥ 1
    scaled.push(Rational::new());
    for a in &alpha[1..] {
        scaled.push(Rational::from(a * &power));
        power *= lambda;
    }
    let mut beta = Vec::with_capacity(count);
    let mut factorial = Integer::from(1);
    for n in 0..count {
        if n > 0 {
            factorial *= n as u64;
        }
        let mut acc = Rational::new();
        for k in 1..=n + 1 {
            if scaled[k].cmp0().is_eq() {
                continue;
            }
            let s = table.get(n, k - 1);
            if s == 0 {
                continue;
            }
            // (−1)^{n−k+1}s(n,k−1) = |s(n,k−1)|
            let term = Rational::from(&scaled[k] * &s);
            if (n + 1 - k) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        beta.push(acc / &factorial);
    }
    Ok(FactorialCoefficients { lambda: lambda.clone(), beta })
}

/// `[t] + α₀ + λ Σ_{n=0..N} βₙ·n!/∏_{j=0..n}(λt+j)`, summed in increasing `n`.
pub fn factorial_eval(
    fc: &FactorialCoefficients,
    alpha0: &Rational,
    head: bool,
    t: &Float,
    n: usize,
    prec: u32,
) -> Result<Float, FactorialError> {
    if fc.beta.len() <= n {
        return Err(FactorialError::TooFewCoefficients { needed: n + 1, have: fc.beta.len() });
    }
    let lambda = Float::with_val(prec, &fc.lambda);
    let z = Float::with_val(prec, &lambda * t);
    let ratios = pochhammer_ratios_real(&z, n)?;
    let mut sum = Float::new(prec);
    for (b, r) in fc.beta.iter().zip(&ratios) {
        if b.cmp0().is_ne() {
            sum += Float::with_val(prec, r * b);
        }
    }
    let mut value = sum * &lambda + alpha0;
    if head {
        value += t;
    }
    Ok(value)
}

/// `|β_{N+1}|·N!/(Re t·∏_{j=0..N}|λt+j|)`.
pub fn error_practical(fc: &FactorialCoefficients, n: usize, t: &Float) -> Result<Float, FactorialError> {
    let b = fc
        .beta
        .get(n + 1)
        .ok_or(FactorialError::TooFewCoefficients { needed: n + 2, have: fc.beta.len() })?;
    let p = t.prec();
    let z = Float::with_val(p, &fc.lambda) * t;
    let ratio = crate::mp_numerics::pochhammer_ratio_real(&z, n)?.abs();
    Ok(ratio * Float::with_val(p, b).abs() / t)
}

/// `A/(λB)^{λB} · (N+λB+1)^{N+λB+1}/(N+1)^N · |N!/∏_{j=0..N}(λt+j)| / (Re t − B)`.
pub fn error_rigorous(a: &Float, b: &Float, lambda: &Rational, n: usize, t: &Float) -> Result<Float, FactorialError> {
    if t <= b {
        return Err(FactorialError::OutsideHalfPlane);
    }
    let p = t.prec();
    let lam = Float::with_val(p, lambda);
    let lb = Float::with_val(p, &lam * b);
    let big = Float::with_val(p, &lb + (n as u32 + 1));
    // Logarithms keep the large powers in range.
    let log_bound = Float::with_val(p, a.ln_ref()) - Float::with_val(p, lb.ln_ref()) * &lb
        + Float::with_val(p, big.ln_ref()) * &big
        - Float::with_val(p, n as u32 + 1).ln() * n as u32;
    let z = Float::with_val(p, &lam * t);
    let ratio = crate::mp_numerics::pochhammer_ratio_real(&z, n)?.abs();
    Ok(log_bound.exp() * ratio / Float::with_val(p, t - b))
}

/// Whether the practical estimate is expected to hold; small `t` is flagged.
pub fn estimate_applies(t: &Float) -> bool {
    *t >= Float::with_val(t.prec(), crate::mp_numerics::pi(t.prec()) * 2u32)
}

/// Factorial-series engine for the implicit series `X`.
#[derive(Clone, Debug)]
pub struct FactorialEngine {
    pub coefficients: FactorialCoefficients,
}

impl FactorialEngine {
    /// Coefficients for truncations up to `n_max` (plus one for the error estimate).
    pub fn new(lambda: &Rational, n_max: usize) -> Result<Self, FactorialError> {
        let x = x_series(n_max + 2)?;
        let c = x.real_coeffs().map_err(AiryError::from)?;
        Ok(Self { coefficients: beta_transform(&c, lambda)? })
    }

    pub fn x_at(&self, t: &Float, n: usize, prec: u32) -> Result<Float, FactorialError> {
        factorial_eval(&self.coefficients, &Rational::new(), true, t, n, prec)
    }

    /// `k_l` with the practical estimate moved to `k` units.
    pub fn zero(&self, l: u32, n: usize, prec: u32) -> Result<ZeroEstimate, FactorialError> {
        let t = t_of_l(l, prec);
        let x = self.x_at(&t, n, prec)?;
        let err_x = error_practical(&self.coefficients, n, &t)?;
        let params = Params {
            lambda: Some(format!("{}", self.coefficients.lambda)),
            n: Some(n),
            estimate_note: (!estimate_applies(&t)).then(|| "error estimate does not apply at this t".to_string()),
            ..Params::default()
        };
        let mut est = ZeroEstimate::from_x(l, t, Method::Factorial, params, x, prec);
        est.error_estimate = Some(err_x * dk_dx_abs(&est.x));
        Ok(est)
    }
}

/// One-shot `k_l` by the factorial series with `N` terms.
pub fn zero_by_factorial(l: u32, n: usize, lambda: &Rational, prec: u32) -> Result<ZeroEstimate, FactorialError> {
    FactorialEngine::new(lambda, n)?.zero(l, n, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_row_three() {
        let s = stirling_first(6);
        assert_eq!(s.row(3), &[Integer::from(0), Integer::from(2), Integer::from(-3), Integer::from(1)]);
        for n in 1..=6 {
            assert_eq!(s.get(n, 0), 0);
            assert_eq!(s.get(n, n), 1);
        }
        assert_eq!(s.get(2, 5), 0);
    }

    #[test]
    fn lambda_range() {
        assert!(check_lambda(&Rational::from((6, 5))).is_ok());
        assert!(check_lambda(&Rational::from((127, 100))).is_ok());
        // 4/π ≈ 1.2732395
        assert!(check_lambda(&Rational::from((12733, 10000))).is_err());
        assert!(check_lambda(&Rational::from(0)).is_err());
        assert!(check_lambda(&Rational::from(-1)).is_err());
    }

    #[test]
    fn inverse_t_series() {
        let alpha: Vec<Rational> = [0, 1, 0, 0, 0, 0].iter().map(|&v| Rational::from(v)).collect();
        let fc = beta_transform(&alpha, &Rational::from(1)).unwrap();
        assert_eq!(fc.beta[0], 1);
        assert!(fc.beta[1..].iter().all(|b| *b == 0));
        let t = Float::with_val(128, 2);
        let v = factorial_eval(&fc, &Rational::new(), false, &t, 4, 128).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn inverse_t_squared_series() {
        let alpha: Vec<Rational> = (0..9).map(|n| Rational::from(u8::from(n == 2))).collect();
        let fc = beta_transform(&alpha, &Rational::from(1)).unwrap();
        assert_eq!(fc.beta[0], 0);
        for n in 1..8 {
            assert_eq!(fc.beta[n], Rational::from((1, n as u32)));
        }
    }

    #[test]
    fn rigorous_bound_by_hand() {
        // A = B = λ = 1, N = 0, t = 3: 1 · 2²/1 · (1/3)/(3 − 1) = 2/3
        let p = 128;
        let one = Float::with_val(p, 1);
        let v = error_rigorous(&one, &one, &Rational::from(1), 0, &Float::with_val(p, 3)).unwrap();
        assert!((v - Float::with_val(p, 2) / 3u32).abs() < 1e-35);
        assert_eq!(
            error_rigorous(&one, &Float::with_val(p, 5), &Rational::from(1), 3, &Float::with_val(p, 4)),
            Err(FactorialError::OutsideHalfPlane)
        );
    }

    #[test]
    fn estimate_flag_small_t() {
        assert!(!estimate_applies(&t_of_l(1, 128)));
        assert!(estimate_applies(&t_of_l(3, 128)));
    }
}
