//! Independent Airy `Ai` evaluator and zero finder.

use rug::float::Constant;
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::estimate::{k_from_x, t_of_l, Method, Params, ZeroEstimate};
use crate::mp_numerics::pi;
use crate::resurgent_airy::x_series;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("|x| = {x} is outside the supported range |x| ≤ 20")]
    Domain { x: f64 },
    #[error("no sign change of Ai found near the seed {seed}")]
    Bracket { seed: f64 },
    #[error("Newton iteration did not settle after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("precision must be at least 64 bits, got {0}")]
    PrecisionTooLow(u32),
    #[error("zero index must be between 1 and 10, got {0}")]
    Index(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub precision: u32,
    pub guard_bits: u32,
    pub max_newton: usize,
}

impl OracleConfig {
    pub fn new(precision: u32) -> Result<Self, OracleError> {
        if precision < 64 {
            return Err(OracleError::PrecisionTooLow(precision));
        }
        Ok(Self { precision, guard_bits: 32, max_newton: 64 })
    }
}

/// Exact `B₀, …, B_n` from `Σ_{k≤m} C(m+1,k)B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::from(1));
    for m in 1..=n {
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            if bk.cmp0().is_ne() {
                acc += Rational::from(bk * &binom);
            }
            // C(m+1, k+1) from C(m+1, k)
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        b.push(-acc / (m as u64 + 1));
    }
    b
}

/// `Γ(z)` for `z > 0` via Stirling at `z + shift`, divided back through the recurrence.
pub fn gamma_shifted(z: &Float, shift: u32, prec: u32) -> Float {
    let w = prec + 32;
    let z = Float::with_val(w, z);
    let x = Float::with_val(w, &z + shift);
    let target = Float::with_val(w, Float::i_exp(1, -(prec as i32) - 16));
    let ln_x = Float::with_val(w, x.ln_ref());
    let mut lg = Float::with_val(w, &x - 0.5f64) * &ln_x - &x;
    lg += Float::with_val(w, Constant::Log2) / 2u32 + Float::with_val(w, pi(w).ln()) / 2u32;
    let x2 = Float::with_val(w, x.square_ref());
    let mut xpow = x.clone();
    let bern = bernoulli_numbers(2 * stirling_terms(x.to_f64(), prec) + 2);
    let mut last = None;
    for k in 1..bern.len() / 2 {
        let b = &bern[2 * k];
        let denom = (2 * k * (2 * k - 1)) as u64;
        let term = Float::with_val(w, b) / denom / &xpow;
        let mag = Float::with_val(w, term.abs_ref());
        if let Some(prev) = &last {
            if mag > *prev {
                break; // asymptotic terms started growing
            }
        }
        lg += &term;
        if mag < target {
            break;
        }
        last = Some(mag);
        xpow *= &x2;
    }
    let mut g = lg.exp();
    for j in 0..shift {
        g /= Float::with_val(w, &z + j);
    }
    Float::with_val(prec, g)
}

/// Terms until `|B_{2k}|/(2k(2k−1)x^{2k−1})` drops below `2^{−p−16}`, or the minimum term.
fn stirling_terms(x: f64, prec: u32) -> usize {
    let target = -((prec + 16) as f64) * std::f64::consts::LN_2;
    let mut k = 1usize;
    loop {
        // |B_{2k}| ≈ 2(2k)!/(2π)^{2k}
        let kf = k as f64;
        let ln_b = (2.0f64).ln() + Float::with_val(53, 2.0 * kf + 1.0).ln_gamma().to_f64()
            - 2.0 * kf * (2.0 * std::f64::consts::PI).ln();
        let ln_term = ln_b - (2.0 * kf * (2.0 * kf - 1.0)).ln() - (2.0 * kf - 1.0) * x.ln();
        if ln_term < target || kf > std::f64::consts::PI * x {
            return k;
        }
        k += 1;
    }
}

/// Shift that puts the Stirling argument near `prec`, where the series reaches `2^{−p−16}` fast.
fn default_shift(prec: u32) -> u32 {
    prec.max(64)
}

pub fn gamma_one_third(prec: u32) -> Float {
    gamma_shifted(&(Float::with_val(prec + 32, 1) / 3u32), default_shift(prec), prec)
}

pub fn gamma_two_thirds(prec: u32) -> Float {
    gamma_shifted(&(Float::with_val(prec + 32, 2) / 3u32), default_shift(prec), prec)
}

/// `(Ai, Ai′, Ai″)` from the Maclaurin series at `prec` bits.
pub fn airy_ai_derivs(x: &Float, prec: u32) -> Result<(Float, Float, Float), OracleError> {
    let xf = x.to_f64();
    if !(xf.abs() <= 20.0) {
        return Err(OracleError::Domain { x: xf });
    }
    let guard = (1.5 * xf.abs().powf(1.5) / std::f64::consts::LN_2).ceil() as u32 + 32;
    let w = prec + guard;
    let x = Float::with_val(w, x);
    let x3 = Float::with_val(w, &x * &x) * &x;
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));

    // f = Σ a_k x^{3k}, g = Σ b_k x^{3k+1}
    let mut f = Float::new(w);
    let mut f1 = Float::new(w);
    let mut f2 = Float::new(w);
    let mut g = Float::new(w);
    let mut g1 = Float::new(w);
    let mut g2 = Float::new(w);
    // a_k, b_k
    let mut ta = Float::with_val(w, 1);
    let mut tb = Float::with_val(w, 1);
    let mut pow_prev = Float::with_val(w, 1); // x^{3(k−1)}
    let mut pow = Float::with_val(w, 1); // x^{3k}
    let mut k: u64 = 0;
    loop {
        let at = Float::with_val(w, &ta * &pow);
        let bt = Float::with_val(w, &tb * &pow) * &x;
        f += &at;
        g += &bt;
        g1 += Float::with_val(w, &tb * &pow) * (3 * k + 1);
        if k >= 1 {
            let m = 3 * k;
            let xm1 = Float::with_val(w, &pow_prev * &x) * &x; // x^{3k−1}
            let xm2 = Float::with_val(w, &pow_prev * &x); // x^{3k−2}
            f1 += Float::with_val(w, &ta * &xm1) * m;
            f2 += Float::with_val(w, &ta * &xm2) * (m * (m - 1));
            g2 += Float::with_val(w, &tb * &xm1) * ((m + 1) * m);
        }
        let bound = Float::with_val(w, at.abs_ref()) + Float::with_val(w, bt.abs_ref());
        let scale = Float::with_val(w, f.abs_ref()) + Float::with_val(w, g.abs_ref()) + 1u32;
        if k as f64 > xf.abs() + 4.0 && bound * (9 * (k + 1) * (k + 1)) < Float::with_val(w, &eps * &scale) {
            break;
        }
        ta /= (3 * k + 2) * (3 * k + 3);
        tb /= (3 * k + 3) * (3 * k + 4);
        pow_prev.clone_from(&pow);
        pow *= &x3;
        k += 1;
    }
    let three = Float::with_val(w, 3);
    let c1 = Float::with_val(w, three.clone().cbrt().square()).recip() / gamma_two_thirds(w);
    let c2 = Float::with_val(w, three.cbrt()).recip() / gamma_one_third(w);
    let combine = |a: &Float, b: &Float| Float::with_val(prec, Float::with_val(w, &c1 * a) - Float::with_val(w, &c2 * b));
    Ok((combine(&f, &g), combine(&f1, &g1), combine(&f2, &g2)))
}

/// `Ai(x)` for `|x| ≤ 20`.
pub fn airy_ai(x: &Float, prec: u32) -> Result<Float, OracleError> {
    airy_ai_derivs(x, prec).map(|v| v.0)
}

/// `Ai′(x)` for `|x| ≤ 20`.
pub fn airy_ai_prime(x: &Float, prec: u32) -> Result<Float, OracleError> {
    airy_ai_derivs(x, prec).map(|v| v.1)
}

/// Level-0 seed `k_l ≈ −(t_l + Σ c_n t_l^{−n})^{2/3}`.
pub fn zero_seed(l: u32) -> f64 {
    let t = t_of_l(l, 64);
    let c = x_series(7).ok().and_then(|x| x.real_coeffs().ok()).unwrap_or_default();
    let tf = t.to_f64();
    let x: f64 = tf + c.iter().enumerate().map(|(n, cn)| cn.to_f64() / tf.powi(n as i32)).sum::<f64>();
    -x.powf(2.0 / 3.0)
}

/// `l`-th negative zero of `Ai` to `p − 16` bits.
pub fn airy_zero(l: u32, cfg: &OracleConfig) -> Result<Float, OracleError> {
    if !(1..=10).contains(&l) {
        return Err(OracleError::Index(l));
    }
    let p = cfg.precision;
    let w = p + cfg.guard_bits;
    let seed = zero_seed(l);
    let ai = |x: f64| airy_ai(&Float::with_val(64, x), 64).map(|v| v.to_f64());

    // Bracket around the seed, widening until Ai changes sign.
    let mut delta = 0.01;
    let (mut lo, mut hi) = loop {
        let (a, b) = (seed - delta, seed + delta);
        if ai(a)? * ai(b)? < 0.0 {
            break (a, b);
        }
        delta *= 2.0;
        if delta > 0.5 {
            return Err(OracleError::Bracket { seed });
        }
    };
    let f_lo = ai(lo)?;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if ai(mid)? * f_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut x = Float::with_val(w, 0.5 * (lo + hi));
    let target = Float::with_val(w, Float::i_exp(1, -(p as i32) + 16));
    for _ in 0..cfg.max_newton {
        let (a, a1, _) = airy_ai_derivs(&x, w)?;
        let step = a / a1;
        x -= &step;
        let size = Float::with_val(w, x.abs_ref());
        if Float::with_val(w, step.abs_ref()) <= Float::with_val(w, &target * &size) / 1024u32 {
            return Ok(Float::with_val(p, x));
        }
    }
    Err(OracleError::NoConvergence { iterations: cfg.max_newton })
}

/// Oracle zero wrapped as an estimate; `x` is `(−k)^{3/2}`.
pub fn zero_by_oracle(l: u32, prec: u32) -> Result<ZeroEstimate, OracleError> {
    let cfg = OracleConfig::new(prec)?;
    let k = airy_zero(l, &cfg)?;
    let neg = Float::with_val(prec, -&k);
    let x = Float::with_val(prec, neg.sqrt_ref()) * &neg;
    let t = t_of_l(l, prec);
    let mut est = ZeroEstimate::from_x(l, t, Method::Oracle, Params::default(), x, prec);
    debug_assert!((k_from_x(&est.x) - &k).abs() < 1e-30);
    est.k = k;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[3], 0);
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[8], Rational::from((-1, 30)));
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let p = 200;
        let g = gamma_shifted(&Float::with_val(p, 0.5), 80, p);
        let s = pi(p).sqrt();
        assert!((g - s).abs() < Float::with_val(p, Float::i_exp(1, -190)));
    }

    #[test]
    fn gamma_one_third_value() {
        let g = gamma_one_third(128);
        assert!((g.to_f64() - 2.678_938_534_707_747_6).abs() < 1e-15);
    }

    #[test]
    fn ai_at_origin() {
        let p = 128;
        let ai0 = airy_ai(&Float::new(p), p).unwrap();
        let expect = Float::with_val(p, Float::with_val(p, 3).cbrt().square()).recip() / gamma_two_thirds(p);
        assert!((ai0 - expect).abs() < 1e-37);
    }

    #[test]
    fn sign_change_near_first_zero() {
        let a = airy_ai(&Float::with_val(64, -2.4), 64).unwrap();
        let b = airy_ai(&Float::with_val(64, -2.3), 64).unwrap();
        assert!(a.is_sign_negative() != b.is_sign_negative());
        assert!(airy_ai(&Float::with_val(64, 21), 64).is_err());
    }

    #[test]
    fn first_zero() {
        let z = airy_zero(1, &OracleConfig::new(128).unwrap()).unwrap();
        assert!((z.to_f64() + 2.338_107_410_459_767).abs() < 1e-15);
    }
}
