//! Multiprecision values, Pochhammer ratios and ray quadrature.

mod complex;
mod quadrature;

pub use complex::{pi, pow_rational, rational_to_float, BigComplex, BigReal};
pub use quadrature::{ray_quadrature, GaussLegendre, QuadratureResult, RayQuadrature};

use rug::Float;
use thiserror::Error;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("pole: z + {j} = 0")]
    Pole { j: usize },
    #[error("quadrature did not converge (achieved relative error {achieved:e})")]
    QuadratureFailed { achieved: f64 },
    #[error("precision must be at least {min} bits, got {got}")]
    PrecisionTooLow { min: u32, got: u32 },
}

/// `n!/∏_{j=0..n}(z+j)` by a running product.
pub fn pochhammer_ratio(z: &BigComplex, n: usize) -> Result<BigComplex, NumericError> {
    let p = z.prec();
    let mut acc = z.recip().ok_or(NumericError::Pole { j: 0 })?;
    for j in 1..=n {
        let zj = z.add_real(&Float::with_val(p, j));
        let inv = zj.recip().ok_or(NumericError::Pole { j })?;
        acc = (&acc * &inv).scale(&Float::with_val(p, j));
    }
    Ok(acc)
}

/// Real counterpart of [`pochhammer_ratio`].
pub fn pochhammer_ratio_real(z: &Float, n: usize) -> Result<Float, NumericError> {
    let p = z.prec();
    if z.is_zero() {
        return Err(NumericError::Pole { j: 0 });
    }
    let mut acc = Float::with_val(p, z.recip_ref());
    for j in 1..=n {
        let zj = Float::with_val(p, z + j as u32);
        if zj.is_zero() {
            return Err(NumericError::Pole { j });
        }
        acc *= j as u32;
        acc /= &zj;
    }
    Ok(acc)
}

/// All ratios `k!/∏_{j=0..k}(z+j)` for `k = 0..=n`.
pub fn pochhammer_ratios_real(z: &Float, n: usize) -> Result<Vec<Float>, NumericError> {
    let p = z.prec();
    if z.is_zero() {
        return Err(NumericError::Pole { j: 0 });
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Float::with_val(p, z.recip_ref());
    out.push(acc.clone());
    for j in 1..=n {
        let zj = Float::with_val(p, z + j as u32);
        if zj.is_zero() {
            return Err(NumericError::Pole { j });
        }
        acc *= j as u32;
        acc /= &zj;
        out.push(acc.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_small_cases() {
        let p = 128;
        let one = BigComplex::one(p);
        assert_eq!(pochhammer_ratio(&one, 0).unwrap(), one);
        let r = pochhammer_ratio(&one, 2).unwrap();
        assert!((r.re - Float::with_val(p, 1) / 3u32).abs() < 1e-37);
    }

    #[test]
    fn pochhammer_pole() {
        let z = BigComplex::from_real(Float::with_val(64, -3));
        assert_eq!(pochhammer_ratio(&z, 5), Err(NumericError::Pole { j: 3 }));
        assert_eq!(pochhammer_ratio_real(&Float::with_val(64, -2), 5), Err(NumericError::Pole { j: 2 }));
    }

    #[test]
    fn real_and_complex_agree() {
        let p = 256;
        let z = Float::with_val(p, 1.2) * (pi(p) * 9u32 / 8u32);
        let real = pochhammer_ratio_real(&z, 5).unwrap();
        let cplx = pochhammer_ratio(&BigComplex::from_real(z.clone()), 5).unwrap();
        assert!((real.clone() - &cplx.re).abs() < Float::with_val(p, Float::i_exp(1, -240)) * &real);
        let all = pochhammer_ratios_real(&z, 5).unwrap();
        assert_eq!(all[5], real);
    }
}
