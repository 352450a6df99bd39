use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::exact_series::GaussianRational;

/// Arbitrary-precision real at an explicit precision in bits.
pub type BigReal = Float;

/// `re + i·im`, both parts at the same precision.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Self { re, im: Float::new(prec) }
    }

    /// `e^{iθ}`
    pub fn cis(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Self { re: c, im: s }
    }

    /// Correctly rounded conversion of an exact Gaussian rational.
    pub fn from_gaussian(g: &GaussianRational, prec: u32) -> Self {
        Self { re: Float::with_val(prec, &g.re), im: Float::with_val(prec, &g.im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.square_ref()) + Float::with_val(self.prec(), self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    /// `1/self`, `None` at zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        let p = self.prec();
        Some(Self { re: Float::with_val(p, &self.re / &n), im: -Float::with_val(p, &self.im / &n) })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self { re: Float::with_val(p, &m * &c), im: Float::with_val(p, &m * &s) }
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut result = Self::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn add_real(&self, x: &Float) -> Self {
        Self { re: Float::with_val(self.prec(), &self.re + x), im: self.im.clone() }
    }

    /// Largest of `|re|`, `|im|` as a double, for tolerances.
    pub fn max_abs_f64(&self) -> f64 {
        self.re.to_f64().abs().max(self.im.to_f64().abs())
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re + &rhs.re), im: Float::with_val(p, &self.im + &rhs.im) }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re - &rhs.re), im: Float::with_val(p, &self.im - &rhs.im) }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        BigComplex { re, im }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let im = self.im.to_string_radix(10, Some(digits));
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", self.re.to_string_radix(10, Some(digits)), im.trim_start_matches('-'))
        } else {
            write!(f, "{} + {}i", self.re.to_string_radix(10, Some(digits)), im)
        }
    }
}

/// `π` at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn rational_to_float(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

/// `x^{p/q}` for `x > 0`.
pub fn pow_rational(x: &Float, exponent: &Rational) -> Float {
    let e = Float::with_val(x.prec(), exponent);
    Float::with_val(x.prec(), x.pow(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_and_inverse() {
        let p = 128;
        let z = BigComplex::new(Float::with_val(p, 3), Float::with_val(p, -4));
        let w = z.recip().unwrap();
        let one = &z * &w;
        assert!((one.re - 1u32).abs() < 1e-35);
        assert!(one.im.abs() < 1e-35);
        assert_eq!(z.abs(), 5);
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let p = 200;
        let z = BigComplex::new(Float::new(p), pi(p));
        let e = z.exp();
        assert!((e.re + 1u32).abs() < 1e-55);
        assert!(e.im.abs() < 1e-55);
    }

    #[test]
    fn powu_matches_repeated_product() {
        let p = 128;
        let z = BigComplex::new(Float::with_val(p, 0.5), Float::with_val(p, 1.25));
        let mut direct = BigComplex::one(p);
        for _ in 0..7 {
            direct = &direct * &z;
        }
        let diff = &z.powu(7) - &direct;
        assert!(diff.abs() < 1e-34);
    }

    #[test]
    fn gaussian_conversion_rounds_correctly() {
        let g = GaussianRational::new(Rational::from((1, 3)), Rational::from((-2, 7)));
        let z = BigComplex::from_gaussian(&g, 256);
        assert_eq!(z.re, Float::with_val(256, &Rational::from((1, 3))));
        assert_eq!(z.im, Float::with_val(256, &Rational::from((-2, 7))));
    }
}
