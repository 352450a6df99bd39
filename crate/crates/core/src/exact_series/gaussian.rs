use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::Rational;
use serde::{Deserialize, Serialize};

/// Element of ℚ\[i\]: `re + i·im` with exact rational parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::new() }
    }

    pub fn imag(im: Rational) -> Self {
        Self { re: Rational::new(), im }
    }

    /// Shorthand for the real rational `num/den`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(Rational::from((num, den)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::from(1))
    }

    pub fn i() -> Self {
        Self::imag(Rational::from(1))
    }

    /// `i^n` for any integer exponent.
    pub fn i_pow(n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::real(Rational::from(-1)),
            _ => Self::imag(Rational::from(-1)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.cmp0().is_eq()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { re: Rational::from(&self.re * r), im: Rational::from(&self.im * r) }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref());
        Some(Self {
            re: Rational::from(&self.re / &norm),
            im: -Rational::from(&self.im / &norm),
        })
    }

    /// Adds `a·b` into `self` without materialising a temporary Gaussian value.
    pub(crate) fn add_product(&mut self, a: &Self, b: &Self) {
        let a_real = a.is_real();
        let b_real = b.is_real();
        if a_real && b_real {
            self.re += Rational::from(&a.re * &b.re);
        } else if a_real {
            if b.re.cmp0().is_ne() {
                self.re += Rational::from(&a.re * &b.re);
            }
            self.im += Rational::from(&a.re * &b.im);
        } else if b_real {
            if a.re.cmp0().is_ne() {
                self.re += Rational::from(&a.re * &b.re);
            }
            self.im += Rational::from(&a.im * &b.re);
        } else {
            self.re += Rational::from(&a.re * &b.re);
            self.re -= Rational::from(&a.im * &b.im);
            self.im += Rational::from(&a.re * &b.im);
            self.im += Rational::from(&a.im * &b.re);
        }
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        Self::real(re)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::real(Rational::from(n))
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: Rational::from(&self.re - &rhs.re),
            im: Rational::from(&self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        let mut out = GaussianRational::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.cmp0().is_eq(), self.im.cmp0().is_eq()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.cmp0().is_lt() {
                    write!(f, "{} - {}i", self.re, Rational::from(-&self.im))
                } else {
                    write!(f, "{} + {}i", self.re, self.im)
                }
            }
        }
    }
}

/// JSON form `{"re": "p/q", "im": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianRationalRepr {
    pub re: String,
    pub im: String,
}

impl From<&GaussianRational> for GaussianRationalRepr {
    fn from(g: &GaussianRational) -> Self {
        Self { re: rational_string(&g.re), im: rational_string(&g.im) }
    }
}

impl TryFrom<&GaussianRationalRepr> for GaussianRational {
    type Error = rug::rational::ParseRationalError;
    fn try_from(r: &GaussianRationalRepr) -> Result<Self, Self::Error> {
        Ok(Self { re: Rational::from_str_radix(&r.re, 10)?, im: Rational::from_str_radix(&r.im, 10)? })
    }
}

/// Always `p/q`, including integers (`3/1`).
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_powers_cycle() {
        assert_eq!(GaussianRational::i_pow(0), GaussianRational::one());
        assert_eq!(GaussianRational::i_pow(2), GaussianRational::from(-1));
        assert_eq!(GaussianRational::i_pow(-1), GaussianRational::i_pow(3));
        assert_eq!(&GaussianRational::i() * &GaussianRational::i(), GaussianRational::from(-1));
    }

    #[test]
    fn recip_of_one_plus_i() {
        let z = GaussianRational::new(Rational::from(1), Rational::from(1));
        let inv = z.recip().unwrap();
        assert_eq!(inv, GaussianRational::new(Rational::from((1, 2)), Rational::from((-1, 2))));
        assert_eq!(&z * &inv, GaussianRational::one());
        assert!(GaussianRational::zero().recip().is_none());
    }

    #[test]
    fn repr_round_trip() {
        let z = GaussianRational::new(Rational::from((-5, 48)), Rational::from(3));
        let repr = GaussianRationalRepr::from(&z);
        assert_eq!(repr.re, "-5/48");
        assert_eq!(repr.im, "3/1");
        assert_eq!(GaussianRational::try_from(&repr).unwrap(), z);
    }
}
