//! Exact truncated formal series in `x⁻¹` over ℚ\[i\].

mod gaussian;
mod series;

pub use gaussian::{rational_string, GaussianRational, GaussianRationalRepr};
pub use series::{AnalyticFn, FormalSeries, Head, ShiftComposer};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("both operands carry an identity head")]
    DoubleIdentityHead,
    #[error("{op} needs series without an identity head")]
    IdentityHead { op: &'static str },
    #[error("divisor has a zero constant term")]
    NotInvertible,
    #[error("{op} needs a small series (no head, zero constant term)")]
    NotSmall { op: &'static str },
    #[error("coefficient {index} has a nonzero imaginary part")]
    NotReal { index: usize },
    #[error("successive approximation still moving after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    fn series(head: Head, c: &[GaussianRational], order: usize) -> FormalSeries {
        let mut v = c.to_vec();
        v.resize(order + 1, GaussianRational::zero());
        FormalSeries::from_coeffs(head, v)
    }

    #[test]
    fn add_constant_and_linear() {
        let a = series(Head::None, &[q(1, 1), q(2, 1)], 3);
        let b = series(Head::None, &[q(0, 1), q(3, 1)], 3);
        assert_eq!(a.add(&b).unwrap(), series(Head::None, &[q(1, 1), q(5, 1)], 3));
        assert_eq!(a.add(&FormalSeries::zero(3)).unwrap(), a);
    }

    #[test]
    fn add_rejects_mismatch_and_double_head() {
        let a = FormalSeries::zero(3);
        assert_eq!(a.add(&FormalSeries::zero(4)), Err(SeriesError::OrderMismatch { left: 3, right: 4 }));
        let x = FormalSeries::identity(3);
        assert_eq!(x.add(&x), Err(SeriesError::DoubleIdentityHead));
        assert_eq!(x.add(&a).unwrap().head(), Head::Identity);
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = series(Head::None, &[q(1, 1), q(1, 1)], 4);
        let b = series(Head::None, &[q(1, 1), q(-1, 1)], 4);
        assert_eq!(a.mul(&b).unwrap(), series(Head::None, &[q(1, 1), q(0, 1), q(-1, 1)], 4));
        assert_eq!(a.mul(&FormalSeries::one(4)).unwrap(), a);
        assert!(FormalSeries::identity(4).mul(&a).is_err());
    }

    #[test]
    fn div_geometric() {
        let b = series(Head::None, &[q(1, 1), q(1, 1)], 5);
        let expected = series(Head::None, &[q(1, 1), q(-1, 1), q(1, 1), q(-1, 1), q(1, 1), q(-1, 1)], 5);
        assert_eq!(FormalSeries::one(5).div(&b).unwrap(), expected);
        assert_eq!(b.div(&b).unwrap(), FormalSeries::one(5));
        let small = series(Head::None, &[q(0, 1), q(1, 1)], 5);
        assert_eq!(b.div(&small), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn derivative_with_head() {
        let x = series(Head::Identity, &[q(0, 1), q(5, 32)], 4);
        assert_eq!(x.derivative(), series(Head::None, &[q(1, 1), q(0, 1), q(-5, 32)], 4));
        assert!(FormalSeries::constant(q(7, 3), 4).derivative().is_zero());
    }

    #[test]
    fn arctan_of_inverse_x() {
        let u = series(Head::None, &[q(0, 1), q(1, 1)], 7);
        let got = FormalSeries::compose_analytic(&AnalyticFn::Arctan, &u).unwrap();
        let want = series(
            Head::None,
            &[q(0, 1), q(1, 1), q(0, 1), q(-1, 3), q(0, 1), q(1, 5), q(0, 1), q(-1, 7)],
            7,
        );
        assert_eq!(got, want);
        let e0 = FormalSeries::compose_analytic(&AnalyticFn::Exp, &FormalSeries::zero(7)).unwrap();
        assert_eq!(e0, FormalSeries::one(7));
    }

    #[test]
    fn compose_analytic_rejects_non_small() {
        let u = FormalSeries::one(3);
        assert!(matches!(
            FormalSeries::compose_analytic(&AnalyticFn::Exp, &u),
            Err(SeriesError::NotSmall { .. })
        ));
    }

    #[test]
    fn builtin_taylor_coefficients() {
        assert_eq!(AnalyticFn::Exp.taylor(4), q(1, 24));
        assert_eq!(AnalyticFn::Log1p.taylor(2), q(-1, 2));
        assert_eq!(AnalyticFn::Sqrt1p.taylor(2), q(-1, 8));
        assert_eq!(AnalyticFn::Sqrt1p.taylor(3), q(1, 16));
        assert_eq!(AnalyticFn::Recip1p.taylor(3), q(-1, 1));
        assert_eq!(AnalyticFn::Arctan.taylor(5), q(1, 5));
    }

    #[test]
    fn shift_of_inverse_x() {
        // 1/(x + c/x) = x⁻¹ − c x⁻³ + c² x⁻⁵ − ...
        let c = Rational::from((3, 7));
        let inv_x = series(Head::None, &[q(0, 1), q(1, 1)], 9);
        let shift = series(Head::None, &[q(0, 1), GaussianRational::real(c.clone())], 9);
        let got = inv_x.compose_shift(&shift).unwrap();
        let mut want = vec![GaussianRational::zero(); 10];
        let mut p = Rational::from(1);
        for k in 0..5 {
            want[2 * k + 1] = GaussianRational::real(p.clone());
            p *= -c.clone();
        }
        assert_eq!(got, FormalSeries::from_coeffs(Head::None, want));
        assert_eq!(inv_x.compose_shift(&FormalSeries::zero(9)).unwrap(), inv_x);
    }

    #[test]
    fn shift_of_identity_head_adds_shift() {
        let x = FormalSeries::identity(5);
        let shift = series(Head::None, &[q(0, 1), q(2, 1)], 5);
        let got = x.compose_shift(&shift).unwrap();
        assert_eq!(got, shift.clone().with_head(Head::Identity));
    }

    #[test]
    fn fixed_point_of_zero_is_identity() {
        let x = FormalSeries::fixed_point_solve(&FormalSeries::zero(6), &Rational::from((3, 2))).unwrap();
        assert_eq!(x, FormalSeries::identity(6));
    }

    #[test]
    fn fixed_point_residual_vanishes() {
        // φ = x⁻¹ + x⁻³/2 has a Lagrange-type solution; check the defining relation only.
        let phi = series(Head::None, &[q(0, 1), q(1, 1), q(0, 1), q(1, 2)], 12);
        let factor = Rational::from((2, 5));
        let x = FormalSeries::fixed_point_solve(&phi, &factor).unwrap();
        let flat = x.body();
        let rhs = phi.compose_shift(&flat).unwrap().scale(&GaussianRational::real(factor)).unwrap();
        assert_eq!(flat, rhs);
        // X = x + (2/5)/x + ...
        assert_eq!(x.coeff(1), q(2, 5));
    }

    #[test]
    fn real_coeffs_reports_imaginary_index() {
        let s = series(Head::None, &[q(1, 1), GaussianRational::i()], 2);
        assert_eq!(s.real_coeffs(), Err(SeriesError::NotReal { index: 1 }));
    }

    #[test]
    fn display_lists_nonzero_terms() {
        let s = series(Head::Identity, &[q(0, 1), q(5, 32)], 2);
        assert_eq!(s.to_string(), "x + (5/32)x^-1 + O(x^-3)");
    }
}
