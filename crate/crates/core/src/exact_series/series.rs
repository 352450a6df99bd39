use std::fmt;

use rug::{Integer, Rational};

use super::gaussian::GaussianRational;
use super::SeriesError;

/// Leading term in front of the power series part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    None,
    /// A leading `x` (as in `X(t) = t + ♭X(t)`).
    Identity,
}

/// Truncated series `[x +] Σ_{n=0..N} αₙ x⁻ⁿ` with exact Gaussian-rational coefficients.
///
/// The derivative maps `x⁻ⁿ` to `−n x⁻ⁿ⁻¹`, so the coefficient of `x⁻ᴺ` in a derivative only
/// depends on `α_{N−1}`: every operation here is exact through the stored order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSeries {
    head: Head,
    coeffs: Vec<GaussianRational>,
}

impl FormalSeries {
    pub fn zero(order: usize) -> Self {
        Self { head: Head::None, coeffs: vec![GaussianRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(GaussianRational::one(), order)
    }

    pub fn constant(c: GaussianRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `x` (identity head, zero body).
    pub fn identity(order: usize) -> Self {
        Self { head: Head::Identity, coeffs: vec![GaussianRational::zero(); order + 1] }
    }

    /// Builds a series of order `coeffs.len() − 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(head: Head, coeffs: Vec<GaussianRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        Self { head, coeffs }
    }

    /// Real series from rationals, padded with zeros or truncated to `order`.
    pub fn from_rationals(head: Head, values: &[Rational], order: usize) -> Self {
        let mut s = Self { head, coeffs: vec![GaussianRational::zero(); order + 1] };
        for (slot, v) in s.coeffs.iter_mut().zip(values) {
            *slot = GaussianRational::real(v.clone());
        }
        s
    }

    pub fn head(&self) -> Head {
        self.head
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GaussianRational> {
        self.coeffs
    }

    /// Coefficient of `x⁻ⁿ`, zero beyond the order.
    pub fn coeff(&self, n: usize) -> GaussianRational {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    /// The same series without its head.
    pub fn body(&self) -> Self {
        Self { head: Head::None, coeffs: self.coeffs.clone() }
    }

    pub fn with_head(mut self, head: Head) -> Self {
        self.head = head;
        self
    }

    /// No head and vanishing constant term.
    pub fn is_small(&self) -> bool {
        self.head == Head::None && self.coeffs[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.head == Head::None && self.coeffs.iter().all(GaussianRational::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    /// Index of the first nonzero coefficient, `None` for a zero body.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Real parts, checking that every imaginary part vanishes.
    pub fn real_coeffs(&self) -> Result<Vec<Rational>, SeriesError> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| if c.is_real() { Ok(c.re.clone()) } else { Err(SeriesError::NotReal { index: n }) })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, GaussianRational::zero());
        Self { head: self.head, coeffs }
    }

    pub fn conj(&self) -> Self {
        Self { head: self.head, coeffs: self.coeffs.iter().map(GaussianRational::conj).collect() }
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    fn require_no_head(&self, op: &'static str) -> Result<(), SeriesError> {
        match self.head {
            Head::None => Ok(()),
            Head::Identity => Err(SeriesError::IdentityHead { op }),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let head = match (self.head, other.head) {
            (Head::Identity, Head::Identity) => return Err(SeriesError::DoubleIdentityHead),
            (Head::None, Head::None) => Head::None,
            _ => Head::Identity,
        };
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { head, coeffs })
    }

    /// `self − other`; the heads must match or `other` must have none.
    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let head = match (self.head, other.head) {
            (h, Head::None) => h,
            (Head::Identity, Head::Identity) => Head::None,
            (Head::None, Head::Identity) => return Err(SeriesError::IdentityHead { op: "sub" }),
        };
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { head, coeffs })
    }

    /// Multiplies the body by `c`; a head is only allowed when `c = 1`.
    pub fn scale(&self, c: &GaussianRational) -> Result<Self, SeriesError> {
        if self.head == Head::Identity && *c != GaussianRational::one() {
            return Err(SeriesError::IdentityHead { op: "scale" });
        }
        Ok(Self { head: self.head, coeffs: self.coeffs.iter().map(|a| a * c).collect() })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        self.require_no_head("mul")?;
        other.require_no_head("mul")?;
        let n = self.order();
        let mut out = vec![GaussianRational::zero(); n + 1];
        let rhs: Vec<(usize, &GaussianRational)> =
            other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                if i + j > n {
                    break;
                }
                out[i + j].add_product(a, b);
            }
        }
        Ok(Self { head: Head::None, coeffs: out })
    }

    /// `q` with `q·other = self` through the common order.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        self.require_no_head("div")?;
        other.require_no_head("div")?;
        let inv0 = other.coeffs[0].recip().ok_or(SeriesError::NotInvertible)?;
        let n = self.order();
        let mut q: Vec<GaussianRational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                let b = &other.coeffs[j];
                if b.is_zero() || q[k - j].is_zero() {
                    continue;
                }
                acc -= &(b * &q[k - j]);
            }
            q.push(&acc * &inv0);
        }
        Ok(Self { head: Head::None, coeffs: q })
    }

    /// `d/dx`, keeping the order.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = vec![GaussianRational::zero(); n + 1];
        if self.head == Head::Identity {
            out[0] = GaussianRational::one();
        }
        for k in 1..n {
            let a = &self.coeffs[k];
            if !a.is_zero() {
                out[k + 1] = a.scale(&Rational::from(-(k as i64)));
            }
        }
        Self { head: Head::None, coeffs: out }
    }

    /// `Σ_{n≥0} αₙ uⁿ` for a small `u`, evaluated by Horner's rule.
    pub fn compose_analytic(f: &AnalyticFn, u: &Self) -> Result<Self, SeriesError> {
        if !u.is_small() {
            return Err(SeriesError::NotSmall { op: "compose_analytic" });
        }
        let order = u.order();
        let Some(v) = u.valuation() else {
            return Ok(Self::constant(f.taylor(0), order));
        };
        let top = order / v;
        let mut acc = Self::constant(f.taylor(top), order);
        for k in (0..top).rev() {
            acc = acc.mul(u)?;
            acc.coeffs[0] += &f.taylor(k);
        }
        Ok(acc)
    }

    /// `self ∘ (x + shift) = Σ shiftⁿ/n! · self⁽ⁿ⁾` for a small `shift`.
    pub fn compose_shift(&self, shift: &Self) -> Result<Self, SeriesError> {
        ShiftComposer::new(shift)?.compose(self)
    }

    /// The unique `X = x + ♭X` with `X = x + factor·(φ∘X)` through the order of `phi`.
    ///
    /// Each successive approximation fixes at least one more coefficient, so iterate `k` runs at
    /// order `k + 1` and a final pass at full order confirms the result is stationary.
    pub fn fixed_point_solve(phi: &Self, factor: &Rational) -> Result<Self, SeriesError> {
        if !phi.is_small() {
            return Err(SeriesError::NotSmall { op: "fixed_point_solve" });
        }
        let order = phi.order();
        let factor = GaussianRational::real(factor.clone());
        let step = |flat: &Self| -> Result<Self, SeriesError> {
            let phi = phi.truncate(flat.order());
            phi.compose_shift(flat)?.scale(&factor)
        };
        let mut flat = Self::zero(order);
        for k in 0..order {
            let working = (k + 2).min(order);
            flat = step(&flat.truncate(working))?.truncate(order);
        }
        for _ in 0..2 {
            let next = step(&flat)?;
            if next == flat {
                return Ok(flat.with_head(Head::Identity));
            }
            flat = next;
        }
        Err(SeriesError::NoConvergence { iterations: order + 2 })
    }
}

/// Precomputed `shiftⁿ/n!` for repeated compositions `f ∘ (x + shift)`.
#[derive(Clone, Debug)]
pub struct ShiftComposer {
    shift: FormalSeries,
    /// `scaled_powers[n−1] = shiftⁿ/n!`, only the terms that can reach the order.
    scaled_powers: Vec<FormalSeries>,
}

impl ShiftComposer {
    pub fn new(shift: &FormalSeries) -> Result<Self, SeriesError> {
        if !shift.is_small() {
            return Err(SeriesError::NotSmall { op: "compose_shift" });
        }
        let order = shift.order();
        let mut scaled_powers = Vec::new();
        if let Some(v) = shift.valuation() {
            let mut power = FormalSeries::one(order);
            // shiftⁿ has valuation ≥ n·v and the n-th derivative of a headless body ≥ n+1.
            let mut n = 1;
            while n * v + n + 1 <= order {
                power = power.mul(shift)?.scale(&GaussianRational::ratio(1, n as i64))?;
                scaled_powers.push(power.clone());
                n += 1;
            }
        }
        Ok(Self { shift: shift.clone(), scaled_powers })
    }

    pub fn order(&self) -> usize {
        self.shift.order()
    }

    pub fn compose(&self, f: &FormalSeries) -> Result<FormalSeries, SeriesError> {
        f.check_order(&self.shift)?;
        let mut result = f.body();
        if f.head == Head::Identity {
            result = result.add(&self.shift)?;
        }
        let mut deriv = f.body();
        for power in &self.scaled_powers {
            deriv = deriv.derivative();
            let term = power.mul(&deriv)?;
            for (slot, c) in result.coeffs.iter_mut().zip(&term.coeffs) {
                if !c.is_zero() {
                    *slot += c;
                }
            }
        }
        Ok(result.with_head(f.head))
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.head == Head::Identity {
            write!(f, "x")?;
            first = false;
        }
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({c})")?,
                _ => write!(f, "({c})x^-{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^-{})", self.order() + 1)
    }
}

/// Taylor coefficients at 0 of a function composed with a small series.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticFn {
    Arctan,
    Exp,
    /// `log(1 + u)`
    Log1p,
    /// `(1 + u)^{1/2}`
    Sqrt1p,
    /// `1/(1 + u)`
    Recip1p,
    /// Explicit coefficients, zero past the end.
    Custom(Vec<GaussianRational>),
}

impl AnalyticFn {
    pub fn taylor(&self, n: usize) -> GaussianRational {
        let n_i = n as i64;
        match self {
            AnalyticFn::Arctan => {
                if n % 2 == 0 {
                    GaussianRational::zero()
                } else {
                    let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
                    GaussianRational::ratio(sign, n_i)
                }
            }
            AnalyticFn::Exp => {
                let mut fact = Integer::from(1);
                for k in 2..=n as u64 {
                    fact *= k;
                }
                GaussianRational::real(Rational::from((Integer::from(1), fact)))
            }
            AnalyticFn::Log1p => match n {
                0 => GaussianRational::zero(),
                _ => GaussianRational::ratio(if n % 2 == 1 { 1 } else { -1 }, n_i),
            },
            AnalyticFn::Sqrt1p => {
                // binom(1/2, n)
                let half = Rational::from((1, 2));
                let mut c = Rational::from(1);
                for k in 0..n {
                    c *= Rational::from(&half - Rational::from(k));
                    c /= Rational::from(k + 1);
                }
                GaussianRational::real(c)
            }
            AnalyticFn::Recip1p => GaussianRational::from(if n % 2 == 0 { 1 } else { -1 }),
            AnalyticFn::Custom(c) => c.get(n).cloned().unwrap_or_default(),
        }
    }
}
