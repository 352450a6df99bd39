//! Airy series `aₙ`, `ψ_Ai`, `ψ_Bi`, `φ`, the implicit series `X`, and its alien derivatives.
//!
//! Conventions: `ω = 4i/3`, `g = ψ_Bi/ψ_Ai`, `h = ψ_Ai/ψ_Bi`, `Δ₊ = Δ_{ω}`, `Δ₋ = Δ_{−ω}`.
//! Everything is exact in ℚ\[i\].

use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_series::{
    AnalyticFn, FormalSeries, GaussianRational, GaussianRationalRepr, Head, SeriesError, ShiftComposer,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AiryError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("invariant `{identity}` fails at index {index}")]
    Invariant { identity: &'static str, index: usize },
    #[error("table lists have inconsistent lengths for order {order}")]
    Shape { order: usize },
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

/// `a₀ = 1`, `a_{n+1} = −(3/4)(n+1/6)(n+5/6)/(n+1)·aₙ`.
pub fn airy_coefficients(order: usize) -> Vec<Rational> {
    let mut a = Vec::with_capacity(order + 1);
    a.push(Rational::from(1));
    for n in 0..order as i64 {
        // (n+1/6)(n+5/6) = (6n+1)(6n+5)/36
        let factor = Rational::from((-3 * (6 * n + 1) * (6 * n + 5), 4 * 36 * (n + 1)));
        let next = Rational::from(&a[n as usize] * &factor);
        a.push(next);
    }
    a
}

/// `(ψ_Ai, ψ_Bi)` with coefficients `iⁿaₙ` and `(−i)ⁿaₙ`.
pub fn psi_series(order: usize) -> (FormalSeries, FormalSeries) {
    let a = airy_coefficients(order);
    let build = |sign: i64| {
        let coeffs = a
            .iter()
            .enumerate()
            .map(|(n, an)| GaussianRational::i_pow(sign * n as i64).scale(an))
            .collect();
        FormalSeries::from_coeffs(Head::None, coeffs)
    };
    (build(1), build(-1))
}

/// Normalised `(r, s)` with `ψ_Ai = r − i·s`, `ψ_Bi = r + i·s`; both real.
///
/// They differ from the trigonometric `R`, `S` pair by the common factor `2e^{iπ/4}`, which
/// cancels in `s/r`.
pub fn r_s_series(order: usize) -> Result<(FormalSeries, FormalSeries), AiryError> {
    let (psi_ai, psi_bi) = psi_series(order);
    let half = GaussianRational::ratio(1, 2);
    let r = psi_ai.add(&psi_bi)?.scale(&half)?;
    let s = psi_bi.sub(&psi_ai)?.scale(&GaussianRational::imag(Rational::from((-1, 2))))?;
    Ok((r, s))
}

/// `s/r`, small and odd.
pub fn s_over_r(order: usize) -> Result<FormalSeries, AiryError> {
    let (r, s) = r_s_series(order)?;
    Ok(s.div(&r)?)
}

/// `φ = arctan(s/r)`.
pub fn phi_series(order: usize) -> Result<FormalSeries, AiryError> {
    Ok(FormalSeries::compose_analytic(&AnalyticFn::Arctan, &s_over_r(order)?)?)
}

/// `(ψ_Ai·ψ_Bi)^{1/2}`, equal to `(r² + s²)^{1/2}` in the normalisation of [`r_s_series`].
pub fn modulus_series(order: usize) -> Result<FormalSeries, AiryError> {
    let (psi_ai, psi_bi) = psi_series(order);
    let product = psi_ai.mul(&psi_bi)?;
    let u = product.sub(&FormalSeries::one(order))?;
    Ok(FormalSeries::compose_analytic(&AnalyticFn::Sqrt1p, &u)?)
}

/// `X = t + ♭X` solving `X = t + (3/2)·φ∘X`.
pub fn x_series(order: usize) -> Result<FormalSeries, AiryError> {
    let phi = phi_series(order)?;
    Ok(FormalSeries::fixed_point_solve(&phi, &Rational::from((3, 2)))?)
}

/// First-level alien derivatives `(Δ₊X, Δ₋X)`.
pub fn alien_first(order: usize) -> Result<(FormalSeries, FormalSeries), AiryError> {
    let calc = AlienCalculus::new(order)?;
    Ok((calc.plus.clone(), calc.minus.clone()))
}

/// Second-level alien derivatives, each computed two ways and cross-checked.
pub fn alien_second(order: usize) -> Result<SecondLevel, AiryError> {
    AlienCalculus::new(order)?.second_level()
}

/// `Δ₊²X`, `Δ₋²X`, `Δ₋Δ₊X`, `Δ₊Δ₋X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondLevel {
    pub pp: FormalSeries,
    pub mm: FormalSeries,
    pub pm: FormalSeries,
    pub mp: FormalSeries,
}

/// The series shared by all alien-derivative formulas at one order.
#[derive(Clone, Debug)]
pub struct AlienCalculus {
    order: usize,
    x: FormalSeries,
    /// X′ and X″ (headless).
    xp: FormalSeries,
    xpp: FormalSeries,
    /// `e^{∓ω♭X}` and `e^{∓2ω♭X}`.
    e_minus: FormalSeries,
    e_plus: FormalSeries,
    e2_minus: FormalSeries,
    e2_plus: FormalSeries,
    /// `g∘X`, `g′∘X`, `h∘X`, `h′∘X`, `(g²)∘X`, `(g′g)∘X`, `(h²)∘X`, `(h′h)∘X`.
    g_x: FormalSeries,
    gp_x: FormalSeries,
    h_x: FormalSeries,
    hp_x: FormalSeries,
    g2_x: FormalSeries,
    gpg_x: FormalSeries,
    h2_x: FormalSeries,
    hph_x: FormalSeries,
    plus: FormalSeries,
    minus: FormalSeries,
}

fn omega() -> GaussianRational {
    GaussianRational::imag(Rational::from((4, 3)))
}

fn c(num: i64, den: i64) -> GaussianRational {
    GaussianRational::ratio(num, den)
}

fn ci(num: i64, den: i64) -> GaussianRational {
    GaussianRational::imag(Rational::from((num, den)))
}

/// Sum of series; all share one order.
fn sum(terms: &[FormalSeries]) -> Result<FormalSeries, SeriesError> {
    let mut acc = FormalSeries::zero(terms[0].order());
    for t in terms {
        acc = acc.add(t)?;
    }
    Ok(acc)
}

impl AlienCalculus {
    pub fn new(order: usize) -> Result<Self, AiryError> {
        Self::from_x(x_series(order)?)
    }

    /// Starts from a precomputed `X`.
    pub fn from_x(x: FormalSeries) -> Result<Self, AiryError> {
        let order = x.order();
        let flat = x.body();
        let xp = x.derivative();
        let xpp = xp.derivative();
        let w = omega();
        let exp_of = |k: &GaussianRational| -> Result<FormalSeries, SeriesError> {
            FormalSeries::compose_analytic(&AnalyticFn::Exp, &flat.scale(k)?)
        };
        let two_w = &w + &w;
        let e_minus = exp_of(&-&w)?;
        let e_plus = exp_of(&w)?;
        let e2_minus = exp_of(&-&two_w)?;
        let e2_plus = exp_of(&two_w)?;

        let (psi_ai, psi_bi) = psi_series(order);
        let g = psi_bi.div(&psi_ai)?;
        let h = psi_ai.div(&psi_bi)?;
        let gp = g.derivative();
        let hp = h.derivative();
        let at_x = ShiftComposer::new(&flat)?;
        let g_x = at_x.compose(&g)?;
        let gp_x = at_x.compose(&gp)?;
        let h_x = at_x.compose(&h)?;
        let hp_x = at_x.compose(&hp)?;
        let g2_x = at_x.compose(&g.mul(&g)?)?;
        let gpg_x = at_x.compose(&gp.mul(&g)?)?;
        let h2_x = at_x.compose(&h.mul(&h)?)?;
        let hph_x = at_x.compose(&hp.mul(&h)?)?;

        // Δ₊X = (3/4)X′e^{−ω♭X}(g∘X), Δ₋X = −(3/4)X′e^{ω♭X}(h∘X)
        let plus = xp.mul(&e_minus)?.mul(&g_x)?.scale(&c(3, 4))?;
        let minus = xp.mul(&e_plus)?.mul(&h_x)?.scale(&c(-3, 4))?;

        Ok(Self {
            order,
            x,
            xp,
            xpp,
            e_minus,
            e_plus,
            e2_minus,
            e2_plus,
            g_x,
            gp_x,
            h_x,
            hp_x,
            g2_x,
            gpg_x,
            h2_x,
            hph_x,
            plus,
            minus,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn x(&self) -> &FormalSeries {
        &self.x
    }

    pub fn plus(&self) -> &FormalSeries {
        &self.plus
    }

    pub fn minus(&self) -> &FormalSeries {
        &self.minus
    }

    /// `Δ₊²X` from the simplified display
    /// `e^{−2ω♭X}[(9/16X″ − 3/2 iX′² + 3/4 iX′)(g²∘X) + 9/8X′²((g′g)∘X)]`.
    pub fn plus_plus_display(&self) -> Result<FormalSeries, AiryError> {
        let xp2 = self.xp.mul(&self.xp)?;
        let bracket = sum(&[self.xpp.scale(&c(9, 16))?, xp2.scale(&ci(-3, 2))?, self.xp.scale(&ci(3, 4))?])?;
        let inner = bracket.mul(&self.g2_x)?.add(&xp2.mul(&self.gpg_x)?.scale(&c(9, 8))?)?;
        Ok(self.e2_minus.mul(&inner)?)
    }

    /// `Δ₋²X`: the display above with the `i` terms negated and `h = ψ_Ai/ψ_Bi` in place of `g`.
    pub fn minus_minus_display(&self) -> Result<FormalSeries, AiryError> {
        let xp2 = self.xp.mul(&self.xp)?;
        let bracket = sum(&[self.xpp.scale(&c(9, 16))?, xp2.scale(&ci(3, 2))?, self.xp.scale(&ci(-3, 4))?])?;
        let inner = bracket.mul(&self.h2_x)?.add(&xp2.mul(&self.hph_x)?.scale(&c(9, 8))?)?;
        Ok(self.e2_plus.mul(&inner)?)
    }

    /// `Δ₋Δ₊X = −(3/4)iX′ − (9/16)X″`.
    pub fn minus_plus_closed(&self) -> Result<FormalSeries, AiryError> {
        Ok(self.xp.scale(&ci(-3, 4))?.add(&self.xpp.scale(&c(-9, 16))?)?)
    }

    /// `Δ₊Δ₋X = (3/4)iX′ − (9/16)X″`.
    pub fn plus_minus_closed(&self) -> Result<FormalSeries, AiryError> {
        Ok(self.xp.scale(&ci(3, 4))?.add(&self.xpp.scale(&c(-9, 16))?)?)
    }

    /// Applies `Δ_σ` (σ = ±ω) to `Δ_τ X` by the derivation rules:
    /// `Δ_σ X′ = (−σ + d/dt)Δ_σ X`, `Δ_σ ♭X = Δ_σ X`, and
    /// `Δ_σ (f∘X) = e^{−σ♭X}(Δ_σ f)∘X + Δ_σ X·(f′∘X)`.
    fn chain_rule(&self, outer_plus: bool, inner_plus: bool) -> Result<FormalSeries, AiryError> {
        let w = omega();
        // Δ_τ X = k·X′·E·(f∘X)
        let (k, tau, e, f_x, fp_x) = if inner_plus {
            (c(3, 4), w.clone(), &self.e_minus, &self.g_x, &self.gp_x)
        } else {
            (c(-3, 4), -&w, &self.e_plus, &self.h_x, &self.hp_x)
        };
        let (sigma, d_sigma, shift_e) = if outer_plus {
            (w.clone(), &self.plus, &self.e_minus)
        } else {
            (-&w, &self.minus, &self.e_plus)
        };
        // Δ_σ f for f = g or h, as a series in x composed with X, times e^{−σ♭X}:
        // Δ₊g = i g², Δ₋g = −i, Δ₊h = −i, Δ₋h = i h².
        let alien_f = match (outer_plus, inner_plus) {
            (true, true) => shift_e.mul(&self.g2_x)?.scale(&ci(1, 1))?,
            (false, true) | (true, false) => shift_e.scale(&ci(-1, 1))?,
            (false, false) => shift_e.mul(&self.h2_x)?.scale(&ci(1, 1))?,
        };
        let ef = e.mul(f_x)?;
        let d_xp = d_sigma.scale(&-&sigma)?.add(&d_sigma.derivative())?;
        // Δ_σ E = −τ·E·Δ_σ X
        let t1 = d_xp.mul(&ef)?;
        let t2 = self.xp.mul(d_sigma)?.mul(&ef)?.scale(&-&tau)?;
        let t3 = self.xp.mul(e)?.mul(&alien_f.add(&d_sigma.mul(fp_x)?)?)?;
        Ok(sum(&[t1, t2, t3])?.scale(&k)?)
    }

    /// Both routes for all four second-level derivatives; errors if any pair disagrees.
    pub fn second_level(&self) -> Result<SecondLevel, AiryError> {
        let check = |a: FormalSeries, b: FormalSeries, identity: &'static str| -> Result<FormalSeries, AiryError> {
            match a.coeffs().iter().zip(b.coeffs()).position(|(x, y)| x != y) {
                None => Ok(a),
                Some(index) => Err(AiryError::Invariant { identity, index }),
            }
        };
        Ok(SecondLevel {
            pp: check(self.plus_plus_display()?, self.chain_rule(true, true)?, "Δ₊²X display = chain rule")?,
            mm: check(self.minus_minus_display()?, self.chain_rule(false, false)?, "Δ₋²X display = chain rule")?,
            pm: check(self.chain_rule(false, true)?, self.minus_plus_closed()?, "Δ₋Δ₊X chain rule = closed form")?,
            mp: check(self.chain_rule(true, false)?, self.plus_minus_closed()?, "Δ₊Δ₋X chain rule = closed form")?,
        })
    }

    /// Assembles and validates the full coefficient table.
    pub fn table(&self) -> Result<AlienCoefficientTable, AiryError> {
        let second = self.second_level()?;
        let table = AlienCoefficientTable {
            order: self.order,
            c: self.x.real_coeffs()?,
            c_plus: self.plus.coeffs().to_vec(),
            c_minus: self.minus.coeffs().to_vec(),
            c_pp: second.pp.into_coeffs(),
            c_mm: second.mm.into_coeffs(),
            c_pm: second.pm.into_coeffs(),
            c_mp: second.mp.into_coeffs(),
        };
        table.validate()?;
        Ok(table)
    }
}

/// Builds and validates the table at `order`.
pub fn build_table(order: usize) -> Result<AlienCoefficientTable, AiryError> {
    AlienCalculus::new(order)?.table()
}

/// Coefficients feeding the resummation engines.
///
/// `c[n]` belongs to `X = t + Σ cₙ t⁻ⁿ`; `c_plus`/`c_minus` to `Δ₊X`/`Δ₋X`;
/// `c_pp`, `c_mm`, `c_pm`, `c_mp` to `Δ₊²X`, `Δ₋²X`, `Δ₋Δ₊X`, `Δ₊Δ₋X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlienTableRepr", into = "AlienTableRepr")]
pub struct AlienCoefficientTable {
    pub order: usize,
    pub c: Vec<Rational>,
    pub c_plus: Vec<GaussianRational>,
    pub c_minus: Vec<GaussianRational>,
    pub c_pp: Vec<GaussianRational>,
    pub c_mm: Vec<GaussianRational>,
    pub c_pm: Vec<GaussianRational>,
    pub c_mp: Vec<GaussianRational>,
}

impl AlienCoefficientTable {
    /// Checks every structural identity and reports the first failure.
    pub fn validate(&self) -> Result<(), AiryError> {
        let n = self.order + 1;
        let lists = [&self.c_plus, &self.c_minus, &self.c_pp, &self.c_mm, &self.c_pm, &self.c_mp];
        if self.c.len() != n || lists.iter().any(|l| l.len() != n) {
            return Err(AiryError::Shape { order: self.order });
        }
        let fail = |identity, index| Err(AiryError::Invariant { identity, index });
        for m in 0..n {
            if m % 2 == 0 && self.c[m].cmp0().is_ne() {
                return fail("c_n = 0 for even n", m);
            }
            if self.c_plus[m] != -&self.c_minus[m] {
                return fail("c_(m,+) = −c_(m,−)", m);
            }
            if !self.c_plus[m].is_real() {
                return fail("c_(m,+) real", m);
            }
            if m % 2 == 1 && !self.c_plus[m].is_zero() {
                return fail("c_(m,±) = 0 for odd m", m);
            }
            if self.c_mm[m] != self.c_pp[m].conj() {
                return fail("c_(m,−,−) = conj c_(m,+,+)", m);
            }
            if self.c_mp[m] != self.c_pm[m].conj() {
                return fail("c_(m,−,+) = conj c_(m,+,−)", m);
            }
            if m % 2 == 0 && !self.c_pp[m].is_imaginary() {
                return fail("Re c_(m,+,+) = 0 for even m", m);
            }
            if m % 2 == 1 && !self.c_pp[m].is_real() {
                return fail("Im c_(m,+,+) = 0 for odd m", m);
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialisation cannot fail")
    }
}

/// Serialised form with exact `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlienTableRepr {
    pub order: usize,
    pub c: Vec<String>,
    pub c_plus: Vec<GaussianRationalRepr>,
    pub c_minus: Vec<GaussianRationalRepr>,
    pub c_pp: Vec<GaussianRationalRepr>,
    pub c_mm: Vec<GaussianRationalRepr>,
    pub c_pm: Vec<GaussianRationalRepr>,
    pub c_mp: Vec<GaussianRationalRepr>,
}

impl From<AlienCoefficientTable> for AlienTableRepr {
    fn from(t: AlienCoefficientTable) -> Self {
        let g = |v: &[GaussianRational]| v.iter().map(GaussianRationalRepr::from).collect();
        Self {
            order: t.order,
            c: t.c.iter().map(crate::exact_series::rational_string).collect(),
            c_plus: g(&t.c_plus),
            c_minus: g(&t.c_minus),
            c_pp: g(&t.c_pp),
            c_mm: g(&t.c_mm),
            c_pm: g(&t.c_pm),
            c_mp: g(&t.c_mp),
        }
    }
}

impl TryFrom<AlienTableRepr> for AlienCoefficientTable {
    type Error = AiryError;
    fn try_from(r: AlienTableRepr) -> Result<Self, AiryError> {
        let g = |v: &[GaussianRationalRepr]| -> Result<Vec<GaussianRational>, AiryError> {
            v.iter()
                .map(|x| GaussianRational::try_from(x).map_err(|_| AiryError::Parse(format!("{}+{}i", x.re, x.im))))
                .collect()
        };
        let c = r
            .c
            .iter()
            .map(|s| Rational::from_str_radix(s, 10).map_err(|_| AiryError::Parse(s.clone())))
            .collect::<Result<_, _>>()?;
        let table = Self {
            order: r.order,
            c,
            c_plus: g(&r.c_plus)?,
            c_minus: g(&r.c_minus)?,
            c_pp: g(&r.c_pp)?,
            c_mm: g(&r.c_mm)?,
            c_pm: g(&r.c_pm)?,
            c_mp: g(&r.c_mp)?,
        };
        table.validate()?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    #[test]
    fn first_airy_coefficients() {
        let a = airy_coefficients(3);
        assert_eq!(a[0], 1);
        assert_eq!(a[1], Rational::from((-5, 48)));
        assert_eq!(a[2], Rational::from((385, 4608)));
    }

    #[test]
    fn a1_matches_classical_u1() {
        // Classical uₖ of the Airy expansion: u₁ = 5/72; in the variable 3/2·ξ, a₁ = −(3/2)u₁.
        let a = airy_coefficients(1);
        assert_eq!(a[1], Rational::from((-3, 2)) * Rational::from((5, 72)));
    }

    #[test]
    fn psi_symmetry() {
        let (ai, bi) = psi_series(10);
        assert_eq!(ai.coeff(0), q(1, 1));
        assert_eq!(ai.coeff(1), GaussianRational::imag(Rational::from((-5, 48))));
        assert_eq!(bi, ai.conj());
    }

    #[test]
    fn psi_rebuilt_from_r_and_s() {
        let (ai, _) = psi_series(12);
        let (r, s) = r_s_series(12).unwrap();
        assert!(r.is_real() && s.is_real());
        let rebuilt = r.sub(&s.scale(&GaussianRational::i()).unwrap()).unwrap();
        assert_eq!(rebuilt, ai);
    }

    #[test]
    fn psi_product_is_real() {
        let (ai, bi) = psi_series(20);
        assert!(ai.mul(&bi).unwrap().is_real());
    }

    #[test]
    fn s_over_r_leading_term() {
        // s/r = (Σ_{m≥1}(−1)^m a_{2m−1}x^{1−2m}) / (Σ_{m≥0}(−1)^m a_{2m}x^{−2m}), leading −a₁.
        let ratio = s_over_r(6).unwrap();
        assert_eq!(ratio.coeff(0), q(0, 1));
        assert_eq!(ratio.coeff(1), q(5, 48));
    }

    #[test]
    fn phi_is_real_and_odd() {
        let phi = phi_series(20).unwrap();
        assert!(phi.is_real());
        for n in (0..=20).step_by(2) {
            assert!(phi.coeff(n).is_zero(), "even coefficient {n}");
        }
        assert_eq!(phi.coeff(1), q(5, 48));
    }

    #[test]
    fn modulus_squares_back() {
        let m = modulus_series(16).unwrap();
        let (ai, bi) = psi_series(16);
        assert_eq!(m.coeff(0), q(1, 1));
        assert!(m.is_real());
        assert_eq!(m.mul(&m).unwrap(), ai.mul(&bi).unwrap());
        let (r, s) = r_s_series(16).unwrap();
        let r2s2 = r.mul(&r).unwrap().add(&s.mul(&s).unwrap()).unwrap();
        assert_eq!(m.mul(&m).unwrap(), r2s2);
    }

    #[test]
    fn x_leading_coefficients() {
        let x = x_series(7).unwrap();
        assert_eq!(x.head(), Head::Identity);
        assert_eq!(x.coeff(1), q(5, 32));
        assert_eq!(x.coeff(3), q(-1255, 6144));
        assert_eq!(x.coeff(5), q(272075, 196608));
        for n in [0, 2, 4, 6] {
            assert!(x.coeff(n).is_zero());
        }
    }

    #[test]
    fn x_derivative_identity() {
        // X′ = 2/(2 − 3φ′∘X)
        let order = 14;
        let x = x_series(order).unwrap();
        let phi = phi_series(order).unwrap();
        let phi_p_x = phi.derivative().compose_shift(&x.body()).unwrap();
        let denom = FormalSeries::constant(q(2, 1), order).sub(&phi_p_x.scale(&q(3, 1)).unwrap()).unwrap();
        let rhs = FormalSeries::constant(q(2, 1), order).div(&denom).unwrap();
        assert_eq!(x.derivative(), rhs);
    }

    #[test]
    fn first_level_coefficients() {
        let (plus, minus) = alien_first(8).unwrap();
        let want = [q(3, 4), q(0, 1), q(-15, 128), q(0, 1), q(3765, 8192), q(0, 1), q(-1360375, 262144)];
        for (m, w) in want.iter().enumerate() {
            assert_eq!(&plus.coeff(m), w, "c_({m},+)");
            assert_eq!(minus.coeff(m), -w, "c_({m},−)");
        }
    }

    #[test]
    fn second_level_leading_coefficients() {
        let s = alien_second(6).unwrap();
        let i = |n, d| GaussianRational::imag(Rational::from((n, d)));
        assert_eq!(s.pp.coeffs()[..5], [i(-3, 4), q(0, 1), i(15, 128), q(45, 256), i(-3765, 8192)]);
        assert_eq!(s.pm.coeffs()[..5], [i(-3, 4), q(0, 1), i(15, 128), q(-45, 256), i(-3765, 8192)]);
        assert_eq!(s.mm.coeffs()[..5], [i(3, 4), q(0, 1), i(-15, 128), q(45, 256), i(3765, 8192)]);
        assert_eq!(s.mp.coeffs()[..5], [i(3, 4), q(0, 1), i(-15, 128), q(-45, 256), i(3765, 8192)]);
    }

    #[test]
    fn table_round_trips_through_json() {
        let t = build_table(10).unwrap();
        let json = t.to_json();
        assert!(json.contains("\"5/32\""));
        let back: AlienCoefficientTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn validator_names_failed_identity() {
        let mut t = build_table(6).unwrap();
        t.c_minus[2] = q(1, 1);
        assert_eq!(t.validate(), Err(AiryError::Invariant { identity: "c_(m,+) = −c_(m,−)", index: 2 }));
        let mut t = build_table(6).unwrap();
        t.c_mp[3] = q(0, 1);
        assert!(matches!(t.validate(), Err(AiryError::Invariant { index: 3, .. })));
    }

    #[test]
    fn rebuild_is_identical() {
        assert_eq!(build_table(12).unwrap(), build_table(12).unwrap());
    }
}
