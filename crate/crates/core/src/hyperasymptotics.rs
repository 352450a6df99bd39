//! Level-0, level-1 and level-2 hyperasymptotic evaluation of `s₀X(t)`.

use rug::{Float, Rational};
use thiserror::Error;

use crate::estimate::{dk_dx_abs, t_of_l, Method, Params, ZeroEstimate};
use crate::exact_series::GaussianRational;
use crate::mp_numerics::{pi, BigComplex, GaussLegendre, NumericError, RayQuadrature};
use crate::resurgent_airy::{build_table, AiryError, AlienCoefficientTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperError {
    #[error("invalid truncation plan {0:?}: need 1 to 3 entries, non-increasing, each ≥ 1")]
    Plan(Vec<usize>),
    #[error("plan level {plan} does not match requested level {requested}")]
    LevelMismatch { plan: usize, requested: usize },
    #[error("coefficient table has order {have}, need {needed}")]
    Coverage { needed: usize, have: usize },
    #[error("imaginary part too large: |Im|/|Re| = {ratio:e} exceeds {limit:e}")]
    Realness { ratio: f64, limit: f64 },
    #[error("collinear hyperterminant depends on the rotation angle: spread {spread:e} > {tol:e}")]
    RotationDependence { spread: f64, tol: f64 },
    #[error("tolerance {tol:e} is below what {prec} bits can deliver")]
    ToleranceTooSmall { tol: f64, prec: u32 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Airy(#[from] AiryError),
}

/// Truncation orders `[N₀, …, N_K]` for level `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationPlan {
    n: Vec<usize>,
}

impl TruncationPlan {
    pub fn new(n: Vec<usize>) -> Result<Self, HyperError> {
        let ok = (1..=3).contains(&n.len()) && n.iter().all(|&v| v >= 1) && n.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Self { n })
        } else {
            Err(HyperError::Plan(n))
        }
    }

    pub fn level(&self) -> usize {
        self.n.len() - 1
    }

    pub fn orders(&self) -> &[usize] {
        &self.n
    }

    pub fn n0(&self) -> usize {
        self.n[0]
    }
}

/// `N_j = round((K+1−j)·(4/3)|t|)`; level 0 uses `n = round((4/3)|t|)`.
pub fn optimal_plan(level: usize, t: &Float) -> Result<TruncationPlan, HyperError> {
    if level > 2 {
        return Err(HyperError::Plan(vec![]));
    }
    let base = Float::with_val(t.prec(), t.abs_ref()) * 4u32 / 3u32;
    let n = (0..=level)
        .map(|j| {
            let v = Float::with_val(t.prec(), &base * (level + 1 - j) as u32).round();
            v.to_u32_saturating().unwrap_or(0).max(1) as usize
        })
        .collect();
    TruncationPlan::new(n)
}

/// Borel-plane singularities `±4i/3`, `±8i/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sigma {
    Omega1,
    Omega1Conj,
    Omega2,
    Omega2Conj,
}

impl Sigma {
    pub fn conj(self) -> Self {
        match self {
            Sigma::Omega1 => Sigma::Omega1Conj,
            Sigma::Omega1Conj => Sigma::Omega1,
            Sigma::Omega2 => Sigma::Omega2Conj,
            Sigma::Omega2Conj => Sigma::Omega2,
        }
    }

    /// `+1` on the positive imaginary axis.
    fn sign(self) -> i32 {
        match self {
            Sigma::Omega1 | Sigma::Omega2 => 1,
            _ => -1,
        }
    }

    pub fn modulus(self, prec: u32) -> Float {
        let k = match self {
            Sigma::Omega1 | Sigma::Omega1Conj => 4u32,
            _ => 8u32,
        };
        Float::with_val(prec, k) / 3u32
    }

    pub fn value(self, prec: u32) -> BigComplex {
        let m = self.modulus(prec);
        BigComplex::new(Float::new(prec), if self.sign() > 0 { m } else { -m })
    }

    /// `arg σ = ±π/2`.
    pub fn arg(self, prec: u32) -> Float {
        let half = pi(prec) / 2u32;
        if self.sign() > 0 {
            half
        } else {
            -half
        }
    }

    /// `e^{−i arg σ}`, the direction of the integration ray (exact for the axis).
    fn ray(self, prec: u32) -> BigComplex {
        let one = Float::with_val(prec, self.sign());
        BigComplex::new(Float::new(prec), -one)
    }

    /// Ray direction turned counter-clockwise by `rot`.
    fn rotated_ray(self, rot: &Float) -> BigComplex {
        let p = rot.prec();
        if rot.is_zero() {
            return self.ray(p);
        }
        &self.ray(p) * &BigComplex::cis(rot)
    }

    pub fn collinear(self, other: Sigma) -> bool {
        self.sign() == other.sign()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperterminant1Args {
    pub t: BigComplex,
    pub m: u32,
    pub sigma: Sigma,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperterminant2Args {
    pub t: BigComplex,
    pub m0: u32,
    pub m1: u32,
    pub sigma0: Sigma,
    pub sigma1: Sigma,
}

/// A hyperterminant value and its quadrature error estimate.
#[derive(Clone, Debug)]
pub struct Hyperterminant {
    pub value: BigComplex,
    pub error_estimate: f64,
}

/// Settings shared by the hyperterminant integrals.
///
/// For a single `F⁽¹⁾` or `F⁽²⁾`, `tol` is the relative quadrature tolerance. For the level
/// sums it is the target accuracy relative to `|t|`; each term then gets the looser
/// tolerance and lower precision its size allows.
#[derive(Clone, Debug)]
pub struct HyperConfig {
    pub prec: u32,
    pub tol: f64,
    /// Turn of the inner ray relative to the outer one when both point the same way.
    pub collinear_rotation: Float,
}

impl HyperConfig {
    pub fn new(prec: u32, tol: f64) -> Result<Self, HyperError> {
        if !(tol > 0.0) || tol.log2() < -((prec as f64) - 24.0) {
            return Err(HyperError::ToleranceTooSmall { tol, prec });
        }
        Ok(Self { prec, tol, collinear_rotation: pi(prec) / 6u32 })
    }

    pub fn with_collinear_rotation(mut self, rot: Float) -> Self {
        self.collinear_rotation = Float::with_val(self.prec, rot);
        self
    }

    /// Same rotation, looser tolerance, fewer bits.
    fn for_term(&self, tol: f64) -> Self {
        let floor = 2f64.powi(-(self.prec as i32 - 24));
        let tol = tol.clamp(floor.min(1e-6), 1e-6);
        let bits = ((-tol.log2()).ceil() as u32 + 40).clamp(64, self.prec);
        Self { prec: bits, tol, collinear_rotation: Float::with_val(bits, &self.collinear_rotation) }
    }

    fn ray_quadrature(&self) -> RayQuadrature {
        RayQuadrature::new(self.prec, self.tol)
    }
}

/// Smallest `x > (M−1)/a` past which `x^{M−1}e^{−ax}` is `rel` times its peak.
fn decay_cutoff(m: u32, a: f64, rel: f64) -> f64 {
    let k = (m.max(1) - 1) as f64;
    let peak = (k / a).max(1.0 / a);
    let log_peak = k * peak.ln() - a * peak;
    let target = log_peak + rel.ln();
    let mut x = peak + 1.0 / a;
    while k * x.ln() - a * x > target {
        x *= 1.25;
    }
    x
}

fn ln_gamma(x: f64) -> f64 {
    Float::with_val(53, x).ln_gamma().to_f64()
}

/// `ln(Γ(M)/a^M)`, the size of `∫₀^∞ e^{−ax}x^{M−1}dx`.
fn ln_moment(m: u32, a: f64) -> f64 {
    let m = m.max(1) as f64;
    ln_gamma(m) - m * a.ln()
}

fn float(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

trait PowU {
    fn pow_u(&self, n: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(&self, n: u32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(n))
    }
}

/// `F⁽¹⁾(t; M, σ) = ∫₀^{∞e^{−iθ}} e^{−στ}τ^{M−1}/(t−τ) dτ`, `θ = arg σ`.
pub fn f1(args: &Hyperterminant1Args, cfg: &HyperConfig) -> Result<Hyperterminant, HyperError> {
    let p = cfg.prec;
    let d = args.sigma.ray(p);
    let a = args.sigma.modulus(p);
    let m = args.m.max(1);
    let km1 = m - 1;
    let t = BigComplex::new(Float::with_val(p, &args.t.re), Float::with_val(p, &args.t.im));
    let integrand = |x: &Float| {
        let tau = d.scale(x);
        let denom = &t - &tau;
        let xp = x.pow_u(km1);
        denom.recip().expect("t off the ray").scale(&xp)
    };
    let scale = (m as f64).sqrt().max(1.0) / a.to_f64();
    let r = cfg.ray_quadrature().integrate(integrand, &a, scale)?;
    // τ^{M−1}dτ = d^M x^{M−1}dx
    let phase = d.powu(m);
    Ok(Hyperterminant { value: &r.value * &phase, error_estimate: r.error_estimate })
}

/// Inner integral `x₀ ↦ ∫ e^{−σ₁τ₁}P(τ₁)/(τ₀−τ₁) dτ₁`, `τ₀ = d₀x₀`, on a fixed graded grid.
///
/// With `ρ = d₁/d₀` and node `x_j`, `τ₀ − τ₁ = d₀(x₀ − ρx_j)`; the kernel is evaluated in
/// real arithmetic from `u_j = Re(ρ)x_j`, `v_j = Im(ρ)x_j`.
struct InnerGrid {
    u: Vec<Float>,
    v2: Vec<Float>,
    w_re: Vec<Float>,
    w_im: Vec<Float>,
    w_re_v: Vec<Float>,
    w_im_v: Vec<Float>,
}

impl InnerGrid {
    /// `P(τ) = Σ_k c_k τ^{M_k−1}`; panel widths stay below `spacing` times the distance to 0.
    #[allow(clippy::too_many_arguments)]
    fn build(
        d0: &BigComplex,
        sigma: Sigma,
        rot: &Float,
        terms: &[(u32, BigComplex)],
        gl_nodes: usize,
        spacing: f64,
        tol: f64,
        prec: u32,
    ) -> Self {
        let d1 = sigma.rotated_ray(rot);
        let rho = &d1 * &d0.recip().expect("unit direction");
        let inv_d0 = d0.recip().expect("unit direction");
        let a = sigma.modulus(prec);
        let decay = BigComplex::cis(rot).scale(&a);
        let a_eff = a.to_f64() * rot.to_f64().cos();
        let m_max = terms.iter().map(|t| t.0).max().unwrap_or(1);
        let m_min = terms.iter().map(|t| t.0).min().unwrap_or(1);
        let length = decay_cutoff(m_max, a_eff, tol * 1e-6);
        let h = (1.0 / a_eff).min(1.5);
        // Below x_min the integrand is negligible: x^{M_min} < tol there.
        let x_min = h * (tol * 1e-6).powf(1.0 / m_min as f64).min(1e-3);
        let mut edges = vec![0.0, x_min];
        let mut x = x_min;
        while x < length {
            let w = h.min(x * spacing);
            x = (x + w).min(length);
            edges.push(x);
        }
        let rule = GaussLegendre::new(gl_nodes, prec);
        let mut grid = Self { u: vec![], v2: vec![], w_re: vec![], w_im: vec![], w_re_v: vec![], w_im_v: vec![] };
        for win in edges.windows(2) {
            let (xs, ws) = rule.mapped(&float(prec, win[0]), &float(prec, win[1]));
            for (x, w) in xs.iter().zip(&ws) {
                let z = d1.scale(x);
                let damp = decay.scale(&Float::with_val(prec, -x)).exp();
                let mut poly = BigComplex::zero(prec);
                for (m, c) in terms {
                    poly = &poly + &(c * &z.powu(m - 1));
                }
                // dτ₁ = d₁dx; the 1/d₀ comes from τ₀ − τ₁ = d₀(x₀ − ρx)
                let g = (&(&(&damp * &poly) * &d1) * &inv_d0).scale(w);
                let u = Float::with_val(prec, &rho.re * x);
                let v = Float::with_val(prec, &rho.im * x);
                grid.w_re_v.push(Float::with_val(prec, &g.re * &v));
                grid.w_im_v.push(Float::with_val(prec, &g.im * &v));
                grid.v2.push(Float::with_val(prec, v.square_ref()));
                grid.u.push(u);
                grid.w_re.push(g.re);
                grid.w_im.push(g.im);
            }
        }
        grid
    }

    fn len(&self) -> usize {
        self.u.len()
    }

    /// `Σ_j W_j/(x₀ − u_j − i v_j)`.
    fn eval(&self, x0: &Float) -> BigComplex {
        let p = x0.prec();
        let mut a = Float::new(p);
        let mut den = Float::new(p);
        let mut tmp = Float::new(p);
        let mut re = Float::new(p);
        let mut im = Float::new(p);
        for j in 0..self.len() {
            a.assign(x0 - &self.u[j]);
            den.assign(a.square_ref());
            den += &self.v2[j];
            den.recip_mut();
            // (W_re + iW_im)(a + iv)
            tmp.assign(&self.w_re[j] * &a);
            tmp -= &self.w_im_v[j];
            tmp *= &den;
            re += &tmp;
            tmp.assign(&self.w_im[j] * &a);
            tmp += &self.w_re_v[j];
            tmp *= &den;
            im += &tmp;
        }
        BigComplex::new(re, im)
    }
}

use rug::Assign;

/// `Σ_k c_k F⁽²⁾(t; M₀, M_k; σ₀, σ₁)` with one nested integral.
///
/// When `σ₀` and `σ₁` point the same way, the inner ray is turned counter-clockwise by
/// `cfg.collinear_rotation`; the value does not depend on the angle inside the sector.
pub fn f2_combination(
    t: &BigComplex,
    m0: u32,
    sigma0: Sigma,
    sigma1: Sigma,
    terms: &[(u32, BigComplex)],
    cfg: &HyperConfig,
) -> Result<Hyperterminant, HyperError> {
    let p = cfg.prec;
    let collinear = sigma0.collinear(sigma1);
    let rot = if collinear { cfg.collinear_rotation.clone() } else { Float::new(p) };
    let spacing = if collinear { rot.to_f64().sin().abs().min(0.5) } else { 0.5 };
    let digits = -cfg.tol.log10();
    let gl = ((digits / 1.2).ceil() as usize + 4).clamp(12, 64);
    let terms: Vec<(u32, BigComplex)> =
        terms.iter().map(|(m, c)| (*m, BigComplex::new(Float::with_val(p, &c.re), Float::with_val(p, &c.im)))).collect();
    let d0 = sigma0.ray(p);
    let grid = InnerGrid::build(&d0, sigma1, &rot, &terms, gl, spacing, cfg.tol, p);
    let check = InnerGrid::build(&d0, sigma1, &rot, &terms, gl + 8, spacing, cfg.tol, p);

    let a0 = sigma0.modulus(p);
    let k0 = m0.max(1) - 1;
    let t = BigComplex::new(Float::with_val(p, &t.re), Float::with_val(p, &t.im));
    let outer = |x: &Float| {
        let tau0 = d0.scale(x);
        let xp = x.pow_u(k0);
        let inner = grid.eval(x);
        let denom = (&t - &tau0).recip().expect("t off the ray");
        (&denom * &inner).scale(&xp)
    };
    let scale = (m0 as f64).sqrt().max(1.0) / a0.to_f64();
    let r = cfg.ray_quadrature().integrate(outer, &a0, scale)?;

    // Inner grid error sampled around the outer peak.
    let peak = (k0.max(1) as f64) / a0.to_f64();
    let mut inner_rel = 0.0f64;
    for f in [0.25, 0.5, 1.0, 2.0] {
        let x0 = float(p, peak * f);
        let a = grid.eval(&x0);
        let b = check.eval(&x0);
        let scale = a.abs().to_f64().max(f64::MIN_POSITIVE);
        inner_rel = inner_rel.max((&a - &b).abs().to_f64() / scale);
    }
    // τ₀^{M₀−1}dτ₀ = d₀^{M₀}x₀^{M₀−1}dx₀
    let phase = d0.powu(m0.max(1));
    Ok(Hyperterminant { value: &r.value * &phase, error_estimate: r.error_estimate + inner_rel * r.abs_integral })
}

/// `F⁽²⁾(t; M₀, M₁; σ₀, σ₁)`.
pub fn f2(args: &Hyperterminant2Args, cfg: &HyperConfig) -> Result<Hyperterminant, HyperError> {
    let one = BigComplex::one(cfg.prec);
    f2_combination(&args.t, args.m0, args.sigma0, args.sigma1, &[(args.m1, one)], cfg)
}

/// Collinear `F⁽²⁾` at rotations `rot, rot/2, rot/4`; all three must agree to within `10³·tol`.
pub fn f2_rotation_sequence(args: &Hyperterminant2Args, cfg: &HyperConfig) -> Result<Vec<BigComplex>, HyperError> {
    let mut values = Vec::new();
    let mut rot = cfg.collinear_rotation.clone();
    for _ in 0..3 {
        let c = cfg.clone().with_collinear_rotation(rot.clone());
        values.push(f2(args, &c)?.value);
        rot /= 2u32;
    }
    let scale = values[0].abs().to_f64();
    let spread = values.windows(2).map(|w| (&w[0] - &w[1]).abs().to_f64()).fold(0.0, f64::max);
    if spread > cfg.tol * 1e3 * scale {
        return Err(HyperError::RotationDependence { spread: spread / scale, tol: cfg.tol * 1e3 });
    }
    Ok(values)
}

/// A hyperasymptotic partial sum with diagnostics.
#[derive(Clone, Debug)]
pub struct HyperSum {
    pub value: BigComplex,
    /// Summed quadrature error estimates of the hyperterminant terms, absolute.
    pub quadrature_error: f64,
    pub imag_ratio: f64,
}

fn gaussian(c: &GaussianRational, prec: u32) -> BigComplex {
    BigComplex::from_gaussian(c, prec)
}

fn check_coverage(table: &AlienCoefficientTable, n0: usize) -> Result<(), HyperError> {
    if table.order < n0 {
        return Err(HyperError::Coverage { needed: n0, have: table.order });
    }
    Ok(())
}

/// `t + Σ_{k<count} c_k/t^k` in increasing `k`.
fn partial_sum(t: &Float, c: &[Rational], count: usize) -> Float {
    let p = t.prec();
    let inv = Float::with_val(p, t.recip_ref());
    let mut power = Float::with_val(p, 1);
    let mut sum = t.clone();
    for ck in c.iter().take(count) {
        if ck.cmp0().is_ne() {
            sum += Float::with_val(p, &power * ck);
        }
        power *= &inv;
    }
    sum
}

/// `(t + Σ_{k≤n} c_k/t^k, |c_m|/(|t|^{m−1}Re t))` with `m` the first index past `n` with `c_m ≠ 0`.
pub fn level0_eval(t: &Float, n: usize, table: &AlienCoefficientTable) -> Result<(Float, Float), HyperError> {
    let c = &table.c;
    let m = (n + 1..c.len())
        .find(|&m| c[m].cmp0().is_ne())
        .ok_or(HyperError::Coverage { needed: n + 2, have: table.order })?;
    let value = partial_sum(t, c, n + 1);
    let p = t.prec();
    let tabs = Float::with_val(p, t.abs_ref());
    let err = Float::with_val(p, &c[m]).abs() / tabs.pow_u(m as u32 - 1) / t;
    Ok((value, err))
}

fn realness(value: &BigComplex, tol: f64) -> Result<f64, HyperError> {
    let re = value.re.to_f64().abs();
    let ratio = value.im.to_f64().abs() / re.max(f64::MIN_POSITIVE);
    let limit = 10.0 * tol;
    if ratio >= limit {
        return Err(HyperError::Realness { ratio, limit });
    }
    Ok(ratio)
}

/// `(−1/(2iπ))^level / t^{N₀−1}`.
fn prefactor(t: &Float, n0: usize, level: u32) -> BigComplex {
    let p = t.prec();
    let two_pi = pi(p) * 2u32;
    // −1/(2iπ) = i/(2π)
    let base = BigComplex::new(Float::new(p), two_pi.recip());
    let tn = t.pow_u(n0 as u32 - 1);
    base.powu(level).scale(&tn.recip())
}

/// Error budget: absolute accuracy wanted from a term whose size is about `e^{ln_size}`.
struct Budget {
    target: f64,
}

impl Budget {
    fn new(t: &Float, cfg: &HyperConfig, terms: usize) -> Self {
        Self { target: cfg.tol * t.to_f64().abs() * 0.05 / terms.max(1) as f64 }
    }

    fn tolerance(&self, ln_size: f64) -> f64 {
        (self.target.ln() - ln_size).exp()
    }
}

/// Level-1 part: partial sum through `N₀−1` and the `ω₁`, `ω₁*` terms for `n < N₁`.
fn level1_raw(
    t: &Float,
    n0: usize,
    n1: usize,
    table: &AlienCoefficientTable,
    cfg: &HyperConfig,
    budget: &Budget,
) -> Result<HyperSum, HyperError> {
    let p = cfg.prec;
    check_coverage(table, n0)?;
    let pre = prefactor(t, n0, 1);
    let ln_pre = pre.abs().to_f64().ln();
    let tc = BigComplex::from_real(t.clone());
    let mut corr = BigComplex::zero(p);
    let mut err = 0.0;
    for n in 0..n1 {
        for (coeff, sigma) in [(&table.c_plus[n], Sigma::Omega1), (&table.c_minus[n], Sigma::Omega1Conj)] {
            if coeff.is_zero() {
                continue;
            }
            let m = (n0 - n) as u32;
            let c = gaussian(coeff, p);
            let ln_size = ln_pre + c.abs().to_f64().ln() + ln_moment(m, sigma.modulus(53).to_f64()) - t.to_f64().ln();
            let term_cfg = cfg.for_term(budget.tolerance(ln_size));
            let h = f1(&Hyperterminant1Args { t: tc.clone(), m, sigma }, &term_cfg)?;
            err += h.error_estimate * c.abs().to_f64();
            corr = &corr + &(&c * &h.value);
        }
    }
    let value = (&pre * &corr).add_real(&partial_sum(t, &table.c, n0));
    Ok(HyperSum { value, quadrature_error: err * pre.abs().to_f64(), imag_ratio: 0.0 })
}

/// The level-1 sum for real `t` with the realness check.
pub fn level1_eval(t: &Float, plan: &TruncationPlan, table: &AlienCoefficientTable, cfg: &HyperConfig) -> Result<HyperSum, HyperError> {
    if plan.level() != 1 {
        return Err(HyperError::LevelMismatch { plan: plan.level(), requested: 1 });
    }
    let (n0, n1) = (plan.orders()[0], plan.orders()[1]);
    let budget = Budget::new(t, cfg, 2 * n1);
    let mut s = level1_raw(t, n0, n1, table, cfg, &budget)?;
    s.imag_ratio = realness(&s.value, cfg.tol)?;
    Ok(s)
}

/// Level-2 sum without the realness check.
pub fn level2_raw(
    t: &Float,
    n0: usize,
    n1: usize,
    n2: usize,
    table: &AlienCoefficientTable,
    cfg: &HyperConfig,
) -> Result<HyperSum, HyperError> {
    let p = cfg.prec;
    let budget = Budget::new(t, cfg, 2 * n1 + 2 * n2 + 4);
    let mut s = level1_raw(t, n0, n1, table, cfg, &budget)?;
    let tc = BigComplex::from_real(t.clone());
    let ln_t = t.to_f64().ln();

    // ω₂ terms carry c_(n,±,±)/2.
    let pre1 = prefactor(t, n0, 1);
    let ln_pre1 = pre1.abs().to_f64().ln();
    let half = Float::with_val(p, 0.5);
    let mut corr = BigComplex::zero(p);
    let mut err = 0.0;
    for n in 0..n2 {
        for (coeff, sigma) in [(&table.c_pp[n], Sigma::Omega2), (&table.c_mm[n], Sigma::Omega2Conj)] {
            if coeff.is_zero() {
                continue;
            }
            let m = (n0 - n) as u32;
            let c = gaussian(coeff, p).scale(&half);
            let ln_size = ln_pre1 + c.abs().to_f64().ln() + ln_moment(m, sigma.modulus(53).to_f64()) - ln_t;
            let term_cfg = cfg.for_term(budget.tolerance(ln_size));
            let h = f1(&Hyperterminant1Args { t: tc.clone(), m, sigma }, &term_cfg)?;
            err += h.error_estimate * c.abs().to_f64();
            corr = &corr + &(&c * &h.value);
        }
    }
    s.value = &s.value + &(&pre1 * &corr);
    s.quadrature_error += err * pre1.abs().to_f64();

    let pre2 = prefactor(t, n0, 2);
    let ln_pre2 = pre2.abs().to_f64().ln();
    let m0 = (n0 - n1 + 1) as u32;
    let pairs = [
        (&table.c_pp, Sigma::Omega1, Sigma::Omega1),
        (&table.c_pm, Sigma::Omega1, Sigma::Omega1Conj),
        (&table.c_mp, Sigma::Omega1Conj, Sigma::Omega1),
        (&table.c_mm, Sigma::Omega1Conj, Sigma::Omega1Conj),
    ];
    let a1 = Sigma::Omega1.modulus(53).to_f64();
    let mut f2_total = BigComplex::zero(p);
    let mut f2_err = 0.0;
    for (coeffs, s0, s1) in pairs {
        let terms: Vec<(u32, BigComplex)> = (0..n2)
            .filter(|&n| !coeffs[n].is_zero())
            .map(|n| ((n1 - n) as u32, gaussian(&coeffs[n], p)))
            .collect();
        if terms.is_empty() {
            continue;
        }
        // |inner| ≲ Σ|c|Γ(M₁)/a^{M₁}/(|τ₀| sin δ); the outer moment then drops one power.
        let sin = if s0.collinear(s1) { cfg.collinear_rotation.to_f64().sin() } else { 1.0 };
        let a_in = a1 * if s0.collinear(s1) { cfg.collinear_rotation.to_f64().cos() } else { 1.0 };
        let ln_inner = terms
            .iter()
            .map(|(m, c)| c.abs().to_f64().ln() + ln_moment(*m, a_in))
            .fold(f64::NEG_INFINITY, f64::max)
            + (terms.len() as f64).ln()
            - sin.ln();
        let ln_size = ln_pre2 + ln_inner + ln_moment(m0.saturating_sub(1).max(1), a1) - ln_t;
        let term_cfg = cfg.for_term(budget.tolerance(ln_size));
        let h = f2_combination(&tc, m0, s0, s1, &terms, &term_cfg)?;
        f2_err += h.error_estimate;
        f2_total = &f2_total + &h.value;
    }
    s.value = &s.value + &(&pre2 * &f2_total);
    s.quadrature_error += f2_err * pre2.abs().to_f64();
    Ok(s)
}

/// The level-2 sum for real `t` with the realness check.
pub fn level2_eval(t: &Float, plan: &TruncationPlan, table: &AlienCoefficientTable, cfg: &HyperConfig) -> Result<HyperSum, HyperError> {
    if plan.level() != 2 {
        return Err(HyperError::LevelMismatch { plan: plan.level(), requested: 2 });
    }
    let o = plan.orders();
    let mut s = level2_raw(t, o[0], o[1], o[2], table, cfg)?;
    s.imag_ratio = realness(&s.value, cfg.tol)?;
    Ok(s)
}

/// `e^{−(K+1)|ω₁||t|}`, the exponential scale of the level-`K` remainder at the optimal plan.
pub fn remainder_scale(level: usize, t: &Float) -> Float {
    let p = t.prec();
    let e = Float::with_val(p, t.abs_ref()) * 4u32 / 3u32 * (level as u32 + 1);
    (-e).exp()
}

/// Hyperasymptotic engine with a coefficient table shared across zeros.
#[derive(Clone, Debug)]
pub struct HyperEngine {
    pub table: AlienCoefficientTable,
}

impl HyperEngine {
    pub fn new(order: usize) -> Result<Self, HyperError> {
        Ok(Self { table: build_table(order)? })
    }

    /// Table large enough for the optimal plans of zeros `1..=l_max` at `level`.
    pub fn for_zeros(l_max: u32, level: usize) -> Result<Self, HyperError> {
        let t = t_of_l(l_max, 64);
        let plan = optimal_plan(level, &t)?;
        Self::new(plan.n0() + 4)
    }

    pub fn zero(&self, l: u32, plan: &TruncationPlan, cfg: &HyperConfig) -> Result<ZeroEstimate, HyperError> {
        let p = cfg.prec;
        let t = t_of_l(l, p);
        let o = plan.orders();
        let (x, err, method) = match plan.level() {
            0 => {
                let (v, e) = level0_eval(&t, o[0], &self.table)?;
                (v, Some(e), Method::Hyper0)
            }
            level => {
                let s = if level == 1 {
                    level1_eval(&t, plan, &self.table, cfg)?
                } else {
                    level2_eval(&t, plan, &self.table, cfg)?
                };
                let err = remainder_scale(level, &t) + s.quadrature_error;
                (s.value.re, Some(err), if level == 1 { Method::Hyper1 } else { Method::Hyper2 })
            }
        };
        let params = Params {
            plan: Some(o.to_vec()),
            tol: (plan.level() > 0).then(|| format!("{:e}", cfg.tol)),
            estimate_note: (plan.level() > 0).then(|| "remainder scale exp(-(K+1)(4/3)t)".to_string()),
            ..Params::default()
        };
        let mut est = ZeroEstimate::from_x(l, t, method, params, x, p);
        est.error_estimate = err.map(|e| e * dk_dx_abs(&est.x));
        Ok(est)
    }
}

/// `k_l` at the optimal plan for `level`.
pub fn zero_by_hyper(l: u32, level: usize, prec: u32, tol: f64) -> Result<ZeroEstimate, HyperError> {
    let cfg = HyperConfig::new(prec, tol)?;
    let t = t_of_l(l, prec);
    let plan = optimal_plan(level, &t)?;
    let engine = HyperEngine::new(plan.n0() + 4)?;
    engine.zero(l, &plan, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_match_printed_orders() {
        let p = 128;
        assert_eq!(optimal_plan(2, &t_of_l(1, p)).unwrap().orders(), &[14, 9, 5]);
        assert_eq!(optimal_plan(1, &t_of_l(1, p)).unwrap().orders(), &[9, 5]);
        assert_eq!(optimal_plan(0, &t_of_l(1, p)).unwrap().orders(), &[5]);
        assert_eq!(optimal_plan(2, &t_of_l(3, p)).unwrap().orders(), &[52, 35, 17]);
        assert_eq!(optimal_plan(1, &t_of_l(3, p)).unwrap().orders(), &[35, 17]);
        assert_eq!(optimal_plan(0, &t_of_l(3, p)).unwrap().orders(), &[17]);
    }

    #[test]
    fn plan_validation() {
        assert!(TruncationPlan::new(vec![5, 9]).is_err());
        assert!(TruncationPlan::new(vec![5, 0]).is_err());
        assert!(TruncationPlan::new(vec![]).is_err());
        assert!(TruncationPlan::new(vec![4, 3, 2, 1]).is_err());
        assert_eq!(TruncationPlan::new(vec![9, 5]).unwrap().level(), 1);
    }

    #[test]
    fn level0_with_n_zero() {
        let table = build_table(4).unwrap();
        let t = Float::with_val(128, 7);
        let (v, e) = level0_eval(&t, 0, &table).unwrap();
        assert_eq!(v, 7);
        // c₁ = 5/32
        assert!((e - Float::with_val(128, 5) / 32u32 / 7u32).abs() < 1e-35);
    }

    #[test]
    fn f1_conjugate_symmetry() {
        let cfg = HyperConfig::new(128, 1e-25).unwrap();
        let t = BigComplex::from_real(Float::with_val(128, 3.5));
        for m in [1, 4, 9] {
            let a = f1(&Hyperterminant1Args { t: t.clone(), m, sigma: Sigma::Omega1 }, &cfg).unwrap().value;
            let b = f1(&Hyperterminant1Args { t: t.clone(), m, sigma: Sigma::Omega1Conj }, &cfg).unwrap().value;
            assert_eq!(a, b.conj());
        }
    }

    #[test]
    fn level1_with_no_correction_is_partial_sum() {
        let table = build_table(12).unwrap();
        let cfg = HyperConfig::new(128, 1e-20).unwrap();
        let t = t_of_l(2, 128);
        let s = level1_raw(&t, 9, 0, &table, &cfg, &Budget::new(&t, &cfg, 1)).unwrap();
        let (v, _) = level0_eval(&t, 8, &table).unwrap();
        assert_eq!(s.value.re, v);
        assert!(s.value.im.is_zero());
    }

    #[test]
    fn decay_cutoff_reaches_target() {
        let x = decay_cutoff(20, 4.0 / 3.0, 1e-40);
        let f = |x: f64| 19.0 * x.ln() - 4.0 / 3.0 * x;
        assert!(f(x) - f(19.0 * 0.75) <= 1e-40f64.ln());
    }
}
