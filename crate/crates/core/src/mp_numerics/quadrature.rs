use rayon::prelude::*;
use rug::Float;

use super::complex::{pi, BigComplex};
use super::NumericError;

/// Gauss–Legendre nodes and weights on `[−1, 1]` at a fixed precision.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    prec: u32,
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussLegendre {
    /// `n`-point rule; nodes refined by Newton's method on `Pₙ` with 32 guard bits.
    pub fn new(n: usize, prec: u32) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let wp = prec + 32;
        let eps = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
        let pi = pi(wp);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 1..=n {
            // Tricomi initial guess
            let guess = Float::with_val(wp, (i as f64 - 0.25) / (n as f64 + 0.5));
            let mut x = Float::with_val(wp, &guess * &pi).cos();
            let mut dp = Float::new(wp);
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, &x);
                let step = Float::with_val(wp, &p / &d);
                x -= &step;
                dp = d;
                if step.abs() < eps {
                    let (_, d) = legendre_with_derivative(n, &x);
                    dp = d;
                    break;
                }
            }
            let one_minus_x2 = Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref());
            let w = Float::with_val(wp, 2) / (one_minus_x2 * Float::with_val(wp, dp.square_ref()));
            nodes.push(Float::with_val(prec, &x));
            weights.push(Float::with_val(prec, &w));
        }
        Self { prec, nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    /// Nodes mapped to `[a, b]` with weights scaled by `(b − a)/2`.
    pub fn mapped(&self, a: &Float, b: &Float) -> (Vec<Float>, Vec<Float>) {
        let p = self.prec;
        let half = Float::with_val(p, b - a) / 2u32;
        let mid = Float::with_val(p, a + b) / 2u32;
        let xs = self.nodes.iter().map(|t| Float::with_val(p, t * &half) + &mid).collect();
        let ws = self.weights.iter().map(|w| Float::with_val(p, w * &half)).collect();
        (xs, ws)
    }

    /// `∫_a^b f` with this rule; node evaluations run in parallel, the sum in fixed order.
    pub fn integrate<F>(&self, f: &F, a: &Float, b: &Float) -> BigComplex
    where
        F: Fn(&Float) -> BigComplex + Sync,
    {
        let (xs, ws) = self.mapped(a, b);
        let values: Vec<BigComplex> = xs.par_iter().map(f).collect();
        let mut acc = BigComplex::zero(self.prec);
        for (v, w) in values.iter().zip(&ws) {
            acc = &acc + &v.scale(w);
        }
        acc
    }
}

/// `(Pₙ(x), Pₙ′(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut p0 = Float::with_val(p, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let t = Float::with_val(p, x * &p1) * (2 * k - 1) - Float::with_val(p, &p0 * (k - 1));
        p0 = p1;
        p1 = t / k;
    }
    if n == 0 {
        return (Float::with_val(p, 1), Float::new(p));
    }
    // Pₙ′ = n(x Pₙ − Pₙ₋₁)/(x² − 1)
    let x2m1 = Float::with_val(p, x.square_ref()) - 1u32;
    let d = (Float::with_val(p, x * &p1) - &p0) * (n as u32) / x2m1;
    (p1, d)
}

/// Outcome of an adaptive integral.
#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: BigComplex,
    /// Estimate of `∫|f|`, the scale the relative tolerance refers to.
    pub abs_integral: f64,
    /// Sum of local refinement differences plus the neglected tail.
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss–Legendre integration of exponentially decaying integrands on `[0, ∞)`.
#[derive(Clone, Debug)]
pub struct RayQuadrature {
    rule: GaussLegendre,
    tol: f64,
    max_subdivisions: usize,
}

impl RayQuadrature {
    /// Rule size grows with the number of digits requested.
    pub fn new(prec: u32, tol: f64) -> Self {
        let digits = (-tol.log10()).max(8.0);
        let n = (digits * 0.9).ceil().clamp(16.0, 64.0) as usize;
        Self::with_rule(GaussLegendre::new(n, prec), tol)
    }

    pub fn with_rule(rule: GaussLegendre, tol: f64) -> Self {
        Self { rule, tol, max_subdivisions: 20_000 }
    }

    pub fn with_max_subdivisions(mut self, max: usize) -> Self {
        self.max_subdivisions = max;
        self
    }

    pub fn prec(&self) -> u32 {
        self.rule.prec()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    /// `∫₀^∞ f(x)·e^{−decay·x} dx` to relative accuracy `tol` (relative to `∫|·|`).
    ///
    /// `scale` is a length on which the integrand varies (for `x^{M−1}e^{−dx}` about
    /// `max(1, √M)/d`); panels of that width march outwards until two consecutive panels
    /// fall below `tol` times the running absolute integral.
    pub fn integrate<F>(&self, f: F, decay: &Float, scale: f64) -> Result<QuadratureResult, NumericError>
    where
        F: Fn(&Float) -> BigComplex + Sync,
    {
        let p = self.prec();
        let g = |x: &Float| {
            let damp = Float::with_val(p, x * decay);
            f(x).scale(&(-damp).exp())
        };
        let width = Float::with_val(p, scale.max(1e-6));
        let mut total = BigComplex::zero(p);
        let mut abs_total = 0.0f64;
        let mut err_total = 0.0f64;
        let mut evaluations = 0usize;
        let mut subdivisions = 0usize;
        let mut a = Float::new(p);
        let mut quiet = 0;
        let decay_f = decay.to_f64();
        loop {
            let b = Float::with_val(p, &a + &width);
            let piece = self.panel(&g, &a, &b, abs_total, &mut subdivisions)?;
            evaluations += piece.evaluations;
            total = &total + &piece.value;
            abs_total += piece.abs_integral;
            err_total += piece.error_estimate;
            a = b;
            if piece.abs_integral <= self.tol * abs_total * 1e-2 && abs_total > 0.0 {
                quiet += 1;
            } else if abs_total == 0.0 && a.to_f64() * decay_f > 800.0 {
                // Identically zero integrand on the whole march.
                quiet = 2;
            } else {
                quiet = 0;
            }
            if quiet >= 2 {
                // Remaining tail bounded by the last panel times a geometric factor.
                let ratio = (-decay_f * scale).exp();
                err_total += piece.abs_integral * ratio / (1.0 - ratio).max(1e-3);
                break;
            }
            if subdivisions > self.max_subdivisions {
                return Err(NumericError::QuadratureFailed { achieved: err_total / abs_total.max(f64::MIN_POSITIVE) });
            }
        }
        Ok(QuadratureResult { value: total, abs_integral: abs_total, error_estimate: err_total, evaluations })
    }

    /// One panel, bisected until the rule agrees with its two halves.
    fn panel<G>(
        &self,
        g: &G,
        a: &Float,
        b: &Float,
        abs_before: f64,
        subdivisions: &mut usize,
    ) -> Result<QuadratureResult, NumericError>
    where
        G: Fn(&Float) -> BigComplex + Sync,
    {
        let p = self.prec();
        let n = self.rule.len();
        let mut stack = vec![(a.clone(), b.clone(), None::<(BigComplex, f64)>)];
        let mut value = BigComplex::zero(p);
        let mut abs_sum = 0.0;
        let mut err_sum = 0.0;
        let mut evaluations = 0;
        while let Some((lo, hi, whole)) = stack.pop() {
            let (whole, whole_abs) = match whole {
                Some(w) => w,
                None => {
                    evaluations += n;
                    self.rule_with_abs(g, &lo, &hi)
                }
            };
            let mid = Float::with_val(p, &lo + &hi) / 2u32;
            let (left, left_abs) = self.rule_with_abs(g, &lo, &mid);
            let (right, right_abs) = self.rule_with_abs(g, &mid, &hi);
            evaluations += 2 * n;
            let halves = &left + &right;
            let diff = (&halves - &whole).max_abs_f64();
            let scale = abs_before.max(abs_sum + left_abs + right_abs).max(whole_abs);
            let width = Float::with_val(53, &hi - &lo).to_f64();
            let total_width = Float::with_val(53, b - a).to_f64();
            let local_tol = self.tol * scale * (width / total_width).max(1e-6) * 0.5;
            if diff <= local_tol || width < 1e-30 * total_width.max(1.0) {
                value = &value + &halves;
                abs_sum += left_abs + right_abs;
                err_sum += diff;
            } else {
                *subdivisions += 1;
                if *subdivisions > self.max_subdivisions {
                    return Err(NumericError::QuadratureFailed { achieved: diff / scale.max(f64::MIN_POSITIVE) });
                }
                stack.push((mid.clone(), hi, Some((right, right_abs))));
                stack.push((lo, mid, Some((left, left_abs))));
            }
        }
        Ok(QuadratureResult { value, abs_integral: abs_sum, error_estimate: err_sum, evaluations })
    }

    fn rule_with_abs<G>(&self, g: &G, a: &Float, b: &Float) -> (BigComplex, f64)
    where
        G: Fn(&Float) -> BigComplex + Sync,
    {
        let (xs, ws) = self.rule.mapped(a, b);
        let values: Vec<BigComplex> = xs.par_iter().map(g).collect();
        let mut acc = BigComplex::zero(self.prec());
        let mut abs = 0.0;
        for (v, w) in values.iter().zip(&ws) {
            let t = v.scale(w);
            abs += t.abs().to_f64();
            acc = &acc + &t;
        }
        (acc, abs)
    }
}

/// `∫₀^∞ f(x)e^{−decay·x}dx` with a fresh [`RayQuadrature`] at `prec` bits.
pub fn ray_quadrature<F>(f: F, decay: &Float, tol: f64, prec: u32) -> Result<QuadratureResult, NumericError>
where
    F: Fn(&Float) -> BigComplex + Sync,
{
    let d = decay.to_f64();
    RayQuadrature::new(prec, tol).integrate(f, decay, 2.0 / d)
}
