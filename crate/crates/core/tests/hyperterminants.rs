use airy_resurgence::estimate::t_of_l;
use airy_resurgence::exact_series::GaussianRational;
use airy_resurgence::hyperasymptotics::{
    f1, f2, f2_rotation_sequence, level1_eval, level2_eval, level2_raw, optimal_plan, HyperConfig, HyperEngine,
    Hyperterminant1Args, Hyperterminant2Args, Sigma, TruncationPlan,
};
use airy_resurgence::mp_numerics::BigComplex;
use rug::Float;

fn real(prec: u32, v: f64) -> BigComplex {
    BigComplex::from_real(Float::with_val(prec, v))
}

/// Composite Simpson in f64 along the ray `τ = −ix`: `−i∫₀^L e^{−4x/3}/(t + ix) dx`.
fn f1_brute(t: f64) -> (f64, f64) {
    let (l, n) = (60.0, 400_000usize);
    let h = l / n as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for j in 0..=n {
        let x = j as f64 * h;
        let w = if j == 0 || j == n { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
        let e = (-4.0 * x / 3.0).exp();
        let d = t * t + x * x;
        // 1/(t + ix) = (t − ix)/d
        re += w * e * t / d;
        im -= w * e * x / d;
    }
    let (re, im) = (re * h / 3.0, im * h / 3.0);
    // multiply by −i
    (im, -re)
}

#[test]
fn f1_matches_brute_force() {
    let cfg = HyperConfig::new(128, 1e-25).unwrap();
    let h = f1(&Hyperterminant1Args { t: real(128, 10.0), m: 1, sigma: Sigma::Omega1 }, &cfg).unwrap();
    let (re, im) = f1_brute(10.0);
    assert!((h.value.re.to_f64() - re).abs() < 1e-12, "{} vs {re}", h.value.re);
    assert!((h.value.im.to_f64() - im).abs() < 1e-12, "{} vs {im}", h.value.im);
}

#[test]
fn f1_large_t_asymptotics() {
    // F1 ≈ Γ(M)/(σ^M t)
    let cfg = HyperConfig::new(128, 1e-20).unwrap();
    for (m, sigma) in [(1u32, Sigma::Omega1), (3, Sigma::Omega1Conj), (4, Sigma::Omega2)] {
        let h = f1(&Hyperterminant1Args { t: real(128, 1e3), m, sigma }, &cfg).unwrap();
        let gamma: f64 = (1..m).map(f64::from).product();
        let s = sigma.value(128);
        let expect = s.powu(m).recip().unwrap().scale(&Float::with_val(128, gamma / 1e3));
        let rel = (&h.value - &expect).abs().to_f64() / expect.abs().to_f64();
        assert!(rel < 0.01, "M = {m}: rel {rel}");
    }
}

#[test]
fn f1_conjugate_symmetry() {
    let cfg = HyperConfig::new(128, 1e-25).unwrap();
    let a = f1(&Hyperterminant1Args { t: real(128, 6.0), m: 5, sigma: Sigma::Omega2 }, &cfg).unwrap();
    let b = f1(&Hyperterminant1Args { t: real(128, 6.0), m: 5, sigma: Sigma::Omega2Conj }, &cfg).unwrap();
    assert!((&a.value - &b.value.conj()).abs().to_f64() < 1e-24 * a.value.abs().to_f64());
}

#[test]
fn f2_conjugate_symmetry() {
    let p = 128;
    let cfg = HyperConfig::new(p, 1e-20).unwrap();
    // conjugation mirrors the turn of the inner ray
    let mirrored = cfg.clone().with_collinear_rotation(-Float::with_val(p, &cfg.collinear_rotation));
    let args = |s0, s1| Hyperterminant2Args { t: real(p, 8.0), m0: 4, m1: 3, sigma0: s0, sigma1: s1 };
    for (s0, s1) in [(Sigma::Omega1, Sigma::Omega1Conj), (Sigma::Omega1, Sigma::Omega1)] {
        let a = f2(&args(s0, s1), &cfg).unwrap();
        let b = f2(&args(s0.conj(), s1.conj()), &mirrored).unwrap();
        let rel = (&a.value - &b.value.conj()).abs().to_f64() / a.value.abs().to_f64();
        assert!(rel < 1e-15, "{s0:?},{s1:?}: {rel}");
    }
}

#[test]
fn collinear_sides_differ_by_the_pole_residue() {
    // Crossing the pole τ₁ = τ₀ picks up 2πi·F1(t; M₀+M₁−1, 2σ).
    let p = 128;
    let cfg = HyperConfig::new(p, 1e-20).unwrap();
    let cw = cfg.clone().with_collinear_rotation(-Float::with_val(p, &cfg.collinear_rotation));
    let args = Hyperterminant2Args { t: real(p, 8.0), m0: 4, m1: 3, sigma0: Sigma::Omega1, sigma1: Sigma::Omega1 };
    let ccw_value = f2(&args, &cfg).unwrap().value;
    let cw_value = f2(&args, &cw).unwrap().value;
    let residue = f1(&Hyperterminant1Args { t: real(p, 8.0), m: 6, sigma: Sigma::Omega2 }, &cfg).unwrap().value;
    let two_pi_i = BigComplex::new(Float::new(p), airy_resurgence::mp_numerics::pi(p) * 2u32);
    let jump = &ccw_value - &cw_value;
    let expect = &two_pi_i * &residue;
    let rel = (&jump - &expect).abs().to_f64() / expect.abs().to_f64();
    assert!(rel < 1e-15, "{rel}");
}

#[test]
fn collinear_f2_is_rotation_independent() {
    let cfg = HyperConfig::new(128, 1e-16).unwrap();
    let args = Hyperterminant2Args { t: real(128, 8.0), m0: 5, m1: 2, sigma0: Sigma::Omega1, sigma1: Sigma::Omega1 };
    let v = f2_rotation_sequence(&args, &cfg).unwrap();
    assert_eq!(v.len(), 3);
}

/// The hyperasymptotic correction: value minus the plain partial sum.
fn correction(t: &Float, n0: usize, engine: &HyperEngine, cfg: &HyperConfig) -> BigComplex {
    let zero = HyperEngine { table: zero_alien(engine.table.clone()) };
    let full = level2_raw(t, n0, 4, 0, &engine.table, cfg).unwrap();
    let base = level2_raw(t, n0, 4, 0, &zero.table, cfg).unwrap();
    &full.value - &base.value
}

fn zero_alien(mut table: airy_resurgence::AlienCoefficientTable) -> airy_resurgence::AlienCoefficientTable {
    for list in [&mut table.c_plus, &mut table.c_minus, &mut table.c_pp, &mut table.c_mm, &mut table.c_pm, &mut table.c_mp] {
        list.iter_mut().for_each(|c| *c = GaussianRational::zero());
    }
    table
}

#[test]
fn first_level_pairs_conjugate_singularities() {
    // Keeping only the ω₁ coefficients, then only their conjugates at ω₁*, gives corrections
    // `i·w` and `i·conj(w)`: with an imaginary prefactor, `B = −conj(A)`.
    let p = 128;
    let t = t_of_l(1, p);
    let cfg = HyperConfig::new(p, 1e-25).unwrap();
    let base = HyperEngine::new(12).unwrap();
    let mut only_plus = base.table.clone();
    only_plus.c_minus.iter_mut().for_each(|c| *c = GaussianRational::zero());
    let mut only_minus = zero_alien(base.table.clone());
    for (m, p) in only_minus.c_minus.iter_mut().zip(&base.table.c_plus) {
        *m = p.conj();
    }
    let a = correction(&t, 9, &HyperEngine { table: only_plus }, &cfg);
    let b = correction(&t, 9, &HyperEngine { table: only_minus }, &cfg);
    let diff = (&b + &a.conj()).abs().to_f64();
    assert!(diff < 1e-22 * a.abs().to_f64(), "{diff}");
    assert!(a.abs().to_f64() > 1e-6);
}

#[test]
fn level_two_without_second_level_is_level_one() {
    let p = 128;
    let t = t_of_l(1, p);
    let cfg = HyperConfig::new(p, 1e-24).unwrap();
    let engine = HyperEngine::new(14).unwrap();
    let mut table = engine.table.clone();
    for list in [&mut table.c_pp, &mut table.c_mm, &mut table.c_pm, &mut table.c_mp] {
        list.iter_mut().for_each(|c| *c = GaussianRational::zero());
    }
    let one = level1_eval(&t, &TruncationPlan::new(vec![10, 5]).unwrap(), &table, &cfg).unwrap();
    let two = level2_eval(&t, &TruncationPlan::new(vec![10, 5, 2]).unwrap(), &table, &cfg).unwrap();
    let d = (&one.value - &two.value).abs().to_f64();
    assert!(d < 1e-22, "{d}");
}

#[test]
fn level_one_beats_level_zero() {
    let p = 128;
    let t = t_of_l(2, p);
    let cfg = HyperConfig::new(p, 1e-20).unwrap();
    let engine = HyperEngine::for_zeros(2, 1).unwrap();
    let oracle = airy_resurgence::airy_oracle::airy_zero(2, &airy_resurgence::airy_oracle::OracleConfig::new(p).unwrap()).unwrap();
    let err = |level| {
        let plan = optimal_plan(level, &t).unwrap();
        let e = engine.zero(2, &plan, &cfg).unwrap();
        Float::with_val(p, &e.k - &oracle).abs().to_f64()
    };
    let (e0, e1) = (err(0), err(1));
    assert!(e1 < e0 * 1e-3, "{e0} {e1}");
}
