use la_nodal::blowup::snap_order;
use la_nodal::extension::{dtn, frac_laplacian_direct, poisson_extend, Datum, ExtensionOptions};
use la_nodal::field::{ExactField, Field};
use la_nodal::monotonicity::{Functionals, Parity};
use la_nodal::poly::{garofalo_extend, planar_even, planar_odd, MultiPoly, Q};
use la_nodal::quadrature::WeightParam;
use num::One;
use proptest::prelude::*;

/// Rational exponents in (-1, 1) with small denominators.
fn exponent() -> impl Strategy<Value = Q> {
    (1i64..=12).prop_flat_map(|d| (-(d - 1)..d).prop_map(move |p| Q::new(p.into(), d.into())))
}

fn to_f64(q: &Q) -> f64 {
    la_nodal::poly::ratio_to_f64(q)
}

fn cauchy() -> Datum {
    Datum::growth(1, 0.0, 1.0, |x: &[f64]| 1.0 / (1.0 + x[0] * x[0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planar_families_are_solutions(a in exponent(), half in 1u32..4) {
        let p = planar_even(2 * half, &a).unwrap();
        prop_assert!(p.apply_la(&a).unwrap().is_zero());
        let q = planar_odd(2 * half + 1, &a).unwrap();
        prop_assert!(q.apply_la(&a).unwrap().is_zero());
        prop_assert_eq!(q.homogeneous_degree(), Some(2 * half + 1));
    }

    #[test]
    fn extension_keeps_trace(a in exponent(), i in 0u32..4, j in 0u32..4) {
        let m = MultiPoly::<Q>::monomial(vec![i, j, 0], Q::one());
        let p = garofalo_extend(&m, &a).unwrap();
        prop_assert!(p.apply_la(&a).unwrap().is_zero());
        prop_assert_eq!(p.trace(), m.trace());
    }

    #[test]
    fn frequency_of_homogeneous_field_is_constant(a in exponent(), k in 1u32..6, r in 0.01f64..2.0) {
        let af = to_f64(&a);
        let p = if k % 2 == 0 { planar_even(k, &a) } else { planar_odd(k, &a) }.unwrap();
        let u = ExactField::from_poly(&p, af);
        let fun = Functionals::with_defaults(&WeightParam::new(1, af).unwrap()).unwrap();
        let s = fun.sample(&u, &[0.0, 0.0], r).unwrap();
        prop_assert!((s.n - k as f64).abs() < 1e-8, "N = {}", s.n);
        // H scales as r^{2k}
        let h2 = fun.h(&u, &[0.0, 0.0], 2.0 * r).unwrap();
        prop_assert!((h2 / s.h / 4f64.powi(k as i32) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn frequency_ignores_scaling(a in exponent(), c in 0.1f64..10.0, r in 0.05f64..1.0) {
        let af = to_f64(&a);
        let u = ExactField::from_poly(&planar_even(2, &a).unwrap(), af)
            .plus(&ExactField::from_poly(&planar_odd(3, &a).unwrap(), af));
        let fun = Functionals::with_defaults(&WeightParam::new(1, af).unwrap()).unwrap();
        let x0 = [0.1, 0.0];
        let n1 = fun.sample(&u, &x0, r).unwrap().n;
        let n2 = fun.sample(&u.scaled(c), &x0, r).unwrap().n;
        prop_assert!((n1 - n2).abs() < 1e-10 * n1.abs().max(1.0));
    }

    #[test]
    fn snapping_lands_on_the_spectrum(a in -0.9f64..0.9, k in 0.5f64..8.0) {
        let (snapped, parity, distance, _) = snap_order(k, a, 0.05);
        if let Some(s) = snapped {
            prop_assert!(distance <= 0.05 && (s - k).abs() == distance);
            match parity {
                Some(Parity::Symmetric) => prop_assert!(s >= 1.0 && s.fract() == 0.0),
                Some(Parity::Antisymmetric) => prop_assert!((s - (1.0 - a)).rem_euclid(1.0) < 1e-12 || (s - (1.0 - a)).rem_euclid(1.0) > 1.0 - 1e-12),
                other => prop_assert!(false, "unexpected parity {other:?}"),
            }
        }
    }

    // the half-Laplacian extension of 1/(1+x^2) is (1+y)/(x^2+(1+y)^2)
    #[test]
    fn poisson_extension_matches_closed_form(x in -2.0f64..2.0, y in 0.01f64..3.0) {
        let v = poisson_extend(&cauchy(), &[x], y, 0.5, &ExtensionOptions::default()).unwrap();
        let exact = (1.0 + y) / (x * x + (1.0 + y) * (1.0 + y));
        prop_assert!((v.value - exact).abs() < 1e-10, "{} vs {exact}", v.value);
    }
}

#[test]
fn half_laplacian_of_cauchy_profile() {
    // (-Δ)^{1/2} 1/(1+x²) = (1 - x²)/(1 + x²)²
    for x in [0.0f64, 0.4, -1.3, 2.5] {
        let exact = (1.0 - x * x) / (1.0 + x * x).powi(2);
        let direct = frac_laplacian_direct(&cauchy(), x, 0.5, 1e-12).unwrap().value;
        let limit = dtn(&cauchy(), &[x], 0.5, &ExtensionOptions::default()).unwrap().value;
        assert!((direct - exact).abs() < 1e-8, "direct {direct} vs {exact}");
        assert!((limit - exact).abs() < 1e-7, "dtn {limit} vs {exact}");
    }
}

#[test]
fn antisymmetric_field_solves_the_equation() {
    // v·y|y|^{-a} with v = x (a planar solution for every weight): check L_a numerically
    let a = 0.3;
    let u = ExactField::antisymmetric(MultiPoly::<Q>::var(2, 0).to_float(2.0 - a), a);
    let (x, y, h) = (0.4, 0.7, 1e-3);
    let w = |y: f64| y.abs().powf(a);
    let f = |x: f64, y: f64| u.value(&[x, y]);
    let lap = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
    let flux = (w(y + h / 2.0) * (f(x, y + h) - f(x, y)) - w(y - h / 2.0) * (f(x, y) - f(x, y - h))) / (h * h);
    assert!((w(y) * lap + flux).abs() < 1e-5, "{}", w(y) * lap + flux);
}
