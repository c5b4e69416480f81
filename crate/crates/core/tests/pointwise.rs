use std::f64::consts::PI;

use logdiss::grid::{make_grid, SpectralField};
use logdiss::pointwise::{
    frac_constant, frac_laplacian_quadrature, lp_dissipation_functional, lp_norm_pow,
    maxpoint_sign_check, mixed_maxpoint_bound, symmetrized_form_oracle, symmetrized_tail_sum,
    MixedOperatorSpec,
};
use logdiss::random::{normalized_field, random_trig_polynomial};
use logdiss::special::gamma_fn;
use logdiss::symbols::symbol_fractional;
use proptest::prelude::*;

#[test]
fn normalization_constants() {
    assert!((frac_constant(1.0, 1).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-14);
    assert!((frac_constant(1.0, 2).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-14);
    for d in [1, 2] {
        let limit = gamma_fn(d as f64 / 2.0).unwrap() / (4.0 * PI.powf(d as f64 / 2.0));
        let s = 1e-6;
        assert!((frac_constant(s, d).unwrap() / s - limit).abs() < 1e-5 * limit);
    }
    assert!(frac_constant(2.0, 1).is_err());
}

#[test]
fn constants_are_invisible() {
    let g = make_grid(1, 64, PI).unwrap();
    let c = SpectralField::from_fn(g, |_| 3.5);
    for s in [0.4, 1.0, 1.7] {
        assert!(frac_laplacian_quadrature(&c, 0.3, s, 0.05).unwrap().abs() < 1e-12);
        assert!(symmetrized_form_oracle(&c, s.min(0.9), 2.0).unwrap().abs() < 1e-12);
    }
}

#[test]
fn vanishing_lower_order_coefficient_reduces_to_sign_check() {
    let g = make_grid(2, 32, PI).unwrap();
    let f = random_trig_polynomial(&g, 4, 11).unwrap();
    let op = MixedOperatorSpec::new(0.5, 1.2, 1e-12).unwrap();
    let r = mixed_maxpoint_bound(&f, &op).unwrap();
    assert!(r.bound_rhs.unwrap().abs() < 1e-10);
    assert!(r.operator_value >= -1e-8 * f.max_abs());
}

#[test]
fn argmax_ties_pick_the_lowest_index() {
    let g = make_grid(1, 16, PI).unwrap();
    let f = SpectralField::from_fn(g, |x| (2.0 * x[0]).cos());
    let r = maxpoint_sign_check(&f, 1.0).unwrap();
    let grid_max = f.physical().iter().cloned().fold(f64::MIN, f64::max);
    let first = f
        .physical()
        .iter()
        .position(|v| (*v - grid_max).abs() < 1e-14)
        .unwrap();
    assert_eq!(r.grid_index, first);
}

#[test]
fn tail_sum_shrinks_like_a_power() {
    let g = make_grid(1, 128, PI).unwrap();
    let f = normalized_field(&g, 8, 1.0, 3).unwrap();
    let a = 2.0 * PI;
    for s in [1.1, 1.6] {
        let near = symmetrized_tail_sum(&f, s, 2.0, a).unwrap();
        let far = symmetrized_tail_sum(&f, s, 2.0, 2.0 * a).unwrap();
        assert!(far <= 1.1 * 2f64.powf(1.0 - s) * near);
    }
}

fn field_1d() -> impl Strategy<Value = (usize, u64)> {
    (1usize..10, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sign_at_maximum(dim in 1usize..3, degree in 1usize..7, seed in any::<u64>(), s in 0.05f64..1.95) {
        let g = make_grid(dim, if dim == 1 { 64 } else { 32 }, PI).unwrap();
        let f = random_trig_polynomial(&g, degree, seed).unwrap();
        let r = maxpoint_sign_check(&f, s).unwrap();
        prop_assert!(r.operator_value >= -1e-6 * f.max_abs());
    }

    #[test]
    fn maxpoint_commutes_with_scaling((degree, seed) in field_1d(), c in 0.01f64..100.0, s in 0.1f64..1.9) {
        let g = make_grid(1, 64, PI).unwrap();
        let f = random_trig_polynomial(&g, degree, seed).unwrap();
        let a = maxpoint_sign_check(&f, s).unwrap();
        let b = maxpoint_sign_check(&f.scaled(c), s).unwrap();
        prop_assert_eq!(a.grid_index, b.grid_index);
        prop_assert!((b.operator_value - c * a.operator_value).abs() <= 1e-9 * c * f.max_abs());
        let op = MixedOperatorSpec::new(0.4, 1.4, 0.7).unwrap();
        let a = mixed_maxpoint_bound(&f, &op).unwrap();
        let b = mixed_maxpoint_bound(&f.scaled(c), &op).unwrap();
        prop_assert!((b.bound_rhs.unwrap() - c * a.bound_rhs.unwrap()).abs() <= 1e-9 * c * f.max_abs());
    }

    #[test]
    fn fractional_functional_is_nonnegative(
        (degree, seed) in field_1d(),
        s in 0.1f64..1.9,
        p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 7.0]),
    ) {
        let g = make_grid(1, 64, PI).unwrap();
        let f = random_trig_polynomial(&g, degree, seed).unwrap();
        let v = lp_dissipation_functional(&f, &symbol_fractional(s).unwrap(), p).unwrap();
        prop_assert!(v >= -1e-8 * lp_norm_pow(&f, p));
    }

    #[test]
    fn oracle_is_nonnegative((degree, seed) in field_1d(), s in 0.05f64..0.95, p in 1.0f64..4.0) {
        let g = make_grid(1, 32, PI).unwrap();
        let f = random_trig_polynomial(&g, degree.min(7), seed).unwrap();
        prop_assert!(symmetrized_form_oracle(&f, s, p).unwrap() >= 0.0);
    }
}
