mod common;

use common::*;
use naxray_core::matrix::ordered_product;
use naxray_core::{Complex64, Error, Mat};
use proptest::prelude::*;

fn mat_strategy(n: usize, scale: f64) -> impl Strategy<Value = Mat> {
    prop::collection::vec((-scale..scale, -scale..scale), n * n)
        .prop_map(move |v| Mat::new(n, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

/// Taylor series summed term by term, no scaling.
fn naive_exp(a: &Mat) -> Mat {
    let mut sum = Mat::identity(a.n());
    let mut term = Mat::identity(a.n());
    for k in 1..60 {
        term = (&term * a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

proptest! {
    #[test]
    fn exp_matches_plain_series(a in (1usize..4).prop_flat_map(|n| mat_strategy(n, 0.7))) {
        prop_assert!(a.exp().dist(&naive_exp(&a)) < 1e-12);
    }

    #[test]
    fn log_inverts_exp(a in (1usize..4).prop_flat_map(|n| mat_strategy(n, 0.25))) {
        let e = a.exp();
        prop_assume!(e.dist(&Mat::identity(a.n())) < 0.9);
        prop_assert!(e.log().unwrap().dist(&a) < 1e-12);
    }

    #[test]
    fn inverse_is_two_sided(a in (1usize..5).prop_flat_map(|n| mat_strategy(n, 1.0))) {
        prop_assume!(a.det().norm() > 1e-3);
        let inv = a.inv().unwrap();
        let id = Mat::identity(a.n());
        let scale = a.frobenius_norm() * inv.frobenius_norm();
        prop_assert!((&a * &inv).dist(&id) < 1e-12 * scale);
        prop_assert!((&inv * &a).dist(&id) < 1e-12 * scale);
    }

    #[test]
    fn det_is_multiplicative(
        (a, b) in (1usize..4).prop_flat_map(|n| (mat_strategy(n, 1.0), mat_strategy(n, 1.0)))
    ) {
        let lhs = (&a * &b).det();
        let rhs = a.det() * b.det();
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn exp_of_negation_is_inverse(a in (1usize..4).prop_flat_map(|n| mat_strategy(n, 1.0))) {
        let id = Mat::identity(a.n());
        prop_assert!((&a.exp() * &a.scale_real(-1.0).exp()).dist(&id) < 1e-12);
    }
}

#[test]
fn thousand_seeded_round_trips() {
    use rand::Rng;
    let mut g = rng(7);
    for _ in 0..1000 {
        let n = g.gen_range(1..=4usize);
        let a = random_mat(&mut g, n);
        let a = a.scale_real(g.gen_range(0.0..0.69) / a.frobenius_norm());
        assert!(a.exp().log().unwrap().dist(&a) < 1e-12);
        let m = random_gl(&mut g, n);
        let inv = m.inv().unwrap();
        assert!((&m * &inv).dist(&Mat::identity(n)) < 1e-12);
        assert!((&inv * &m).dist(&Mat::identity(n)) < 1e-12);
    }
}

#[test]
fn scalar_case_matches_complex_functions() {
    let mut g = rng(8);
    for _ in 0..200 {
        let z = complex(&mut g);
        assert!((Mat::scalar(z).exp().get(0, 0) - z.exp()).norm() < 1e-14);
        let w = Complex64::new(1.0, 0.0) + complex(&mut g).scale(0.6);
        assert!((Mat::scalar(w).log().unwrap().get(0, 0) - w.ln()).norm() < 1e-14);
    }
}

#[test]
fn frobenius_norm_is_submultiplicative() {
    let mut g = rng(9);
    for n in 1..=4 {
        for _ in 0..100 {
            let (a, b) = (random_mat(&mut g, n), random_mat(&mut g, n));
            assert!((&a * &b).frobenius_norm() <= a.frobenius_norm() * b.frobenius_norm() * (1.0 + 1e-15));
        }
    }
}

#[test]
fn log_outside_series_disk_is_domain_error() {
    let a = Mat::scalar(Complex64::new(-1.0, 0.0));
    assert!(matches!(a.log(), Err(Error::Domain(_))));
}

#[test]
fn singular_inverse_is_reported() {
    let a = Mat::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
    assert!(matches!(a.inv(), Err(Error::Singular(_))));
}

#[test]
fn ordered_product_puts_later_factors_left() {
    let a = Mat::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    let b = Mat::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]);
    assert_eq!(ordered_product(2, [&a, &b]), &b * &a);
    assert_eq!(ordered_product(2, std::iter::empty::<&Mat>()), Mat::identity(2));
}
