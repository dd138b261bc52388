#![allow(clippy::excessive_precision)]

mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::*;
use nhqc_core::linalg::{
    expm_hermitian_generator, frobenius_distance, pauli, time_ordered_product, Drive, MAX_DIM,
};
use nhqc_core::qutrit::{elementary_gate_with_error, BrightDarkFrame, ErrorModel, PulsePair};
use nhqc_core::{ComplexMatrix, ComplexVector, Error, C64};
use proptest::prelude::*;

fn bright_excited_generator() -> Mat {
    // |b⟩⟨e| + |e⟩⟨b| with b = cos(θ/2)|0⟩ + sin(θ/2)e^{iφ}|1⟩, θ = 1.1, φ = 0.4
    field_h(1.1, 0.4, 0.0, 0.0, 0.0)
}

#[test]
fn zero_generator_gives_identity() {
    let u = expm_hermitian_generator(&ComplexMatrix::zeros(3, 3), 1.0).unwrap();
    assert_eq!(u, ComplexMatrix::identity(3));
}

#[test]
fn pauli_x_at_pi() {
    let u = expm_hermitian_generator(&pauli::x(), PI).unwrap();
    let minus = ComplexMatrix::identity(2).scale(C64::new(-1.0, 0.0));
    assert!(frobenius_distance(&u, &minus).unwrap() < 1e-14);
}

#[test]
fn bright_excited_segment_matches_rk4() {
    let g = bright_excited_generator();
    let u = expm_hermitian_generator(&to_core(&g), FRAC_PI_2).unwrap();
    let oracle = rk4_schedule(&[(g, FRAC_PI_2)], RK4_STEPS);
    assert!(dist(&u, &oracle) < 1e-11, "{}", dist(&u, &oracle));
    assert!(u.is_unitary(1e-10));
}

#[test]
fn expm_rejects_bad_generators() {
    let nonsquare = ComplexMatrix::zeros(2, 3);
    assert!(matches!(expm_hermitian_generator(&nonsquare, 1.0), Err(Error::InvalidArgument(_))));
    let mut skew = ComplexMatrix::zeros(2, 2);
    skew.set(0, 1, C64::new(1.0, 0.0));
    assert!(matches!(expm_hermitian_generator(&skew, 1.0), Err(Error::InvalidArgument(_))));
    let huge = ComplexMatrix::zeros(MAX_DIM + 1, MAX_DIM + 1);
    assert!(expm_hermitian_generator(&huge, 1.0).is_err());
}

#[test]
fn time_ordered_product_examples() {
    assert_eq!(time_ordered_product(&[]).unwrap(), ComplexMatrix::identity(1));
    let g = to_core(&bright_excited_generator());
    let single = time_ordered_product(&[Drive::new(g.clone(), 0.8)]).unwrap();
    assert_eq!(single, expm_hermitian_generator(&g, 0.8).unwrap());
    let bad = [Drive::new(g, 0.1), Drive::new(ComplexMatrix::zeros(2, 2), 0.1)];
    assert!(matches!(time_ordered_product(&bad), Err(Error::InvalidArgument(_))));
}

#[test]
fn time_ordered_product_puts_later_segments_left() {
    let (a, b) = (field_h(0.7, 0.2, FRAC_PI_2, 0.0, 0.0), field_h(0.7, 0.2, 0.0, 0.0, 0.0));
    let u = time_ordered_product(&[Drive::new(to_core(&a), 0.9), Drive::new(to_core(&b), 0.4)]).unwrap();
    let oracle = rk4_schedule(&[(a, 0.9), (b, 0.4)], RK4_STEPS);
    assert!(dist(&u, &oracle) < 1e-11);
}

#[test]
fn frobenius_distance_examples() {
    let i2 = ComplexMatrix::identity(2);
    assert_eq!(frobenius_distance(&i2, &i2).unwrap(), 0.0);
    let d = frobenius_distance(&i2, &i2.scale(C64::new(-1.0, 0.0))).unwrap();
    assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    assert!(frobenius_distance(&i2, &ComplexMatrix::identity(3)).is_err());
}

#[test]
fn distance_to_common_mode_error_gate() {
    let f = BrightDarkFrame::new(PI / 4.0, 0.0);
    let m = ErrorModel::new(0.01, 0.01).unwrap();
    let ideal = nhqc_core::qutrit::elementary_gate(&f);
    let actual = elementary_gate_with_error(&f, &m, &PulsePair::default()).unwrap();
    let d = frobenius_distance(&ideal, &actual).unwrap();
    // frozen from a 40-digit exponential oracle
    assert!((d - 0.031414634623641352).abs() < 1e-12, "{d}");
    let oracle = dist(&ideal, &oracle_elementary(PI / 4.0, 0.0, 0.01, 0.01));
    assert!((d - oracle).abs() < 1e-10);
}

#[test]
fn vector_basics() {
    assert!(ComplexVector::new(vec![]).is_err());
    let v = ComplexVector::new(vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)]).unwrap();
    assert_eq!(v.norm(), 5.0);
    assert!(!v.is_normalized(1e-12));
    assert!(v.normalized().is_normalized(1e-12));
}

fn hermitian(dim: usize, entries: &[(f64, f64)]) -> Mat {
    let mut h = zeros(dim);
    let mut it = entries.iter();
    for r in 0..dim {
        for k in r..dim {
            let &(re, im) = it.next().unwrap();
            if r == k {
                h[r][k] = c(re, 0.0);
            } else {
                h[r][k] = c(re, im);
                h[k][r] = c(re, -im);
            }
        }
    }
    h
}

fn hermitian_strategy(max_dim: usize) -> impl Strategy<Value = Mat> {
    (1..=max_dim).prop_flat_map(|dim| {
        let n = dim * (dim + 1) / 2;
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_map(move |e| {
            let h = hermitian(dim, &e);
            // keep ‖H‖_F ≤ 2 so the fixed-step oracle stays well resolved
            let norm: f64 = h.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let s = if norm > 2.0 { 2.0 / norm } else { 1.0 };
            h.into_iter().map(|r| r.into_iter().map(|z| z * s).collect()).collect()
        })
    })
}

fn hermitian_of_dim(dim: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * (dim + 1) / 2)
        .prop_map(move |e| hermitian(dim, &e))
}

fn fixed_dim_drives(max_dim: usize) -> impl Strategy<Value = Vec<(Mat, f64)>> {
    (1..=max_dim).prop_flat_map(|dim| prop::collection::vec((hermitian_of_dim(dim), 0.0..4.0f64), 1..6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_is_additive(h in hermitian_strategy(9), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let h = to_core(&h);
        let ua = expm_hermitian_generator(&h, a).unwrap();
        let ub = expm_hermitian_generator(&h, b).unwrap();
        let uab = expm_hermitian_generator(&h, a + b).unwrap();
        prop_assert!(frobenius_distance(&(&ua * &ub), &uab).unwrap() < 1e-10);
    }

    #[test]
    fn products_are_unitary(drives in fixed_dim_drives(9)) {
        let drives: Vec<Drive> = drives.into_iter().map(|(h, a)| Drive::new(to_core(&h), a)).collect();
        prop_assert!(time_ordered_product(&drives).unwrap().is_unitary(1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exponential_matches_rk4(h in hermitian_strategy(9), area in 0.0..(4.0 * PI)) {
        let u = expm_hermitian_generator(&to_core(&h), area).unwrap();
        let oracle = rk4_schedule(&[(h.clone(), area)], 20_000);
        prop_assert!(dist(&u, &oracle) < 1e-8, "{}", dist(&u, &oracle));
        let taylor = taylor_expm(&h, area);
        prop_assert!(dist(&u, &taylor) < 1e-10);
    }
}
