mod common;

use common::suites::{cayley_pair_suite, contraction, hermitian_pair_suite};
use harnack::cayley::*;
use harnack::linalg::{singular_values, Complex, ComplexMatrix};
use harnack::{Error, IndexSet, Settings};

#[test]
fn transform_of_zero() {
    let s = Settings::default();
    let rep = cayley_bounds(&ComplexMatrix::zeros(3), &IndexSet::leading(2), &s).unwrap();
    assert_eq!((rep.lower, rep.lhs, rep.upper), (1.0, 1.0, 1.0));
    let sigma = singular_values(&cayley(&ComplexMatrix::zeros(3)).unwrap());
    assert!(sigma.iter().all(|x| (x - 1.0).abs() < 1e-15));
}

#[test]
fn two_forms_agree() {
    for t in 0..50 {
        let a = contraction(3, t);
        let d = cayley(&a).unwrap().distance(&cayley_resolvent_form(&a).unwrap());
        assert!(d < 1e-12, "{d}");
    }
}

#[test]
fn scalar_difference() {
    let s = Settings::default();
    let a = ComplexMatrix::diag_real(&[0.5]);
    let b = ComplexMatrix::diag_real(&[-0.5]);
    let d = &cayley(&a).unwrap() - &cayley(&b).unwrap();
    assert!((d[(0, 0)] - Complex::new(0.0, -1.6)).norm() < 1e-15);
    let rep = cayley_difference_bounds(&a, &b, &IndexSet::single(1), &s).unwrap();
    assert!((rep.lhs - 1.6).abs() < 1e-15);
    assert!((rep.upper - 8.0).abs() < 1e-12);
    assert!((rep.lower - 8.0 / 9.0).abs() < 1e-12);
    assert_eq!(rep.lower_bound_form, LowerBoundForm::Corrected);
    assert!(rep.passes());
}

#[test]
fn hermitian_transform_is_unitary() {
    let h = ComplexMatrix::from_real_rows(&[vec![3.0, -1.0], vec![-1.0, 0.5]]).unwrap();
    assert!(unitarity_defect(&cayley(&h).unwrap()) < 1e-14);
    let g = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    assert!(matches!(
        fan_hoffman_check(&h, &g, &Settings::default()),
        Err(Error::NotHermitian { .. })
    ));
}

#[test]
fn gated_and_mismatched_inputs() {
    let s = Settings::default();
    let big = ComplexMatrix::diag_real(&[1.5]);
    assert!(matches!(
        cayley_bounds(&big, &IndexSet::single(1), &s),
        Err(Error::NotContractive { .. })
    ));
    assert!(matches!(
        CayleyDifference::new(&ComplexMatrix::zeros(2), &ComplexMatrix::zeros(3), &s),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn report_json_round_trip() {
    let a = contraction(5, 4);
    let b = contraction(5, 9);
    let rep = cayley_difference_bounds(&a, &b, &IndexSet::leading(2), &Settings::default()).unwrap();
    let back: CayleyReport = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn pair_suite_sample() {
    let out = cayley_pair_suite(150, 13);
    assert!(out.passed(), "{}", out.summary());
}

#[test]
fn hermitian_suite_sample() {
    let out = hermitian_pair_suite(150, 13);
    assert!(out.passed(), "{}", out.summary());
}
