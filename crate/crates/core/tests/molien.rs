use std::time::Instant;

use lu_invariants::error::Error;
use lu_invariants::molien::rational::QUBIT_QUTRIT_POINCARE;
use lu_invariants::molien::{
    adjoint_weight_system, molien_series, molien_series_with, Backend, GroupSpec, MolienOptions, RationalForm,
    WeightSystem,
};
use num_bigint::BigInt;

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[test]
fn trivial_group_is_free_ring() {
    for dim in 1..=5 {
        let s = molien_series(&WeightSystem::trivial(dim), 10).unwrap();
        for (d, c) in s.iter().enumerate() {
            assert_eq!(*c, binomial((dim + d - 1) as u64, d as u64), "dim {dim} d {d}");
        }
    }
}

#[test]
fn two_qubit_matches_rational_form_to_degree_20() {
    let ws = adjoint_weight_system(GroupSpec::Su2xSu2);
    let computed = molien_series(&ws, 20).unwrap();
    assert_eq!(computed, RationalForm::two_qubit().series(20));
}

#[test]
fn qubit_qutrit_matches_displayed_poincare_series() {
    let start = Instant::now();
    let ws = adjoint_weight_system(GroupSpec::Su2xSu3);
    let computed = molien_series(&ws, 16).unwrap();
    let expected: Vec<BigInt> = QUBIT_QUTRIT_POINCARE.iter().map(|&c| BigInt::from(c)).collect();
    assert_eq!(computed, expected);
    assert_eq!(RationalForm::qubit_qutrit().series(16), expected);
    println!("2x3 to degree 16 in {:?}", start.elapsed());
}

#[test]
fn reduced_backend_agrees() {
    for (spec, n) in [(GroupSpec::Su2xSu2, 14), (GroupSpec::Su2xSu3, 9)] {
        let ws = adjoint_weight_system(spec);
        let weyl = molien_series(&ws, n).unwrap();
        let reduced = molien_series_with(&ws, n, MolienOptions { backend: Backend::Reduced, ..Default::default() });
        assert_eq!(weyl, reduced.unwrap(), "{spec}");
    }
}

#[test]
fn truncation_is_stable() {
    let ws = adjoint_weight_system(GroupSpec::Su2xSu3);
    let short = molien_series(&ws, 6).unwrap();
    let long = molien_series(&ws, 9).unwrap();
    assert_eq!(short[..], long[..7]);
}

#[test]
fn cap_is_enforced() {
    let ws = adjoint_weight_system(GroupSpec::Su2xSu2);
    match molien_series(&ws, 21) {
        Err(Error::ResourceCap { requested: 21, cap: 20 }) => {}
        other => panic!("unexpected {other:?}"),
    }
    let raised = molien_series_with(&ws, 22, MolienOptions { cap: 22, ..Default::default() }).unwrap();
    assert_eq!(raised, RationalForm::two_qubit().series(22));
}

#[test]
fn series_are_identical_single_threaded() {
    let ws = adjoint_weight_system(GroupSpec::Su2xSu3);
    let parallel = molien_series(&ws, 8).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| molien_series(&ws, 8).unwrap());
    assert_eq!(parallel, serial);
}
