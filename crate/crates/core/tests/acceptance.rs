//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL` line.

use std::process::Command;
use std::sync::OnceLock;

use num_bigint::BigInt;

use lu_invariants::casimir::{self, EXPRESSION_AFFINE};
use lu_invariants::invariants::checks::{self, Conjugation, InvariantSelector, ALPHA2_BETA2_PRODUCT};
use lu_invariants::invariants::rank::{
    features_up_to, jacobian_evidence, listed_invariants, Feature, DEFAULT_JACOBIAN_SEED, DEFAULT_RANK_SEED,
};
use lu_invariants::invariants::{enumerate_words, kernel_at_degree, rank_at_degree, Panel, TraceWord};
use lu_invariants::molien::rational::{palindromic_completion, palindromy_check, rational_series};
use lu_invariants::molien::rational::{
    QUBIT_QUTRIT_DENOMINATOR, QUBIT_QUTRIT_NUMERATOR_HALF, TWO_QUBIT_DENOMINATOR, TWO_QUBIT_NUMERATOR,
};
use lu_invariants::molien::{adjoint_weight_system, molien_series, GroupSpec};
use lu_invariants::states::{self, Ensemble};
use lu_invariants::su_algebra::{
    build_basis, closure_violation, structure_constants, verify_structure_identities_with,
    verify_symmetrized_traces, BasisLabel, IndexSampling,
};

const POINCARE_2X3: [u64; 17] =
    [1, 0, 3, 4, 15, 25, 90, 170, 489, 1059, 2600, 5641, 12872, 27099, 57990, 118254, 240187];

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn panel() -> &'static Panel {
    static P: OnceLock<Panel> = OnceLock::new();
    P.get_or_init(Panel::default_panel)
}

fn qubit_qutrit_series() -> &'static Vec<BigInt> {
    static S: OnceLock<Vec<BigInt>> = OnceLock::new();
    S.get_or_init(|| molien_series(&adjoint_weight_system(GroupSpec::Su2xSu3), 16).unwrap())
}

#[test]
fn criterion_01_poincare_series() {
    let start = std::time::Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_luinv"))
        .args(["molien", "--group", "2x3", "--degree", "16"])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let text = String::from_utf8(out.stdout).unwrap();
    let got: Vec<u64> = text.lines().map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap()).collect();
    let indices_ok = text.lines().enumerate().all(|(d, l)| l.split_whitespace().next() == Some(&d.to_string()));
    let ok = out.status.success() && indices_ok && got == POINCARE_2X3 && elapsed.as_secs() < 300;
    report(1, ok, format!("coefficients {got:?}, {:.2}s", elapsed.as_secs_f64()));
}

#[test]
fn criterion_02_two_qubit_rational_form() {
    let series = molien_series(&adjoint_weight_system(GroupSpec::Su2xSu2), 20).unwrap();
    let rational = rational_series(&big(&TWO_QUBIT_NUMERATOR), &TWO_QUBIT_DENOMINATOR, 20);
    let mismatches = series.iter().zip(&rational).filter(|(a, b)| a != b).count();
    report(2, series == rational, format!("{mismatches} mismatching coefficients through degree 20"));
}

#[test]
fn criterion_03_rational_form_consistency() {
    let numerator = palindromic_completion(&big(&QUBIT_QUTRIT_NUMERATOR_HALF));
    let rational = rational_series(&numerator, &QUBIT_QUTRIT_DENOMINATOR, 16);
    let agree = &rational == qubit_qutrit_series();
    let pal_two = palindromy_check(&big(&TWO_QUBIT_NUMERATOR), &TWO_QUBIT_DENOMINATOR, -1, 15);
    let pal_three = palindromy_check(&numerator, &QUBIT_QUTRIT_DENOMINATOR, 1, 35);
    // wrong signs must be rejected
    let controls = !palindromy_check(&big(&TWO_QUBIT_NUMERATOR), &TWO_QUBIT_DENOMINATOR, 1, 15)
        && !palindromy_check(&numerator, &QUBIT_QUTRIT_DENOMINATOR, -1, 35);
    report(
        3,
        agree && pal_two && pal_three && controls,
        format!("series agree={agree} palindromic(2x2,-,15)={pal_two} palindromic(2x3,+,35)={pal_three} controls={controls}"),
    );
}

#[test]
fn criterion_04_structure_identities() {
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    for (label, samples) in [(BasisLabel::Su2Pauli, 0), (BasisLabel::Su3GellMann, 0), (BasisLabel::Su6Tensor, 10_000)] {
        let basis = build_basis(label);
        let sc = structure_constants(&basis).unwrap();
        let sampling = if samples == 0 {
            IndexSampling::Exhaustive
        } else {
            IndexSampling::Sampled { seed: 0x5eed_0001, count: samples }
        };
        let closure_sample = (samples > 0).then_some((0x5eed_0002, samples));
        let closure = closure_violation(&basis, &sc, closure_sample);
        let mut checks = verify_structure_identities_with(&sc, sampling).checks;
        checks.extend(verify_symmetrized_traces(&basis, &sc, sampling));
        worst = worst.max(closure);
        if closure >= 1e-9 {
            failed.push(format!("{label}/closure"));
        }
        for c in checks {
            worst = worst.max(c.max_violation);
            if !(c.passed && c.max_violation < 1e-9) {
                failed.push(format!("{label}/{}", c.name));
            }
        }
    }
    report(4, failed.is_empty(), format!("max violation {worst:.3e}, failing {failed:?}"));
}

#[test]
fn criterion_05_positivity_oracle_equivalence() {
    let mut rng = states::rng_from_seed(0x5eed_0005);
    let (mut oracle_mismatch, mut inconsistent, mut affine, mut psd, mut nonpsd) = (0, 0, 0.0f64, 0, 0);
    let mut matrices: Vec<_> =
        (0..1000).map(|_| states::random_density_matrix(Ensemble::GinibreFullRank, &mut rng).unwrap()).collect();
    matrices.extend((0..1000).map(|_| states::random_nonpsd_matrix(-1e-3, &mut rng).unwrap()));
    for rho in &matrices {
        let r = casimir::positivity_report_matrix(rho, true).unwrap();
        oracle_mismatch += usize::from(r.agrees_with_oracle() != Some(true));
        inconsistent += usize::from(!r.consistent);
        if r.psd_by_s() {
            psd += 1;
        } else {
            nonpsd += 1;
        }
        for (k, (slope, intercept)) in EXPRESSION_AFFINE.iter().enumerate() {
            affine = affine.max((r.casimir_exprs[k] - (slope * r.s_bar[k] + intercept)).abs());
        }
    }
    let ok = oracle_mismatch == 0 && inconsistent == 0 && psd == 1000 && nonpsd == 1000 && affine < 1e-8;
    report(
        5,
        ok,
        format!("oracle mismatches {oracle_mismatch}, casimir/S disagreements {inconsistent}, psd {psd}, non-psd {nonpsd}, affine residual {affine:.2e}"),
    );
}

#[test]
fn criterion_06_casimir_dual_route() {
    let sc = structure_constants(&build_basis(BasisLabel::Su6Tensor)).unwrap();
    let mut worst = [0.0f64; 5];
    for s in &panel().states {
        let cmp = casimir::compare_routes(s, &sc).unwrap();
        for (w, d) in worst.iter_mut().zip(cmp.discrepancy) {
            *w = w.max(d);
        }
    }
    // c6 enters only as a reported discrepancy; c2..c5 must agree
    let ok = worst[..4].iter().all(|&w| w < 1e-9);
    report(
        6,
        ok,
        format!(
            "200 states: max |vee - trace| c2 {:.2e} c3 {:.2e} c4 {:.2e} c5 {:.2e}; c6 discrepancy {:.2e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    );
}

#[test]
fn criterion_07_trace_invariant_battery() {
    let panel = panel();
    let sc3 = structure_constants(&build_basis(BasisLabel::Su3GellMann)).unwrap();
    let words4 = enumerate_words(4).unwrap().len();
    let mut expected: Vec<TraceWord> =
        ["aaab", "abbb", "aaac", "bbbc", "aabc"].iter().map(|w| w.parse().unwrap()).collect();
    expected.sort();
    let kernel_ok = kernel_at_degree(4, panel).unwrap().words == expected;

    let mut relations = vec![
        checks::sign_relation_check(panel),
        checks::gamma3_formula_check(panel, &sc3),
        checks::i004_identity_check(panel, &sc3),
    ];
    let multi = checks::multidegree_relations_check(panel, &sc3);
    assert!(multi.check(ALPHA2_BETA2_PRODUCT).is_some());
    relations.extend(multi.checks);
    let worst = relations.iter().map(|c| c.max_violation).fold(0.0, f64::max);
    let relations_ok = relations.iter().all(|c| c.passed && c.max_violation < 1e-9 && c.panel_size == 200);

    let ranks: Vec<usize> =
        (2..=4).map(|d| rank_at_degree(d, true, panel, DEFAULT_RANK_SEED).unwrap().rank).collect();
    let ok = words4 == 18 && kernel_ok && relations_ok && ranks == [3, 4, 15];
    report(
        7,
        ok,
        format!("degree-4 words {words4}, kernel ok {kernel_ok}, relations max {worst:.2e}, ranks (d=2,3,4) {ranks:?} vs [3, 4, 15]"),
    );
}

#[test]
fn criterion_08_casimir_decomposition() {
    let r = checks::casimir_decomposition_check(panel());
    let worst = r.checks.iter().map(|c| c.max_violation).fold(0.0, f64::max);
    let ok = r.passed && r.checks.len() == 3 && worst < 1e-8;
    report(8, ok, format!("max residual {worst:.2e} over {} states", panel().len()));
}

#[test]
fn criterion_09_invariance_properties() {
    // every word the CLI can emit, i.e. canonical words of length 1..=8
    let words: Vec<InvariantSelector> =
        (1..=8).flat_map(|d| enumerate_words(d).unwrap()).map(InvariantSelector::Word).collect();
    let local = checks::invariance_deviations(&words, Conjugation::Local, 100, 0x5eed_0009).unwrap();
    let local_worst = local.iter().copied().fold(0.0, f64::max);
    let casimirs: Vec<InvariantSelector> = (2..=6).map(InvariantSelector::Casimir).collect();
    let global = checks::invariance_deviations(&casimirs, Conjugation::Global, 100, 0x5eed_0019).unwrap();
    let global_worst = global.iter().copied().fold(0.0, f64::max);
    let control = checks::invariance_deviations(&words, Conjugation::Global, 100, 0x5eed_0029).unwrap();
    let control_max = control.iter().copied().fold(0.0, f64::max);
    let ok = local_worst < 1e-9 && global_worst < 1e-9 && control_max > 1e-6;
    report(
        9,
        ok,
        format!(
            "{} words: local max {local_worst:.2e}; casimirs global max {global_worst:.2e}; negative control {control_max:.2e}",
            words.len()
        ),
    );
}

#[test]
fn criterion_10_independence_evidence() {
    let listed: Vec<Feature> = listed_invariants().into_iter().map(Feature::real).collect();
    let evidence = jacobian_evidence(&listed, 3, DEFAULT_JACOBIAN_SEED);
    let listed_ok = evidence.ranks == [15, 15, 15];
    let mut caps = Vec::new();
    for cap in 1..=8 {
        let features = features_up_to(cap, panel()).unwrap();
        caps.push(jacobian_evidence(&features, 3, DEFAULT_JACOBIAN_SEED).max_rank);
    }
    let bounded = caps.iter().all(|&r| r <= 24);
    report(
        10,
        listed_ok && bounded,
        format!("listed ranks {:?}; max rank for degree caps 1..=8: {caps:?} (bound 24)", evidence.ranks),
    );
}
