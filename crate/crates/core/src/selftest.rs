//! The self-test battery: every numerical check of the library, run with
//! fixed seeds and summarized as one pass/fail table.

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::casimir::{self, EXPRESSION_AFFINE};
use crate::error::Result;
use crate::invariants::checks::{self, Conjugation, InvariantSelector};
use crate::invariants::rank::listed_invariants;
use crate::invariants::{Panel, TraceWord};
use crate::molien::rational::QUBIT_QUTRIT_POINCARE;
use crate::molien::{adjoint_weight_system, molien_series, GroupSpec, RationalForm};
use crate::states;
use crate::su_algebra::{
    build_basis, closure_violation, structure_constants, verify_structure_identities_with,
    verify_symmetrized_traces, BasisLabel, IndexSampling, IDENTITY_TOLERANCE,
};

pub const DEFAULT_SEED: u64 = crate::invariants::eval::DEFAULT_PANEL_SEED;
pub const DEFAULT_PANEL_SIZE: usize = crate::invariants::eval::DEFAULT_PANEL_SIZE;

const SU6_IDENTITY_SAMPLES: usize = 10_000;
const SU6_TRACE_SAMPLES: usize = 500;
const INVARIANCE_TRIALS: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct SelftestItem {
    pub module: &'static str,
    pub name: String,
    /// Max violation, or a mismatch count for exact checks.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub panel_size: usize,
    pub checks: Vec<SelftestItem>,
    pub passed: bool,
}

struct Collector {
    items: Vec<SelftestItem>,
}

impl Collector {
    fn tol(&mut self, module: &'static str, name: impl Into<String>, value: f64, tolerance: f64) {
        self.items.push(SelftestItem { module, name: name.into(), value, tolerance, passed: value < tolerance });
    }

    // Exact checks: `mismatches` must be zero.
    fn exact(&mut self, module: &'static str, name: impl Into<String>, mismatches: usize) {
        self.tol(module, name, mismatches as f64, 0.5);
    }

    fn flag(&mut self, module: &'static str, name: impl Into<String>, ok: bool) {
        self.exact(module, name, usize::from(!ok));
    }
}

fn mismatches(a: &[BigInt], b: &[BigInt]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len())
}

fn su_algebra_checks(out: &mut Collector, seed: u64) -> Result<()> {
    const M: &str = "su_algebra";
    for label in [BasisLabel::Su2Pauli, BasisLabel::Su3GellMann, BasisLabel::Su6Tensor] {
        let basis = build_basis(label);
        let sc = structure_constants(&basis)?;
        let sampling = match label {
            BasisLabel::Su6Tensor => IndexSampling::Sampled { seed, count: SU6_IDENTITY_SAMPLES },
            _ => IndexSampling::Exhaustive,
        };
        out.tol(M, format!("{label}/orthonormality"), basis.orthonormality_deviation(), IDENTITY_TOLERANCE);
        out.tol(M, format!("{label}/closure"), closure_violation(&basis, &sc, None), IDENTITY_TOLERANCE);
        for c in verify_structure_identities_with(&sc, sampling).checks {
            out.tol(M, format!("{label}/{}", c.name), c.max_violation, IDENTITY_TOLERANCE);
        }
        let trace_sampling = match label {
            BasisLabel::Su6Tensor => IndexSampling::Sampled { seed, count: SU6_TRACE_SAMPLES },
            _ => IndexSampling::Exhaustive,
        };
        for c in verify_symmetrized_traces(&basis, &sc, trace_sampling) {
            out.tol(M, format!("{label}/{}", c.name), c.max_violation, IDENTITY_TOLERANCE);
        }
    }
    Ok(())
}

fn casimir_checks(out: &mut Collector, seed: u64, panel: &Panel) -> Result<()> {
    const M: &str = "casimir_positivity";
    let sc6 = structure_constants(&build_basis(BasisLabel::Su6Tensor))?;
    let mut worst = [0.0f64; 5];
    for s in &panel.states {
        let cmp = casimir::compare_routes(s, &sc6)?;
        for (w, d) in worst.iter_mut().zip(cmp.discrepancy) {
            *w = w.max(d);
        }
    }
    for (k, w) in (2..=6).zip(worst) {
        out.tol(M, format!("vee_vs_trace_c{k}"), w, 1e-9);
    }

    let mut rng = states::rng_from_seed(seed ^ 0x0de7);
    let mut newton = 0.0f64;
    for _ in 0..100 {
        let mut t = [1.0; 6];
        for x in t.iter_mut().skip(1) {
            *x = rng.random_range(-1.0..1.0);
        }
        for (a, b) in casimir::char_poly_coeffs(&t).iter().zip(casimir::char_poly_coeffs_det(&t)) {
            newton = newton.max((a - b).abs());
        }
    }
    out.tol(M, "newton_vs_determinant", newton, 1e-12);

    let mut oracle_mismatch = 0;
    let mut inconsistent = 0;
    let mut affine = 0.0f64;
    let mut nonpsd_rng = states::rng_from_seed(seed ^ 0x0b5d);
    for i in 0..panel.len() {
        let psd = panel.states[i].to_matrix();
        let nonpsd = states::random_nonpsd_matrix(-0.1, &mut nonpsd_rng)?;
        for rho in [psd, nonpsd] {
            let r = casimir::positivity_report_matrix(&rho, true)?;
            oracle_mismatch += usize::from(r.agrees_with_oracle() != Some(true));
            inconsistent += usize::from(!r.consistent);
            for (k, (slope, intercept)) in EXPRESSION_AFFINE.iter().enumerate() {
                affine = affine.max((r.casimir_exprs[k] - (slope * r.s_bar[k] + intercept)).abs());
            }
        }
    }
    out.exact(M, "s_verdict_vs_eigenvalue_oracle", oracle_mismatch);
    out.exact(M, "casimir_verdict_vs_s_verdict", inconsistent);
    out.tol(M, "expression_affine_relation", affine, 1e-8);
    Ok(())
}

fn invariant_checks(out: &mut Collector, seed: u64, panel: &Panel) -> Result<()> {
    const M: &str = "local_invariants";
    let sc3 = structure_constants(&build_basis(BasisLabel::Su3GellMann))?;
    let expected: Vec<TraceWord> = {
        let mut v: Vec<TraceWord> =
            ["aaab", "abbb", "aaac", "bbbc", "aabc"].iter().map(|w| w.parse().expect("static word")).collect();
        v.sort();
        v
    };
    let kernel = checks::kernel_at_degree(4, panel)?;
    out.flag(M, "kernel_degree_4", kernel.words == expected);

    let mut push = |c: checks::CheckReport| out.tol(M, c.name, c.max_violation, c.tolerance);
    push(checks::sign_relation_check(panel));
    push(checks::gamma3_formula_check(panel, &sc3));
    push(checks::i004_identity_check(panel, &sc3));
    checks::multidegree_relations_check(panel, &sc3).checks.into_iter().for_each(&mut push);
    checks::casimir_decomposition_check(panel).checks.into_iter().for_each(&mut push);

    let words: Vec<InvariantSelector> = listed_invariants().into_iter().map(InvariantSelector::Word).collect();
    let local = checks::invariance_deviations(&words, Conjugation::Local, INVARIANCE_TRIALS, seed)?;
    out.tol(M, "local_invariance", local.into_iter().fold(0.0, f64::max), 1e-9);
    let casimirs: Vec<InvariantSelector> = (2..=6).map(InvariantSelector::Casimir).collect();
    let global = checks::invariance_deviations(&casimirs, Conjugation::Global, INVARIANCE_TRIALS, seed)?;
    out.tol(M, "casimir_global_invariance", global.into_iter().fold(0.0, f64::max), 1e-9);
    let control = checks::invariance_test(&words[0], Conjugation::Global, INVARIANCE_TRIALS, seed)?;
    out.flag(M, "global_negative_control", control > 1e-6);
    Ok(())
}

fn molien_checks(out: &mut Collector) -> Result<()> {
    const M: &str = "molien";
    let two = molien_series(&adjoint_weight_system(GroupSpec::Su2xSu2), 20)?;
    out.exact(M, "2x2_vs_rational_form", mismatches(&two, &RationalForm::two_qubit().series(20)));
    let three = molien_series(&adjoint_weight_system(GroupSpec::Su2xSu3), 16)?;
    let poincare: Vec<BigInt> = QUBIT_QUTRIT_POINCARE.iter().map(|&c| BigInt::from(c)).collect();
    out.exact(M, "2x3_vs_poincare_series", mismatches(&three, &poincare));
    out.exact(M, "2x3_vs_rational_form", mismatches(&three, &RationalForm::qubit_qutrit().series(16)));
    out.flag(M, "palindromy_2x2", RationalForm::two_qubit().is_palindromic(-1, 15));
    out.flag(M, "palindromy_2x3", RationalForm::qubit_qutrit().is_palindromic(1, 35));
    Ok(())
}

/// Runs the whole battery. `seed` drives every random panel and sample.
pub fn run_selftest(seed: u64, panel_size: usize) -> Result<SelftestReport> {
    let panel = Panel::new(seed, panel_size)?;
    let mut out = Collector { items: Vec::new() };
    su_algebra_checks(&mut out, seed)?;
    casimir_checks(&mut out, seed, &panel)?;
    invariant_checks(&mut out, seed, &panel)?;
    molien_checks(&mut out)?;
    let passed = out.items.iter().all(|c| c.passed);
    Ok(SelftestReport { seed, panel_size, checks: out.items, passed })
}
