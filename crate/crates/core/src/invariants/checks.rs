use serde::Serialize;

use super::eval::{LocalOperators, Panel};
use super::words::{enumerate_words, TraceWord};
use crate::casimir::casimirs_from_traces;
use crate::error::{Error, Result};
use crate::states::{self, QubitQutritState};
use crate::su_algebra::StructureConstants;

/// Threshold below which a trace counts as vanishing on the panel.
pub const KERNEL_TOLERANCE: f64 = 1e-9;
pub const RELATION_TOLERANCE: f64 = 1e-9;
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-8;

pub const SIGN_RELATION: &str = "sign_relation";
pub const GAMMA3_FORMULA: &str = "gamma3_formula";
pub const I004_IDENTITY: &str = "i004_identity";
pub const ALPHA2_BETA2_PRODUCT: &str = "alpha2_beta2_product";
pub const ALPHA2_GAMMA2_PRODUCT: &str = "alpha2_gamma2_product";
pub const MULTIDEGREE_202: &str = "multidegree_202";
pub const MULTIDEGREE_022_PRODUCT: &str = "multidegree_022_product";
pub const MULTIDEGREE_022_SUM: &str = "multidegree_022_sum";
pub const CASIMIR_2: &str = "casimir_decomposition_2";
pub const CASIMIR_3: &str = "casimir_decomposition_3";
pub const CASIMIR_4: &str = "casimir_decomposition_4";

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub panel_seed: u64,
    pub panel_size: usize,
}

impl CheckReport {
    fn new(name: &str, max_violation: f64, tolerance: f64, panel: &Panel) -> Self {
        Self {
            name: name.to_string(),
            max_violation,
            tolerance,
            // NaN never passes
            passed: max_violation < tolerance,
            panel_seed: panel.seed,
            panel_size: panel.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub degree: usize,
    pub panel_seed: u64,
    pub panel_size: usize,
    pub words: Vec<TraceWord>,
}

/// Canonical words of degree `d` whose complex trace vanishes on the whole panel.
pub(crate) fn kernel_words(d: usize, panel: &Panel) -> Result<Vec<TraceWord>> {
    Ok(enumerate_words(d)?
        .into_iter()
        .filter(|w| panel.max_over(|_, o| o.trace(w).norm()) < KERNEL_TOLERANCE)
        .collect())
}

pub fn kernel_at_degree(d: usize, panel: &Panel) -> Result<KernelReport> {
    if d > 6 {
        return Err(Error::InvalidParameter(format!("kernel degree {d} above 6")));
    }
    Ok(KernelReport { degree: d, panel_seed: panel.seed, panel_size: panel.len(), words: kernel_words(d, panel)? })
}

/// `tr(αβγ²) = −tr(αγβγ)`
pub fn sign_relation_check(panel: &Panel) -> CheckReport {
    let v = panel.max_over(|_, o| (o.tr("abcc") + o.tr("acbc")).abs());
    CheckReport::new(SIGN_RELATION, v, RELATION_TOLERANCE, panel)
}

fn levi_civita_permutations() -> [([usize; 3], f64); 6] {
    [([0, 1, 2], 1.0), ([1, 2, 0], 1.0), ([2, 0, 1], 1.0), ([0, 2, 1], -1.0), ([2, 1, 0], -1.0), ([1, 0, 2], -1.0)]
}

/// `−4 ε_ijk f_abc c_ia c_jb c_kc`
pub fn gamma3_contraction(c: &[[f64; 8]; 3], sc3: &StructureConstants) -> f64 {
    let mut total = 0.0;
    for ([i, j, k], sign) in levi_civita_permutations() {
        for a in 0..8 {
            for b in 0..8 {
                let ab = c[i][a] * c[j][b];
                for cc in 0..8 {
                    total += sign * sc3.f(a, b, cc) * ab * c[k][cc];
                }
            }
        }
    }
    -4.0 * total
}

pub fn gamma3_formula_check(panel: &Panel, sc3: &StructureConstants) -> CheckReport {
    let v = panel.max_over(|s, o| (o.tr("ccc") - gamma3_contraction(&s.c, sc3)).abs());
    CheckReport::new(GAMMA3_FORMULA, v, RELATION_TOLERANCE, panel)
}

fn ctc(c: &[[f64; 8]; 3]) -> [[f64; 8]; 8] {
    let mut m = [[0.0; 8]; 8];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|i| c[i][a] * c[i][b]).sum();
        }
    }
    m
}

/// `(𝕀⁰⁰⁴(dd), 𝕀⁰⁰⁴(ff))` with `M = CᵀC`:
/// `d_abc d_cpq M_ab M_pq` and `f_apc f_cbq M_ab M_pq`.
pub fn i004_values(c: &[[f64; 8]; 3], sc3: &StructureConstants) -> (f64, f64) {
    let m = ctc(c);
    let mut dd = 0.0;
    let mut ff = 0.0;
    for x in 0..8 {
        for a in 0..8 {
            for b in 0..8 {
                for p in 0..8 {
                    for q in 0..8 {
                        dd += sc3.d(a, b, x) * sc3.d(x, p, q) * m[a][b] * m[p][q];
                        ff += sc3.f(a, p, x) * sc3.f(x, b, q) * m[a][b] * m[p][q];
                    }
                }
            }
        }
    }
    (dd, ff)
}

/// `𝕀(dd) − [(2/3)𝕀(ff) − (1/3)((tr M)² − 2 tr M²)]`
pub fn i004_residual(c: &[[f64; 8]; 3], sc3: &StructureConstants) -> f64 {
    let (dd, ff) = i004_values(c, sc3);
    let m = ctc(c);
    let tr: f64 = (0..8).map(|a| m[a][a]).sum();
    let tr2: f64 = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).map(|(a, b)| m[a][b] * m[b][a]).sum();
    dd - (2.0 / 3.0 * ff - (tr * tr - 2.0 * tr2) / 3.0)
}

pub fn i004_identity_check(panel: &Panel, sc3: &StructureConstants) -> CheckReport {
    let v = panel.max_over(|s, _| i004_residual(&s.c, sc3).abs());
    CheckReport::new(I004_IDENTITY, v, RELATION_TOLERANCE, panel)
}

/// Residuals of the relations among degree-4 traces sharing a multidegree,
/// in the order of [`multidegree_relations_check`].
pub fn multidegree_residuals(s: &QubitQutritState, o: &LocalOperators, sc3: &StructureConstants) -> [f64; 5] {
    let (aa, bb, cc) = (o.tr("aa"), o.tr("bb"), o.tr("cc"));
    let (aacc, acac, bbcc, bcbc) = (o.tr("aacc"), o.tr("acac"), o.tr("bbcc"), o.tr("bcbc"));

    // 8 a_i a_k c_ij c_kj
    let aac: f64 = (0..8).map(|j| (0..3).map(|i| s.a[i] * s.c[i][j]).sum::<f64>().powi(2)).sum();
    // 4 d_{j1 j2 k} d_{k j3 j4} b_j1 b_j2 c_i j3 c_i j4
    let u = sc3.contract_d(&s.b, &s.b);
    let mut v = vec![0.0; 8];
    for row in &s.c {
        for (vk, x) in v.iter_mut().zip(sc3.contract_d(row, row)) {
            *vk += x;
        }
    }
    let ddbbcc: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    // b_j1 b_j2 c_i j1 c_i j2 and d_{j1 j2 k} d_{k j3 j4} b_j1 b_j3 c_i j2 c_i j4
    let bbcc_plain: f64 = s.c.iter().map(|row| row.iter().zip(&s.b).map(|(x, y)| x * y).sum::<f64>().powi(2)).sum();
    let ddbcbc: f64 = s.c.iter().map(|row| sc3.contract_d(&s.b, row).iter().map(|x| x * x).sum::<f64>()).sum();

    [
        o.tr("aabb") - aa * bb / 6.0,
        aacc - aa * cc / 6.0,
        aacc + acac - 8.0 * aac,
        bbcc - bb * cc / 6.0 - 4.0 * ddbbcc,
        bbcc + bcbc - 8.0 * (2.0 / 3.0 * bbcc_plain + ddbcbc),
    ]
}

pub const MULTIDEGREE_NAMES: [&str; 5] =
    [ALPHA2_BETA2_PRODUCT, ALPHA2_GAMMA2_PRODUCT, MULTIDEGREE_202, MULTIDEGREE_022_PRODUCT, MULTIDEGREE_022_SUM];

#[derive(Debug, Clone, Serialize)]
pub struct RelationsReport {
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl RelationsReport {
    fn from_checks(checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { checks, passed }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn per_component_max<F>(panel: &Panel, f: F) -> [f64; 5]
where
    F: Fn(&QubitQutritState, &LocalOperators) -> [f64; 5] + Sync,
{
    let mut worst = [0.0f64; 5];
    for k in 0..5 {
        worst[k] = panel.max_over(|s, o| f(s, o)[k].abs());
    }
    worst
}

pub fn multidegree_relations_check(panel: &Panel, sc3: &StructureConstants) -> RelationsReport {
    let worst = per_component_max(panel, |s, o| multidegree_residuals(s, o, sc3));
    RelationsReport::from_checks(
        MULTIDEGREE_NAMES.iter().zip(worst).map(|(n, v)| CheckReport::new(n, v, RELATION_TOLERANCE, panel)).collect(),
    )
}

/// `6𝔠_k` from the trace route minus its expansion in local trace invariants, `k = 2, 3, 4`.
pub fn casimir_decomposition_residuals(s: &QubitQutritState, o: &LocalOperators) -> Result<[f64; 3]> {
    let c = casimirs_from_traces(s)?;
    let t = |w: &str| o.tr(w);
    let (aa, bb, cc) = (t("aa"), t("bb"), t("cc"));
    let six_c2 = aa + bb + cc;
    let six_c3 = t("bbb") + t("ccc") + 3.0 * t("bcc") + 6.0 * t("abc");
    let six_c4 = (aa * (2.0 * bb + cc) + 0.25 * bb * bb - 0.5 * cc * cc - bb * cc) / 3.0
        + 4.0 * (t("accc") + t("bccc") + t("bbcc") + t("abcc") + 3.0 * t("abbc"))
        + 2.0 * (t("acac") + t("bcbc"))
        + t("cccc");
    Ok([6.0 * c.raw_k(2) - six_c2, 6.0 * c.raw_k(3) - six_c3, 6.0 * c.raw_k(4) - six_c4])
}

pub fn casimir_decomposition_check(panel: &Panel) -> RelationsReport {
    let worst = per_component_max(panel, |s, o| {
        let r = casimir_decomposition_residuals(s, o).map(|r| [r[0], r[1], r[2], 0.0, 0.0]);
        r.unwrap_or([f64::NAN; 5])
    });
    RelationsReport::from_checks(
        [CASIMIR_2, CASIMIR_3, CASIMIR_4]
            .iter()
            .zip(worst)
            .map(|(n, v)| CheckReport::new(n, v, DECOMPOSITION_TOLERANCE, panel))
            .collect(),
    )
}

/// A scalar whose invariance is tested.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantSelector {
    Word(TraceWord),
    /// Raw Casimir `𝔠_k`, `k ∈ 2..=6`.
    Casimir(usize),
}

impl InvariantSelector {
    pub fn value(&self, state: &QubitQutritState) -> Result<f64> {
        match self {
            InvariantSelector::Word(w) => Ok(LocalOperators::new(state).trace(w).re),
            InvariantSelector::Casimir(k) if (2..=6).contains(k) => Ok(casimirs_from_traces(state)?.raw_k(*k)),
            InvariantSelector::Casimir(k) => Err(Error::InvalidParameter(format!("Casimir order {k} outside 2..=6"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjugation {
    /// `k₁ ⊗ k₂`, `k₁ ∈ SU(2)`, `k₂ ∈ SU(3)`.
    Local,
    /// Any element of SU(6).
    Global,
}

/// Max `|f(UρU†) − f(ρ)|` per selector over `trials` random states and unitaries.
/// Words are compared as complex traces.
pub fn invariance_deviations(
    selectors: &[InvariantSelector],
    conjugation: Conjugation,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("invariance test needs at least one trial".into()));
    }
    let mut rng = states::rng_from_seed(seed);
    let mut worst = vec![0.0f64; selectors.len()];
    for _ in 0..trials {
        let state = states::random_density_with(states::Ensemble::GinibreFullRank, &mut rng)?;
        let u = match conjugation {
            Conjugation::Local => states::random_local_unitary_with(&mut rng),
            Conjugation::Global => states::haar_special_unitary(6, &mut rng),
        };
        let moved = state.conjugated(&u)?;
        let (before, after) = (LocalOperators::new(&state), LocalOperators::new(&moved));
        for (w, sel) in worst.iter_mut().zip(selectors) {
            let dev = match sel {
                InvariantSelector::Word(word) => (before.trace(word) - after.trace(word)).norm(),
                other => (other.value(&state)? - other.value(&moved)?).abs(),
            };
            *w = w.max(dev);
        }
    }
    Ok(worst)
}

pub fn invariance_test(selector: &InvariantSelector, conjugation: Conjugation, trials: usize, seed: u64) -> Result<f64> {
    Ok(invariance_deviations(std::slice::from_ref(selector), conjugation, trials, seed)?[0])
}
