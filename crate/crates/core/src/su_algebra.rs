//! Hermitian bases of su(2), su(3) and the tensorial su(6) basis, their
//! symmetric (`d`) and antisymmetric (`f`) structure constants, and the
//! identities those constants obey.
//!
//! All bases are normalized by `tr(τ_A τ_B) = 2 δ_AB`, so that
//! `τ_A τ_B = (2/n) δ_AB I + (d_ABC + i f_ABC) τ_C`.
//!
//! Indices are 0-based in the Rust API. JSON dumps use 1-based indices.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, I, ONE, ZERO};

/// Violations above this mark an identity report as failed.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Seed for the sampled su(6) identity checks.
pub const DEFAULT_IDENTITY_SEED: u64 = 0x5eed_0006;

/// Number of sampled index tuples for su(6) identity checks.
pub const DEFAULT_IDENTITY_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasisLabel {
    #[serde(rename = "su2-pauli")]
    Su2Pauli,
    #[serde(rename = "su3-gellmann")]
    Su3GellMann,
    #[serde(rename = "su6-tensor")]
    Su6Tensor,
}

impl BasisLabel {
    /// Dimension of the defining representation.
    pub fn n(self) -> usize {
        match self {
            BasisLabel::Su2Pauli => 2,
            BasisLabel::Su3GellMann => 3,
            BasisLabel::Su6Tensor => 6,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BasisLabel::Su2Pauli => "su2-pauli",
            BasisLabel::Su3GellMann => "su3-gellmann",
            BasisLabel::Su6Tensor => "su6-tensor",
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su2-pauli" | "su2" => Ok(BasisLabel::Su2Pauli),
            "su3-gellmann" | "su3" => Ok(BasisLabel::Su3GellMann),
            "su6-tensor" | "su6" => Ok(BasisLabel::Su6Tensor),
            other => Err(Error::UnknownBasis(other.to_string())),
        }
    }
}

/// The three Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli_matrices() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// The eight Gell-Mann matrices λ₁ … λ₈.
pub fn gell_mann_matrices() -> [CMatrix; 8] {
    let mut l: [CMatrix; 8] = std::array::from_fn(|_| CMatrix::zeros(3, 3));
    l[0][(0, 1)] = ONE;
    l[0][(1, 0)] = ONE;
    l[1][(0, 1)] = -I;
    l[1][(1, 0)] = I;
    l[2][(0, 0)] = ONE;
    l[2][(1, 1)] = -ONE;
    l[3][(0, 2)] = ONE;
    l[3][(2, 0)] = ONE;
    l[4][(0, 2)] = -I;
    l[4][(2, 0)] = I;
    l[5][(1, 2)] = ONE;
    l[5][(2, 1)] = ONE;
    l[6][(1, 2)] = -I;
    l[6][(2, 1)] = I;
    let s = 1.0 / 3f64.sqrt();
    l[7][(0, 0)] = Complex64::new(s, 0.0);
    l[7][(1, 1)] = Complex64::new(s, 0.0);
    l[7][(2, 2)] = Complex64::new(-2.0 * s, 0.0);
    l
}

/// A traceless Hermitian basis of su(n), normalized by `tr(τ_A τ_B) = 2 δ_AB`.
#[derive(Debug, Clone)]
pub struct SuBasis {
    label: BasisLabel,
    elements: Vec<CMatrix>,
}

impl SuBasis {
    pub fn label(&self) -> BasisLabel {
        self.label
    }

    pub fn n(&self) -> usize {
        self.label.n()
    }

    /// Number of basis elements, `n² − 1`.
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> Result<&CMatrix> {
        self.elements
            .get(index)
            .ok_or(Error::IndexOutOfRange { index, size: self.dim() })
    }

    /// `Σ_A x_A τ_A`
    pub fn combination(&self, coefficients: &[f64]) -> Result<CMatrix> {
        if coefficients.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coefficients.len() });
        }
        let n = self.n();
        let mut m = CMatrix::zeros(n, n);
        for (x, t) in coefficients.iter().zip(&self.elements) {
            if *x != 0.0 {
                m += t * Complex64::new(*x, 0.0);
            }
        }
        Ok(m)
    }

    /// Max of `|tr(τ_A τ_B) − 2 δ_AB|` over all pairs.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for (a, ta) in self.elements.iter().enumerate() {
            for (b, tb) in self.elements.iter().enumerate() {
                let expected = if a == b { 2.0 } else { 0.0 };
                dev = dev.max((linalg::trace_of_product(ta, tb) - Complex64::new(expected, 0.0)).norm());
            }
        }
        dev
    }

    /// Max over elements of the Hermiticity and trace deviations.
    pub fn hermitian_traceless_deviation(&self) -> f64 {
        self.elements
            .iter()
            .map(|t| linalg::hermitian_deviation(t).max(linalg::trace(t).norm()))
            .fold(0.0, f64::max)
    }
}

/// Builds the requested basis.
///
/// For `su6-tensor` the 35 elements are, in order,
/// `σ_i ⊗ I₃ / √3`, `I₂ ⊗ λ_a / √2`, `σ₁ ⊗ λ_a / √2`, `σ₂ ⊗ λ_a / √2`, `σ₃ ⊗ λ_a / √2`.
pub fn build_basis(label: BasisLabel) -> SuBasis {
    let elements = match label {
        BasisLabel::Su2Pauli => pauli_matrices().to_vec(),
        BasisLabel::Su3GellMann => gell_mann_matrices().to_vec(),
        BasisLabel::Su6Tensor => {
            let sigma = pauli_matrices();
            let lambda = gell_mann_matrices();
            let i2 = linalg::identity(2);
            let i3 = linalg::identity(3);
            let r3 = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
            let r2 = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
            let mut out = Vec::with_capacity(35);
            for s in &sigma {
                out.push(linalg::kron(s, &i3) * r3);
            }
            for l in &lambda {
                out.push(linalg::kron(&i2, l) * r2);
            }
            for s in &sigma {
                for l in &lambda {
                    out.push(linalg::kron(s, l) * r2);
                }
            }
            out
        }
    };
    SuBasis { label, elements }
}

/// The `d` and `f` tensors of a basis.
///
/// Storage is dense (`dim³` entries, 42 875 for su(6)); a list of the
/// nonzero canonical entries is kept alongside for contraction loops.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    label: BasisLabel,
    dim: usize,
    d: Vec<f64>,
    f: Vec<f64>,
    d_sparse: Vec<(usize, usize, usize, f64)>,
    f_sparse: Vec<(usize, usize, usize, f64)>,
    max_imaginary_residue: f64,
}

impl StructureConstants {
    pub fn label(&self) -> BasisLabel {
        self.label
    }

    pub fn n(&self) -> usize {
        self.label.n()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }

    #[inline]
    pub fn d(&self, a: usize, b: usize, c: usize) -> f64 {
        self.d[self.idx(a, b, c)]
    }

    #[inline]
    pub fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f[self.idx(a, b, c)]
    }

    /// Nonzero `d_ABC` with `A ≤ B ≤ C`.
    pub fn d_entries(&self) -> &[(usize, usize, usize, f64)] {
        &self.d_sparse
    }

    /// Nonzero `f_ABC` with `A < B < C`.
    pub fn f_entries(&self) -> &[(usize, usize, usize, f64)] {
        &self.f_sparse
    }

    /// Largest imaginary part discarded while evaluating the trace formulas.
    pub fn max_imaginary_residue(&self) -> f64 {
        self.max_imaginary_residue
    }

    /// `out_c = Σ_{a,b} d_abc u_a v_b`
    pub fn contract_d(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (a, &ua) in u.iter().enumerate() {
            if ua == 0.0 {
                continue;
            }
            for (b, &vb) in v.iter().enumerate() {
                if vb == 0.0 {
                    continue;
                }
                let w = ua * vb;
                let base = (a * self.dim + b) * self.dim;
                for (c, o) in out.iter_mut().enumerate() {
                    *o += self.d[base + c] * w;
                }
            }
        }
        out
    }

    /// Largest deviation from total symmetry of `d` and total antisymmetry of `f`.
    pub fn symmetry_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let d0 = self.d(a, b, c);
                    let f0 = self.f(a, b, c);
                    for (p, q, r, sign) in [(b, a, c, -1.0), (a, c, b, -1.0), (c, b, a, -1.0), (b, c, a, 1.0), (c, a, b, 1.0)] {
                        dev = dev.max((self.d(p, q, r) - d0).abs());
                        dev = dev.max((self.f(p, q, r) - sign * f0).abs());
                    }
                }
            }
        }
        dev
    }

    /// JSON-ready dump with 1-based indices.
    pub fn dump(&self) -> StructureConstantsDump {
        let one_based = |v: &[(usize, usize, usize, f64)]| {
            v.iter().map(|&(a, b, c, x)| (a + 1, b + 1, c + 1, x)).collect()
        };
        StructureConstantsDump {
            label: self.label,
            n: self.n(),
            d: one_based(&self.d_sparse),
            f: one_based(&self.f_sparse),
        }
    }
}

/// `{"label":…, "n":…, "d":[[A,B,C,value]…], "f":[[A,B,C,value]…]}`
#[derive(Debug, Clone, Serialize)]
pub struct StructureConstantsDump {
    pub label: BasisLabel,
    pub n: usize,
    pub d: Vec<(usize, usize, usize, f64)>,
    pub f: Vec<(usize, usize, usize, f64)>,
}

/// Evaluates `d_ABC = ¼ tr({τ_A, τ_B} τ_C)` and `f_ABC = −(i/4) tr([τ_A, τ_B] τ_C)`.
pub fn structure_constants(basis: &SuBasis) -> Result<StructureConstants> {
    let dev = basis.orthonormality_deviation();
    if dev > 1e-12 {
        return Err(Error::NotOrthonormal(dev));
    }
    let dim = basis.dim();
    let el = basis.elements();
    let products: Vec<CMatrix> = (0..dim * dim).map(|ab| &el[ab / dim] * &el[ab % dim]).collect();
    // triple[a][b][c] = tr(τ_a τ_b τ_c)
    let mut triple = vec![ZERO; dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let p = &products[a * dim + b];
            for c in 0..dim {
                triple[(a * dim + b) * dim + c] = linalg::trace_of_product(p, &el[c]);
            }
        }
    }
    let mut d = vec![0.0; dim * dim * dim];
    let mut f = vec![0.0; dim * dim * dim];
    let mut residue = 0.0f64;
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let abc = triple[(a * dim + b) * dim + c];
                let bac = triple[(b * dim + a) * dim + c];
                let dz = (abc + bac) * 0.25;
                let fz = (abc - bac) * Complex64::new(0.0, -0.25);
                residue = residue.max(dz.im.abs()).max(fz.im.abs());
                let i = (a * dim + b) * dim + c;
                d[i] = clean(dz.re);
                f[i] = clean(fz.re);
            }
        }
    }
    let mut d_sparse = Vec::new();
    let mut f_sparse = Vec::new();
    for a in 0..dim {
        for b in a..dim {
            for c in b..dim {
                let i = (a * dim + b) * dim + c;
                if d[i] != 0.0 {
                    d_sparse.push((a, b, c, d[i]));
                }
                if a < b && b < c && f[i] != 0.0 {
                    f_sparse.push((a, b, c, f[i]));
                }
            }
        }
    }
    Ok(StructureConstants {
        label: basis.label(),
        dim,
        d,
        f,
        d_sparse,
        f_sparse,
        max_imaginary_residue: residue,
    })
}

// Round-off below 1e-14 is flushed so that sparsity reflects the exact constants.
fn clean(x: f64) -> f64 {
    if x.abs() < 1e-14 {
        0.0
    } else {
        x
    }
}

/// How free-index tuples are enumerated by [`verify_structure_identities_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum IndexSampling {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_violation: f64,
    pub tuples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub label: BasisLabel,
    pub sampling: IndexSampling,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

impl IdentityReport {
    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const JACOBI_FF: &str = "jacobi_fff";
pub const MIXED_DF: &str = "mixed_dff";
pub const FF_AS_DD: &str = "ff_as_dd";
pub const FF_DD_SYMMETRIZED: &str = "ff_dd";
pub const DD_CYCLIC_SU3: &str = "dd_cyclic_su3";

/// Checks the identities with exhaustive enumeration for su(2)/su(3) and
/// [`DEFAULT_IDENTITY_SAMPLES`] seeded tuples for su(6).
pub fn verify_structure_identities(sc: &StructureConstants) -> IdentityReport {
    let sampling = match sc.label() {
        BasisLabel::Su6Tensor => IndexSampling::Sampled {
            seed: DEFAULT_IDENTITY_SEED,
            count: DEFAULT_IDENTITY_SAMPLES,
        },
        _ => IndexSampling::Exhaustive,
    };
    verify_structure_identities_with(sc, sampling)
}

/// Max violations of the four su(n) identities over free indices `(a, b, p, q)`:
///
/// * `f_abc f_cpq + f_bpc f_caq + f_pac f_cbq = 0`
/// * `d_abc f_cpq + d_bpc f_caq + d_pac f_cbq = 0`
/// * `f_abc f_cpq = d_apc d_cbq − d_aqc d_cbp + (2/n)(δ_ap δ_bq − δ_aq δ_bp)`
/// * `f_abc f_cpq + f_aqc f_cpb = 2 d_apc d_cbq − d_abc d_cpq − d_aqc d_cbp + (2/n)(2 δ_ap δ_bq − δ_ab δ_pq − δ_aq δ_bp)`
///
/// and, for su(3) only,
/// `d_abc d_cpq + d_bpc d_caq + d_pac d_cbq = ⅓(δ_ab δ_pq + δ_ap δ_bq + δ_aq δ_bp)`.
pub fn verify_structure_identities_with(sc: &StructureConstants, sampling: IndexSampling) -> IdentityReport {
    let dim = sc.dim();
    let tuples: Vec<[usize; 4]> = match sampling {
        IndexSampling::Exhaustive => {
            let mut v = Vec::with_capacity(dim.pow(4));
            for a in 0..dim {
                for b in 0..dim {
                    for p in 0..dim {
                        for q in 0..dim {
                            v.push([a, b, p, q]);
                        }
                    }
                }
            }
            v
        }
        IndexSampling::Sampled { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| std::array::from_fn(|_| rng.random_range(0..dim)))
                .collect()
        }
    };

    let n = sc.n() as f64;
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let with_dd_cyclic = sc.label() == BasisLabel::Su3GellMann;
    let mut worst = [0.0f64; 5];
    for &[a, b, p, q] in &tuples {
        let mut s = [0.0f64; 5];
        for c in 0..dim {
            let ff_abc_cpq = sc.f(a, b, c) * sc.f(c, p, q);
            s[0] += ff_abc_cpq + sc.f(b, p, c) * sc.f(c, a, q) + sc.f(p, a, c) * sc.f(c, b, q);
            s[1] += sc.d(a, b, c) * sc.f(c, p, q) + sc.d(b, p, c) * sc.f(c, a, q) + sc.d(p, a, c) * sc.f(c, b, q);
            let dd_apc_cbq = sc.d(a, p, c) * sc.d(c, b, q);
            let dd_aqc_cbp = sc.d(a, q, c) * sc.d(c, b, p);
            s[2] += ff_abc_cpq - dd_apc_cbq + dd_aqc_cbp;
            s[3] += ff_abc_cpq + sc.f(a, q, c) * sc.f(c, p, b) - 2.0 * dd_apc_cbq
                + sc.d(a, b, c) * sc.d(c, p, q)
                + dd_aqc_cbp;
            if with_dd_cyclic {
                s[4] += sc.d(a, b, c) * sc.d(c, p, q) + sc.d(b, p, c) * sc.d(c, a, q) + sc.d(p, a, c) * sc.d(c, b, q);
            }
        }
        s[2] -= 2.0 / n * (delta(a, p) * delta(b, q) - delta(a, q) * delta(b, p));
        s[3] -= 2.0 / n * (2.0 * delta(a, p) * delta(b, q) - delta(a, b) * delta(p, q) - delta(a, q) * delta(b, p));
        s[4] -= (delta(a, b) * delta(p, q) + delta(a, p) * delta(b, q) + delta(a, q) * delta(b, p)) / 3.0;
        for (w, v) in worst.iter_mut().zip(s) {
            *w = w.max(v.abs());
        }
    }
    let names = [JACOBI_FF, MIXED_DF, FF_AS_DD, FF_DD_SYMMETRIZED, DD_CYCLIC_SU3];
    let count = if with_dd_cyclic { 5 } else { 4 };
    let checks: Vec<IdentityCheck> = (0..count)
        .map(|i| IdentityCheck {
            name: names[i],
            max_violation: worst[i],
            tuples: tuples.len(),
            passed: worst[i] < IDENTITY_TOLERANCE,
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    IdentityReport { label: sc.label(), sampling, checks, passed }
}

/// Max entrywise violation of `τ_A τ_B = (2/n) δ_AB I + (d_ABC + i f_ABC) τ_C`
/// over `pairs` random `(A, B)` pairs (all pairs when `pairs` is `None`).
pub fn closure_violation(basis: &SuBasis, sc: &StructureConstants, sample: Option<(u64, usize)>) -> f64 {
    let dim = basis.dim();
    let pairs: Vec<(usize, usize)> = match sample {
        None => (0..dim).flat_map(|a| (0..dim).map(move |b| (a, b))).collect(),
        Some((seed, count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| (rng.random_range(0..dim), rng.random_range(0..dim))).collect()
        }
    };
    let n = basis.n();
    let el = basis.elements();
    let mut worst = 0.0f64;
    for (a, b) in pairs {
        let lhs = &el[a] * &el[b];
        let mut rhs = if a == b {
            linalg::identity(n) * Complex64::new(2.0 / n as f64, 0.0)
        } else {
            CMatrix::zeros(n, n)
        };
        for (c, t) in el.iter().enumerate() {
            let coef = Complex64::new(sc.d(a, b, c), sc.f(a, b, c));
            if coef != ZERO {
                rhs += t * coef;
            }
        }
        worst = worst.max(linalg::max_abs_diff(&lhs, &rhs));
    }
    worst
}

fn validate_indices(dim: usize, indices: &[usize]) -> Result<()> {
    if !(2..=6).contains(&indices.len()) {
        return Err(Error::Arity(indices.len()));
    }
    if let Some(&index) = indices.iter().find(|&&i| i >= dim) {
        return Err(Error::IndexOutOfRange { index, size: dim });
    }
    Ok(())
}

/// Calls `visit` once for every permutation of `items` (Heap's algorithm).
fn for_each_permutation(items: &[usize], mut visit: impl FnMut(&[usize])) {
    let mut a = items.to_vec();
    let k = a.len();
    let mut c = vec![0usize; k];
    visit(&a);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// `(1/k!) Σ_σ tr(τ_σ(1) ⋯ τ_σ(k))` by explicit permutation sum.
pub fn symmetrized_trace(basis: &SuBasis, indices: &[usize]) -> Result<f64> {
    validate_indices(basis.dim(), indices)?;
    let el = basis.elements();
    let mut total = ZERO;
    for_each_permutation(indices, |perm| {
        let (last, head) = perm.split_last().expect("arity >= 2");
        let mut m = el[head[0]].clone();
        for &i in &head[1..] {
            m = &m * &el[i];
        }
        total += linalg::trace_of_product(&m, &el[*last]);
    });
    Ok(total.re / factorial(indices.len()))
}

/// The tabulated closed forms (products of `δ` and `d` contractions with
/// `2^m / n^m` prefactors), symmetrized over the index order.
pub fn symmetrized_trace_closed_form(sc: &StructureConstants, indices: &[usize]) -> Result<f64> {
    validate_indices(sc.dim(), indices)?;
    let n = sc.n() as f64;
    let dim = sc.dim();
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    // dd(a,b,c,d) = Σ_e d_abe d_ecd
    let dd = |a: usize, b: usize, c: usize, d: usize| (0..dim).map(|e| sc.d(a, b, e) * sc.d(e, c, d)).sum::<f64>();
    // chain(a,b,[c…],e,f) = d_{ab g1} d_{g1 c g2} ⋯ d_{g_m e f}
    let chain = |a: usize, b: usize, middle: &[usize], e: usize, f: usize| {
        let mut v: Vec<f64> = (0..dim).map(|g| sc.d(a, b, g)).collect();
        for &c in middle {
            let mut next = vec![0.0; dim];
            for (g, &vg) in v.iter().enumerate() {
                if vg == 0.0 {
                    continue;
                }
                for (h, nh) in next.iter_mut().enumerate() {
                    *nh += vg * sc.d(g, c, h);
                }
            }
            v = next;
        }
        v.iter().enumerate().map(|(g, &vg)| vg * sc.d(g, e, f)).sum::<f64>()
    };
    let term = |p: &[usize]| -> f64 {
        match *p {
            [a, b] => 2.0 * delta(a, b),
            [a, b, c] => 2.0 * sc.d(a, b, c),
            [a, b, c, d] => 4.0 / n * delta(a, b) * delta(c, d) + 2.0 * dd(a, b, c, d),
            [a, b, c, d, e] => {
                4.0 / n * (sc.d(a, b, c) * delta(d, e) + delta(a, b) * sc.d(c, d, e)) + 2.0 * chain(a, b, &[c], d, e)
            }
            [a, b, c, d, e, f] => {
                8.0 / (n * n) * delta(a, b) * delta(c, d) * delta(e, f)
                    + 4.0 / n * (dd(a, b, c, d) * delta(e, f) + delta(a, b) * dd(c, d, e, f))
                    + 4.0 / n * sc.d(a, b, c) * sc.d(d, e, f)
                    + 2.0 * chain(a, b, &[c, d], e, f)
            }
            _ => unreachable!("arity validated"),
        }
    };
    let mut total = 0.0;
    for_each_permutation(indices, |perm| total += term(perm));
    Ok(total / factorial(indices.len()))
}

pub const SYMMETRIZED_TRACE_NAMES: [&str; 5] = [
    "symmetrized_trace_2",
    "symmetrized_trace_3",
    "symmetrized_trace_4",
    "symmetrized_trace_5",
    "symmetrized_trace_6",
];

// Non-decreasing index tuples of length `k` over `0..dim`.
fn multisets(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] + 1 < dim) else {
            return out;
        };
        let v = cur[pos] + 1;
        for x in &mut cur[pos..] {
            *x = v;
        }
    }
}

/// Compares [`symmetrized_trace`] with [`symmetrized_trace_closed_form`] for
/// arities 2–6. `Exhaustive` covers every index multiset (the symmetrized
/// trace does not depend on order); `Sampled` splits `count` tuples evenly over
/// the arities.
pub fn verify_symmetrized_traces(basis: &SuBasis, sc: &StructureConstants, sampling: IndexSampling) -> Vec<IdentityCheck> {
    let dim = basis.dim();
    let mut rng = match sampling {
        IndexSampling::Sampled { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        IndexSampling::Exhaustive => None,
    };
    (2..=6)
        .map(|k| {
            let tuples: Vec<Vec<usize>> = match (sampling, rng.as_mut()) {
                (IndexSampling::Sampled { count, .. }, Some(rng)) => {
                    let per_arity = count.div_ceil(5);
                    (0..per_arity).map(|_| (0..k).map(|_| rng.random_range(0..dim)).collect()).collect()
                }
                _ => multisets(dim, k),
            };
            let worst = tuples
                .par_iter()
                .map(|t| {
                    let direct = symmetrized_trace(basis, t).expect("validated indices");
                    let closed = symmetrized_trace_closed_form(sc, t).expect("validated indices");
                    (direct - closed).abs()
                })
                .reduce(|| 0.0, f64::max);
            IdentityCheck {
                name: SYMMETRIZED_TRACE_NAMES[k - 2],
                max_violation: worst,
                tuples: tuples.len(),
                passed: worst < IDENTITY_TOLERANCE,
            }
        })
        .collect()
}
