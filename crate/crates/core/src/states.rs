//! Density matrices of a qubit-qutrit pair in Bloch `(a, b, C)` form, their
//! 6×6 matrices, partial traces, and seeded random ensembles.
//!
//! Tensor-product rows are qubit-major: row `3·i + a` for qubit index `i`
//! and qutrit index `a` (both 0-based).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::su_algebra::{self, BasisLabel, SuBasis};

/// Tolerance on Hermiticity and unit trace for matrices accepted by [`QubitQutritState::from_matrix`].
pub const INPUT_TOLERANCE: f64 = 1e-9;

/// `κ = √(n(n−1)/2)`
pub fn kappa(n: usize) -> f64 {
    ((n * (n - 1)) as f64 / 2.0).sqrt()
}

fn basis_for(n: usize) -> Result<SuBasis> {
    let label = match n {
        2 => BasisLabel::Su2Pauli,
        3 => BasisLabel::Su3GellMann,
        6 => BasisLabel::Su6Tensor,
        _ => return Err(Error::InvalidParameter(format!("no basis for n = {n}"))),
    };
    Ok(su_algebra::build_basis(label))
}

fn check_density_input(rho: &CMatrix, n: usize) -> Result<()> {
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rho.nrows() });
    }
    let herm = linalg::hermitian_deviation(rho);
    if herm > INPUT_TOLERANCE {
        return Err(Error::NotHermitian(herm));
    }
    let tr = (linalg::trace(rho) - Complex64::new(1.0, 0.0)).norm();
    if tr > INPUT_TOLERANCE {
        return Err(Error::WrongTrace(tr));
    }
    Ok(())
}

/// `ρ = (I + ω)/n` with `ω = κ ξ·τ` in the standard basis for `n ∈ {2, 3, 6}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochState {
    pub n: usize,
    pub xi: Vec<f64>,
    pub kappa: f64,
}

impl BlochState {
    pub fn new(n: usize, xi: Vec<f64>) -> Result<Self> {
        if !matches!(n, 2 | 3 | 6) {
            return Err(Error::InvalidParameter(format!("no basis for n = {n}")));
        }
        if xi.len() != n * n - 1 {
            return Err(Error::DimensionMismatch { expected: n * n - 1, got: xi.len() });
        }
        Ok(Self { n, xi, kappa: kappa(n) })
    }

    pub fn to_matrix(&self) -> CMatrix {
        let basis = basis_for(self.n).expect("n validated at construction");
        let omega = basis.combination(&self.xi).expect("length validated") * Complex64::new(self.kappa, 0.0);
        (linalg::identity(self.n) + omega) / Complex64::new(self.n as f64, 0.0)
    }

    /// `ξ_A = n tr(ρ τ_A) / (2κ)`
    pub fn from_matrix(rho: &CMatrix) -> Result<Self> {
        let n = rho.nrows();
        let basis = basis_for(n)?;
        check_density_input(rho, n)?;
        let k = kappa(n);
        let xi = basis
            .elements()
            .iter()
            .map(|t| n as f64 * linalg::trace_of_product(rho, t).re / (2.0 * k))
            .collect();
        Ok(Self { n, xi, kappa: k })
    }
}

/// Qubit Bloch vector `a`, qutrit Bloch vector `b` and correlation matrix `C`.
///
/// `ρ = (1/6)(I₆ + α + β + γ)` with `α = a_i σ_i⊗I₃`, `β = b_a I₂⊗λ_a`, `γ = c_ia σ_i⊗λ_a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitQutritState {
    pub a: [f64; 3],
    pub b: [f64; 8],
    #[serde(rename = "C")]
    pub c: [[f64; 8]; 3],
}

impl Default for QubitQutritState {
    fn default() -> Self {
        Self::maximally_mixed()
    }
}

impl QubitQutritState {
    pub fn maximally_mixed() -> Self {
        Self { a: [0.0; 3], b: [0.0; 8], c: [[0.0; 8]; 3] }
    }

    /// Parameters flattened as `(a₁..a₃, b₁..b₈, c₁₁..c₁₈, c₂₁..c₂₈, c₃₁..c₃₈)`.
    pub fn to_params(&self) -> [f64; 35] {
        let mut p = [0.0; 35];
        p[..3].copy_from_slice(&self.a);
        p[3..11].copy_from_slice(&self.b);
        for i in 0..3 {
            p[11 + 8 * i..19 + 8 * i].copy_from_slice(&self.c[i]);
        }
        p
    }

    pub fn from_params(p: &[f64; 35]) -> Self {
        let mut s = Self::maximally_mixed();
        s.a.copy_from_slice(&p[..3]);
        s.b.copy_from_slice(&p[3..11]);
        for i in 0..3 {
            s.c[i].copy_from_slice(&p[11 + 8 * i..19 + 8 * i]);
        }
        s
    }

    /// The Bloch vector in the tensorial su(6) basis: `ξ = (√3 a, √2 b, √2 C) / κ`.
    pub fn to_bloch(&self) -> BlochState {
        let k = kappa(6);
        let p = self.to_params();
        let xi = p
            .iter()
            .enumerate()
            .map(|(i, &x)| if i < 3 { 3f64.sqrt() * x / k } else { 2f64.sqrt() * x / k })
            .collect();
        BlochState { n: 6, xi, kappa: k }
    }

    pub fn from_bloch(state: &BlochState) -> Result<Self> {
        if state.n != 6 {
            return Err(Error::DimensionMismatch { expected: 6, got: state.n });
        }
        let k = kappa(6);
        let mut p = [0.0; 35];
        for (i, (pi, &x)) in p.iter_mut().zip(&state.xi).enumerate() {
            *pi = if i < 3 { x * k / 3f64.sqrt() } else { x * k / 2f64.sqrt() };
        }
        Ok(Self::from_params(&p))
    }

    /// The three sector matrices `(α, β, γ)`.
    pub fn sectors(&self) -> (CMatrix, CMatrix, CMatrix) {
        let sigma = su_algebra::pauli_matrices();
        let lambda = su_algebra::gell_mann_matrices();
        let i2 = linalg::identity(2);
        let i3 = linalg::identity(3);
        let mut small_a = CMatrix::zeros(2, 2);
        for (s, &x) in sigma.iter().zip(&self.a) {
            small_a += s * Complex64::new(x, 0.0);
        }
        let mut small_b = CMatrix::zeros(3, 3);
        for (l, &x) in lambda.iter().zip(&self.b) {
            small_b += l * Complex64::new(x, 0.0);
        }
        let mut gamma = CMatrix::zeros(6, 6);
        for (s, row) in sigma.iter().zip(&self.c) {
            let mut lc = CMatrix::zeros(3, 3);
            for (l, &x) in lambda.iter().zip(row) {
                lc += l * Complex64::new(x, 0.0);
            }
            gamma += linalg::kron(s, &lc);
        }
        (linalg::kron(&small_a, &i3), linalg::kron(&i2, &small_b), gamma)
    }

    /// `ω = α + β + γ`
    pub fn omega(&self) -> CMatrix {
        let (a, b, c) = self.sectors();
        a + b + c
    }

    pub fn to_matrix(&self) -> CMatrix {
        (linalg::identity(6) + self.omega()) / Complex64::new(6.0, 0.0)
    }

    /// `a_i = tr(ρ σ_i⊗I₃)`, `b_a = (3/2) tr(ρ I₂⊗λ_a)`, `c_ia = (3/2) tr(ρ σ_i⊗λ_a)`.
    pub fn from_matrix(rho: &CMatrix) -> Result<Self> {
        check_density_input(rho, 6)?;
        let sigma = su_algebra::pauli_matrices();
        let lambda = su_algebra::gell_mann_matrices();
        let i2 = linalg::identity(2);
        let i3 = linalg::identity(3);
        let mut s = Self::maximally_mixed();
        for (i, si) in sigma.iter().enumerate() {
            s.a[i] = linalg::trace_of_product(rho, &linalg::kron(si, &i3)).re;
        }
        for (a, la) in lambda.iter().enumerate() {
            s.b[a] = 1.5 * linalg::trace_of_product(rho, &linalg::kron(&i2, la)).re;
        }
        for (i, si) in sigma.iter().enumerate() {
            for (a, la) in lambda.iter().enumerate() {
                s.c[i][a] = 1.5 * linalg::trace_of_product(rho, &linalg::kron(si, la)).re;
            }
        }
        Ok(s)
    }

    /// Partial trace over the qutrit.
    pub fn reduced_qubit(&self) -> CMatrix {
        let rho = self.to_matrix();
        let mut r = CMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                r[(i, j)] = (0..3).map(|k| rho[(3 * i + k, 3 * j + k)]).sum();
            }
        }
        r
    }

    /// Partial trace over the qubit.
    pub fn reduced_qutrit(&self) -> CMatrix {
        let rho = self.to_matrix();
        let mut r = CMatrix::zeros(3, 3);
        for a in 0..3 {
            for b in 0..3 {
                r[(a, b)] = (0..2).map(|i| rho[(3 * i + a, 3 * i + b)]).sum();
            }
        }
        r
    }

    /// The state of `u ρ u†`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        let rho = linalg::conjugate(&self.to_matrix(), u);
        // round-off of the conjugation can push Hermiticity slightly, project back
        let herm = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        Self::from_matrix(&herm)
    }

    pub fn norm_a(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn norm_b(&self) -> f64 {
        self.b.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Singular values of `C`, descending.
    pub fn correlation_singular_values(&self) -> Vec<f64> {
        let m = DMatrix::from_fn(3, 8, |i, a| self.c[i][a]);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        sv
    }
}

/// Random ensemble used by [`random_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    GinibreFullRank,
    Pure,
    Rank(usize),
}

impl Ensemble {
    fn columns(self) -> Result<usize> {
        match self {
            Ensemble::GinibreFullRank => Ok(6),
            Ensemble::Pure => Ok(1),
            Ensemble::Rank(k) if (1..=6).contains(&k) => Ok(k),
            Ensemble::Rank(k) => Err(Error::InvalidParameter(format!("rank {k} outside 1..=6"))),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex matrix with independent standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `A A† / tr(A A†)` as a raw 6×6 matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(ensemble: Ensemble, rng: &mut R) -> Result<CMatrix> {
    let r = ensemble.columns()?;
    let a = ginibre(6, r, rng);
    let rho = &a * a.adjoint();
    let tr = linalg::trace(&rho).re;
    Ok(rho / Complex64::new(tr, 0.0))
}

pub fn random_density_with<R: Rng + ?Sized>(ensemble: Ensemble, rng: &mut R) -> Result<QubitQutritState> {
    QubitQutritState::from_matrix(&random_density_matrix(ensemble, rng)?)
}

/// Seeded random state from `ensemble`; identical seeds give bit-identical states.
pub fn random_density(seed: u64, ensemble: Ensemble) -> Result<QubitQutritState> {
    random_density_with(ensemble, &mut rng_from_seed(seed))
}

/// Hermitian unit-trace 6×6 matrix whose smallest eigenvalue lies at or below
/// `min_negative_eigenvalue`; the other five eigenvalues are positive.
pub fn random_nonpsd_matrix<R: Rng + ?Sized>(min_negative_eigenvalue: f64, rng: &mut R) -> Result<CMatrix> {
    if !(-1.0..0.0).contains(&min_negative_eigenvalue) {
        return Err(Error::InvalidParameter(format!(
            "min_negative_eigenvalue {min_negative_eigenvalue} outside [-1, 0)"
        )));
    }
    let g = ginibre(6, 6, rng);
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let vectors = SymmetricEigen::new(h).eigenvectors;
    let negative = min_negative_eigenvalue * (1.0 + 0.5 * rng.random::<f64>());
    let weights: Vec<f64> = (0..5).map(|_| 0.2 + rng.random::<f64>()).collect();
    let scale = (1.0 - negative) / weights.iter().sum::<f64>();
    let mut spectrum = vec![negative];
    spectrum.extend(weights.iter().map(|w| w * scale));
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        6,
        spectrum.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let m = &vectors * diag * vectors.adjoint();
    Ok((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Non-PSD control state built by spectral surgery on a random Hermitian matrix.
pub fn random_nonpsd_unit_trace(seed: u64, min_negative_eigenvalue: f64) -> Result<QubitQutritState> {
    let m = random_nonpsd_matrix(min_negative_eigenvalue, &mut rng_from_seed(seed))?;
    QubitQutritState::from_matrix(&m)
}

/// Haar-random element of SU(n): QR of a Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`, then divided by an n-th root of its determinant.
pub fn haar_special_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let root = Complex64::from_polar(1.0, det.arg() / n as f64);
    q / root
}

pub fn random_local_unitary_with<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let k1 = haar_special_unitary(2, rng);
    let k2 = haar_special_unitary(3, rng);
    linalg::kron(&k1, &k2)
}

/// `k₁ ⊗ k₂` with `k₁ ∈ SU(2)`, `k₂ ∈ SU(3)` Haar-distributed.
pub fn random_local_unitary(seed: u64) -> CMatrix {
    random_local_unitary_with(&mut rng_from_seed(seed))
}

/// Haar-random element of SU(6).
pub fn random_global_unitary(seed: u64) -> CMatrix {
    haar_special_unitary(6, &mut rng_from_seed(seed))
}

/// State file, either `{"abc": {...}}` or `{"rho": [[[re, im] × 6] × 6]}`.
#[derive(Debug, Clone, Serialize)]
pub struct StateFile {
    pub abc: QubitQutritState,
}

impl StateFile {
    pub fn to_json(state: &QubitQutritState) -> serde_json::Value {
        serde_json::to_value(StateFile { abc: state.clone() }).expect("plain data")
    }

    /// `{"rho": …}` form of a state.
    pub fn rho_json(state: &QubitQutritState) -> serde_json::Value {
        let rho = state.to_matrix();
        let rows: Vec<Vec<[f64; 2]>> = (0..6)
            .map(|i| (0..6).map(|j| [rho[(i, j)].re, rho[(i, j)].im]).collect())
            .collect();
        serde_json::json!({ "rho": rows })
    }

    /// Parses either form; `rho` is routed through [`QubitQutritState::from_matrix`].
    pub fn parse(value: &serde_json::Value) -> Result<QubitQutritState> {
        let obj = value.as_object().ok_or_else(|| field_err("<root>", "expected a JSON object"))?;
        match (obj.get("abc"), obj.get("rho")) {
            (Some(abc), None) => parse_abc(abc),
            (None, Some(rho)) => parse_rho(rho),
            (Some(_), Some(_)) => Err(field_err("<root>", "both \"abc\" and \"rho\" given")),
            (None, None) => Err(field_err("<root>", "expected key \"abc\" or \"rho\"")),
        }
    }
}

fn field_err(field: &str, message: impl Into<String>) -> Error {
    Error::StateField { field: field.to_string(), message: message.into() }
}

// Numbers may be JSON numbers or decimal strings.
fn number(v: &serde_json::Value, field: &str) -> Result<f64> {
    match v {
        serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| field_err(field, "not a finite number")),
        serde_json::Value::String(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| field_err(field, format!("cannot parse {s:?} as a number"))),
        _ => Err(field_err(field, "expected a number")),
    }
}

fn vector(v: &serde_json::Value, field: &str, len: usize) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| field_err(field, "expected an array"))?;
    if arr.len() != len {
        return Err(field_err(field, format!("expected {len} entries, got {}", arr.len())));
    }
    arr.iter().enumerate().map(|(i, x)| number(x, &format!("{field}[{i}]"))).collect()
}

fn parse_abc(v: &serde_json::Value) -> Result<QubitQutritState> {
    let obj = v.as_object().ok_or_else(|| field_err("abc", "expected an object"))?;
    let get = |k: &str| obj.get(k).ok_or_else(|| field_err(k, "missing"));
    let mut s = QubitQutritState::maximally_mixed();
    s.a.copy_from_slice(&vector(get("a")?, "a", 3)?);
    s.b.copy_from_slice(&vector(get("b")?, "b", 8)?);
    let rows = get("C")?.as_array().ok_or_else(|| field_err("C", "expected an array of rows"))?;
    if rows.len() != 3 {
        return Err(field_err("C", format!("expected 3 rows, got {}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        s.c[i].copy_from_slice(&vector(row, &format!("C[{i}]"), 8)?);
    }
    Ok(s)
}

fn parse_rho(v: &serde_json::Value) -> Result<QubitQutritState> {
    let rows = v.as_array().ok_or_else(|| field_err("rho", "expected an array of rows"))?;
    if rows.len() != 6 {
        return Err(field_err("rho", format!("expected 6 rows, got {}", rows.len())));
    }
    let mut m = CMatrix::from_element(6, 6, ZERO);
    for (i, row) in rows.iter().enumerate() {
        let name = format!("rho[{i}]");
        let entries = row.as_array().ok_or_else(|| field_err(&name, "expected an array"))?;
        if entries.len() != 6 {
            return Err(field_err(&name, format!("expected 6 entries, got {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            let pair = vector(e, &format!("rho[{i}][{j}]"), 2)?;
            m[(i, j)] = Complex64::new(pair[0], pair[1]);
        }
    }
    QubitQutritState::from_matrix(&m).map_err(|e| field_err("rho", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(m: &CMatrix) -> Vec<f64> {
        (0..m.nrows()).map(|i| m[(i, i)].re).collect()
    }

    #[test]
    fn maximally_mixed_matrix() {
        let rho = QubitQutritState::maximally_mixed().to_matrix();
        assert!(linalg::max_abs_diff(&rho, &(linalg::identity(6) / Complex64::new(6.0, 0.0))) < 1e-15);
    }

    #[test]
    fn a3_state_matches_tensor_arithmetic() {
        let mut s = QubitQutritState::maximally_mixed();
        s.a = [0.0, 0.0, 1.0];
        let d = diag_of(&s.to_matrix());
        for (i, x) in d.iter().enumerate() {
            let expected = if i < 3 { 2.0 / 6.0 } else { 0.0 };
            assert!((x - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn from_matrix_of_sigma1_lambda1() {
        let sigma = su_algebra::pauli_matrices();
        let lambda = su_algebra::gell_mann_matrices();
        let rho = (linalg::identity(6) + linalg::kron(&sigma[0], &lambda[0])) / Complex64::new(6.0, 0.0);
        let s = QubitQutritState::from_matrix(&rho).unwrap();
        for i in 0..3 {
            for a in 0..8 {
                let expected = if (i, a) == (0, 0) { 1.0 } else { 0.0 };
                assert!((s.c[i][a] - expected).abs() < 1e-14);
            }
        }
        assert!(s.norm_a() < 1e-14 && s.norm_b() < 1e-14);
    }

    #[test]
    fn from_matrix_rejects_invalid() {
        let mut m = linalg::identity(6) / Complex64::new(6.0, 0.0);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(QubitQutritState::from_matrix(&m), Err(Error::NotHermitian(_))));
        let m = linalg::identity(6) / Complex64::new(5.0, 0.0);
        assert!(matches!(QubitQutritState::from_matrix(&m), Err(Error::WrongTrace(_))));
    }

    #[test]
    fn reduced_states() {
        let mut s = QubitQutritState::maximally_mixed();
        s.a = [1.0, 0.0, 0.0];
        let q = s.reduced_qubit();
        assert!((q[(0, 1)].re - 0.5).abs() < 1e-15 && (q[(0, 0)].re - 0.5).abs() < 1e-15);
        let t = s.reduced_qutrit();
        assert!(linalg::max_abs_diff(&t, &(linalg::identity(3) / Complex64::new(3.0, 0.0))) < 1e-15);
    }

    #[test]
    fn correlation_only_state_has_mixed_marginals() {
        let mut s = QubitQutritState::maximally_mixed();
        s.c[1][4] = 0.3;
        s.c[2][7] = -0.2;
        assert!(linalg::max_abs_diff(&s.reduced_qubit(), &(linalg::identity(2) / Complex64::new(2.0, 0.0))) < 1e-15);
        assert!(linalg::max_abs_diff(&s.reduced_qutrit(), &(linalg::identity(3) / Complex64::new(3.0, 0.0))) < 1e-15);
    }

    #[test]
    fn pure_state_purity() {
        let s = random_density(3, Ensemble::Pure).unwrap();
        let rho = s.to_matrix();
        let p = linalg::trace_of_product(&rho, &rho).re;
        assert!((p - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ginibre_is_full_rank() {
        let s = random_density(11, Ensemble::GinibreFullRank).unwrap();
        assert!(linalg::hermitian_eigenvalues(&s.to_matrix())[0] > 0.0);
    }

    #[test]
    fn rank_k_out_of_range() {
        assert!(random_density(1, Ensemble::Rank(0)).is_err());
        assert!(random_density(1, Ensemble::Rank(7)).is_err());
        let s = random_density(1, Ensemble::Rank(2)).unwrap();
        let ev = linalg::hermitian_eigenvalues(&s.to_matrix());
        assert!(ev[..4].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn seeded_states_are_bit_identical() {
        let x = random_density(42, Ensemble::GinibreFullRank).unwrap();
        let y = random_density(42, Ensemble::GinibreFullRank).unwrap();
        assert_eq!(x.to_params().map(f64::to_bits), y.to_params().map(f64::to_bits));
    }

    #[test]
    fn nonpsd_state() {
        let m = random_nonpsd_matrix(-0.1, &mut rng_from_seed(5)).unwrap();
        let ev = linalg::hermitian_eigenvalues(&m);
        assert!(ev[0] <= -0.1);
        assert!(ev[1] > 0.0);
        assert!((linalg::trace(&m).re - 1.0).abs() < 1e-12);
        assert!(random_nonpsd_unit_trace(1, 0.1).is_err());
        assert!(random_nonpsd_unit_trace(1, -1.5).is_err());
    }

    #[test]
    fn special_unitaries() {
        let u = random_local_unitary(9);
        assert!(linalg::unitarity_deviation(&u) < 1e-12);
        assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        let g = random_global_unitary(9);
        assert!(linalg::unitarity_deviation(&g) < 1e-12);
        assert!((g.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn local_unitary_keeps_sectors() {
        let mut s = QubitQutritState::maximally_mixed();
        assert!(s.conjugated(&random_local_unitary(1)).unwrap().to_params().iter().all(|x| x.abs() < 1e-12));
        s.a = [0.2, -0.4, 0.1];
        let t = s.conjugated(&random_local_unitary(2)).unwrap();
        assert!(t.norm_b() < 1e-12);
        assert!(t.correlation_singular_values().iter().all(|x| x.abs() < 1e-12));
        assert!((t.norm_a() - s.norm_a()).abs() < 1e-12);
    }

    #[test]
    fn bloch_roundtrip_and_kappa() {
        let s = random_density(8, Ensemble::GinibreFullRank).unwrap();
        let bloch = s.to_bloch();
        assert!((bloch.kappa - 15f64.sqrt()).abs() < 1e-15);
        assert!(linalg::max_abs_diff(&bloch.to_matrix(), &s.to_matrix()) < 1e-14);
        let back = QubitQutritState::from_bloch(&bloch).unwrap();
        for (x, y) in back.to_params().iter().zip(s.to_params()) {
            assert!((x - y).abs() < 1e-13);
        }
        let from_m = BlochState::from_matrix(&s.to_matrix()).unwrap();
        for (x, y) in from_m.xi.iter().zip(&bloch.xi) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn parse_state_files() {
        let mixed = serde_json::json!({"abc": {"a": [0,0,0], "b": [0,0,0,0,0,0,0,0], "C": [[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0]]}});
        assert_eq!(StateFile::parse(&mixed).unwrap(), QubitQutritState::maximally_mixed());
        let s = random_density(4, Ensemble::GinibreFullRank).unwrap();
        let back = StateFile::parse(&StateFile::rho_json(&s)).unwrap();
        for (x, y) in back.to_params().iter().zip(s.to_params()) {
            assert!((x - y).abs() < 1e-12);
        }
        let exact = StateFile::parse(&StateFile::to_json(&s)).unwrap();
        assert_eq!(exact, s);
        let bad = serde_json::json!({"abc": {"a": [1, 2]}});
        match StateFile::parse(&bad) {
            Err(Error::StateField { field, .. }) => assert_eq!(field, "a"),
            other => panic!("unexpected {other:?}"),
        }
        let strings = serde_json::json!({"abc": {"a": ["0.5","0","0"], "b": [0,0,0,0,0,0,0,0], "C": [[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0]]}});
        assert_eq!(StateFile::parse(&strings).unwrap().a[0], 0.5);
    }
}
