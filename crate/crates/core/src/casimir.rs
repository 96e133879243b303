//! Casimir invariants of `ω = nρ − I`, characteristic-polynomial coefficients of
//! `ρ` and the semi-positivity conditions written both ways.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::states::{kappa, QubitQutritState};
use crate::su_algebra::StructureConstants;

/// Absolute tolerance for every inequality verdict.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Eigenvalue threshold of the PSD oracle that the `S_k` verdict is compared against.
pub const ORACLE_EIGENVALUE_TOLERANCE: f64 = 1e-8;

/// `ω` must be traceless to this tolerance.
pub const TRACELESS_TOLERANCE: f64 = 1e-9;

/// `E_k = slope · S̄_k + intercept` for `k = 2..6`, determined once by exact
/// expansion and kept as a regression constant.
pub const EXPRESSION_AFFINE: [(f64, f64); 5] = [(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, 0.0)];

/// `(u ∨ v)_a = κ d_abc u_b v_c`
pub fn vee(u: &[f64], v: &[f64], sc: &StructureConstants) -> Result<Vec<f64>> {
    let dim = sc.dim();
    for len in [u.len(), v.len()] {
        if len != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: len });
        }
    }
    let k = kappa(sc.n());
    Ok(sc.contract_d(u, v).into_iter().map(|x| k * x).collect())
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `(k−1)! / ((n−1)(n−2)⋯(n−k+1))`
pub fn normalization_factor(n: usize, k: usize) -> f64 {
    let mut f = 1.0;
    for j in 1..k {
        f *= j as f64 / (n - j) as f64;
    }
    f
}

/// Raw Casimirs `𝔠₂…𝔠₆` and their normalized forms `C₂…C₆`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirValues {
    pub n: usize,
    pub raw: [f64; 5],
    pub normalized: [f64; 5],
}

impl CasimirValues {
    pub fn from_raw(n: usize, raw: [f64; 5]) -> Self {
        let mut normalized = [0.0; 5];
        for (i, (c, r)) in normalized.iter_mut().zip(&raw).enumerate() {
            *c = normalization_factor(n, i + 2) * r;
        }
        Self { n, raw, normalized }
    }

    /// `𝔠_k` for `k ∈ 2..=6`.
    pub fn raw_k(&self, k: usize) -> f64 {
        self.raw[k - 2]
    }

    /// `C_k` for `k ∈ 2..=6`.
    pub fn c(&self, k: usize) -> f64 {
        self.normalized[k - 2]
    }
}

/// `tr ω^k` for `k = 1..=6`.
fn power_traces(omega: &CMatrix) -> [f64; 6] {
    let mut out = [0.0; 6];
    let mut p = omega.clone();
    out[0] = linalg::trace(&p).re;
    for slot in out.iter_mut().skip(1) {
        p = &p * omega;
        *slot = linalg::trace(&p).re;
    }
    out
}

/// Inverts the trace relations `tr ω² = n𝔠₂, …, tr ω⁶ = n(𝔠₂³ + 2𝔠₂𝔠₄ + 𝔠₃² + 𝔠₆)`.
pub fn casimirs_from_omega(omega: &CMatrix) -> Result<CasimirValues> {
    let n = omega.nrows();
    let herm = linalg::hermitian_deviation(omega);
    if herm > TRACELESS_TOLERANCE {
        return Err(Error::NotHermitian(herm));
    }
    let t = power_traces(omega);
    if t[0].abs() > TRACELESS_TOLERANCE {
        return Err(Error::NotTraceless(t[0].abs()));
    }
    let nf = n as f64;
    let c2 = t[1] / nf;
    let c3 = t[2] / nf;
    let c4 = t[3] / nf - c2 * c2;
    let c5 = t[4] / nf - 2.0 * c2 * c3;
    let c6 = t[5] / nf - c2.powi(3) - 2.0 * c2 * c4 - c3 * c3;
    Ok(CasimirValues::from_raw(n, [c2, c3, c4, c5, c6]))
}

/// Trace route from a density matrix: `ω = nρ − I`.
pub fn casimirs_from_matrix(rho: &CMatrix) -> Result<CasimirValues> {
    let n = rho.nrows();
    let omega = rho * Complex64::new(n as f64, 0.0) - linalg::identity(n);
    casimirs_from_omega(&omega)
}

pub fn casimirs_from_traces(state: &QubitQutritState) -> Result<CasimirValues> {
    casimirs_from_omega(&state.omega())
}

/// Vee route. `𝔠₆` is taken in the left-associated reading `(n−1)|(ξ∨ξ)∨ξ|²`.
pub fn casimirs_from_vee(xi: &[f64], sc: &StructureConstants) -> Result<CasimirValues> {
    let m = (sc.n() - 1) as f64;
    let x2 = vee(xi, xi, sc)?;
    let x4 = vee(&x2, &x2, sc)?;
    let x3 = vee(&x2, xi, sc)?;
    let raw = [
        m * dot(xi, xi),
        m * dot(&x2, xi),
        m * dot(&x2, &x2),
        m * dot(&x4, xi),
        m * dot(&x3, &x3),
    ];
    Ok(CasimirValues::from_raw(sc.n(), raw))
}

/// Both routes side by side with the per-`k` discrepancy.
#[derive(Debug, Clone, Serialize)]
pub struct RouteComparison {
    pub traces: CasimirValues,
    pub vee: CasimirValues,
    pub discrepancy: [f64; 5],
}

impl RouteComparison {
    pub fn max_discrepancy(&self) -> f64 {
        self.discrepancy.iter().copied().fold(0.0, f64::max)
    }
}

pub fn compare_routes(state: &QubitQutritState, sc: &StructureConstants) -> Result<RouteComparison> {
    let traces = casimirs_from_traces(state)?;
    let vee = casimirs_from_vee(&state.to_bloch().xi, sc)?;
    let mut discrepancy = [0.0; 5];
    for (d, (a, b)) in discrepancy.iter_mut().zip(traces.raw.iter().zip(&vee.raw)) {
        *d = (a - b).abs();
    }
    Ok(RouteComparison { traces, vee, discrepancy })
}

/// Moments `t_k = tr ρ^k`, `k = 1..=6`.
pub fn moments(rho: &CMatrix) -> [f64; 6] {
    power_traces(rho)
}

/// Characteristic-polynomial coefficients `S₁…S_m` from moments via
/// `k S_k = Σ_{i=1..k} (−1)^{i−1} S_{k−i} t_i`.
pub fn char_poly_coeffs(t: &[f64]) -> Vec<f64> {
    let mut s = vec![1.0];
    for k in 1..=t.len() {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * s[k - i] * t[i - 1];
        }
        s.push(acc / k as f64);
    }
    s.remove(0);
    s
}

/// `S_k = det(M_k)/k!` where `M_k[i][j] = t_{i−j+1}` for `j ≤ i`,
/// `M_k[i][i+1] = i` on the superdiagonal and zero elsewhere (1-based indices).
pub fn char_poly_coeffs_det(t: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(t.len());
    let mut factorial = 1.0;
    for k in 1..=t.len() {
        factorial *= k as f64;
        let m = DMatrix::from_fn(k, k, |i, j| {
            if j <= i {
                t[i - j]
            } else if j == i + 1 {
                (i + 1) as f64
            } else {
                0.0
            }
        });
        out.push(m.determinant() / factorial);
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `max S_k = binom(n, n−k) / n^k`, reached by the maximally mixed state.
pub fn max_s(n: usize, k: usize) -> f64 {
    binomial(n as u64, (n - k) as u64) as f64 / (n as f64).powi(k as i32)
}

/// The five bracketed expressions of the inequality system in `C₂…C₆`.
pub fn casimir_expressions(c: &CasimirValues) -> [f64; 5] {
    let (c2, c3, c4, c5, c6) = (c.c(2), c.c(3), c.c(4), c.c(5), c.c(6));
    [
        c2,
        3.0 * c2 - c3,
        6.0 * c2 - 5.0 * c2 * c2 - 4.0 * c3 + c4,
        (1.0 - 5.0 * c2).powi(2) - 30.0 * c2 * c3 + 10.0 * c3 - 5.0 * c4 + c5,
        (1.0 - 5.0 * c2).powi(3) - 180.0 * c2 * c3 + 125.0 * c2 * c4 + 20.0 * c3 * (1.0 + 5.0 * c3) - 15.0 * c4
            + 6.0 * c5
            - c6,
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub t: [f64; 6],
    #[serde(rename = "S")]
    pub s: [f64; 6],
    #[serde(rename = "S_bar")]
    pub s_bar: [f64; 5],
    pub casimir_exprs: [f64; 5],
    /// `S_k ≥ −tol` for `k = 1..6`.
    #[serde(rename = "verdict_S")]
    pub verdict_s: [bool; 6],
    /// `−tol ≤ E_k ≤ 1 + tol` for `k = 2..6`.
    pub verdict_casimir: [bool; 5],
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
}

impl PositivityReport {
    pub fn psd_by_s(&self) -> bool {
        self.verdict_s.iter().all(|&v| v)
    }

    pub fn psd_by_casimir(&self) -> bool {
        self.verdict_casimir.iter().all(|&v| v)
    }

    /// Whether the `S_k` verdict matches the eigenvalue oracle `λ_min ≥ −1e-8`.
    /// `None` unless the report was built with eigenvalues.
    pub fn agrees_with_oracle(&self) -> Option<bool> {
        let ev = self.eigenvalues.as_ref()?;
        let oracle = ev.iter().copied().fold(f64::INFINITY, f64::min) >= -ORACLE_EIGENVALUE_TOLERANCE;
        Some(oracle == self.psd_by_s())
    }

    /// Both verdicts pass.
    pub fn passed(&self) -> bool {
        self.psd_by_s() && self.psd_by_casimir()
    }
}

/// Full report for a Hermitian unit-trace 6×6 matrix (not required to be PSD).
pub fn positivity_report_matrix(rho: &CMatrix, with_eigenvalues: bool) -> Result<PositivityReport> {
    if rho.nrows() != 6 || rho.ncols() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, got: rho.nrows() });
    }
    let herm = linalg::hermitian_deviation(rho);
    if herm > crate::states::INPUT_TOLERANCE {
        return Err(Error::NotHermitian(herm));
    }
    let tr = (linalg::trace(rho).re - 1.0).abs();
    if tr > crate::states::INPUT_TOLERANCE {
        return Err(Error::WrongTrace(tr));
    }
    let t = moments(rho);
    let s_vec = char_poly_coeffs(&t);
    let mut s = [0.0; 6];
    s.copy_from_slice(&s_vec);
    let mut s_bar = [0.0; 5];
    for (k, sb) in (2..=6).zip(s_bar.iter_mut()) {
        *sb = s[k - 1] / max_s(6, k);
    }
    let casimirs = casimirs_from_matrix(rho)?;
    let casimir_exprs = casimir_expressions(&casimirs);
    let verdict_s = s.map(|x| x >= -BOUNDARY_TOLERANCE);
    let verdict_casimir = casimir_exprs.map(|e| (-BOUNDARY_TOLERANCE..=1.0 + BOUNDARY_TOLERANCE).contains(&e));
    let consistent = verdict_s.iter().all(|&v| v) == verdict_casimir.iter().all(|&v| v);
    let eigenvalues = with_eigenvalues.then(|| linalg::hermitian_eigenvalues(rho));
    Ok(PositivityReport { t, s, s_bar, casimir_exprs, verdict_s, verdict_casimir, consistent, eigenvalues })
}

pub fn positivity_report(state: &QubitQutritState) -> Result<PositivityReport> {
    positivity_report_matrix(&state.to_matrix(), false)
}
