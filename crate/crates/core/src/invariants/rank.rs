use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::checks::kernel_words;
use super::eval::{random_parameters, LocalOperators, Panel, IMAGINARY_TOLERANCE};
use super::words::{enumerate_words, TraceWord, MAX_WORD_LENGTH};
use crate::error::{Error, Result};
use crate::linalg;
use crate::states::{self, Ensemble, QubitQutritState};

/// Relative singular-value cutoff, scaled by the larger matrix dimension.
pub const RANK_EPSILON: f64 = 1e-12;
pub const DEFAULT_RANK_SEED: u64 = 0x5eed_0004;
pub const DEFAULT_JACOBIAN_SEED: u64 = 0x5eed_0024;
pub const JACOBIAN_STEP: f64 = 1e-5;
pub const JACOBIAN_PARAMETER_RANGE: f64 = 0.3;

/// Which part of a complex trace a feature records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Re,
    Im,
}

/// A real-valued invariant: the real or imaginary part of a word's trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feature {
    pub word: TraceWord,
    pub part: Part,
}

impl Feature {
    pub fn real(word: TraceWord) -> Self {
        Self { word, part: Part::Re }
    }

    pub fn eval(&self, ops: &LocalOperators) -> f64 {
        let t = ops.trace(&self.word);
        match self.part {
            Part::Re => t.re,
            Part::Im => t.im,
        }
    }
}

/// Non-kernel words of degree `d`: `Re tr(w)` for each, plus `Im tr(w)` when it
/// does not vanish on the panel.
pub fn features_at_degree(d: usize, panel: &Panel) -> Result<Vec<Feature>> {
    let kernel = kernel_words(d, panel)?;
    let mut out = Vec::new();
    for w in enumerate_words(d)? {
        if kernel.contains(&w) {
            continue;
        }
        let imaginary = panel.max_over(|_, o| o.trace(&w).im.abs()) > IMAGINARY_TOLERANCE;
        out.push(Feature::real(w.clone()));
        if imaginary {
            out.push(Feature { word: w, part: Part::Im });
        }
    }
    Ok(out)
}

/// A candidate degree-`d` invariant: a product of one or more features.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub factors: Vec<Feature>,
}

impl Candidate {
    pub fn eval(&self, ops: &LocalOperators) -> f64 {
        self.factors.iter().map(|f| f.eval(ops)).product()
    }
}

// Partitions of `n` into parts ≥ `min`, non-decreasing.
fn partitions(n: usize, min: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in min..=n {
        for mut rest in partitions(n - p, p) {
            rest.insert(0, p);
            out.push(rest);
        }
    }
    out
}

fn push_products(parts: &[usize], by_degree: &[Vec<Feature>], start: usize, min_index: usize, acc: &mut Vec<Feature>, out: &mut Vec<Candidate>) {
    if start == parts.len() {
        out.push(Candidate { factors: acc.clone() });
        return;
    }
    let d = parts[start];
    // equal consecutive parts take non-decreasing feature indices (multisets)
    let lo = if start > 0 && parts[start - 1] == d { min_index } else { 0 };
    for i in lo..by_degree[d].len() {
        acc.push(by_degree[d][i].clone());
        push_products(parts, by_degree, start + 1, i, acc, out);
        acc.pop();
    }
}

/// Degree-`d` candidates: single features, and with `include_products` every
/// product of two or more lower-degree features of total degree `d`.
pub fn candidates_at_degree(d: usize, include_products: bool, panel: &Panel) -> Result<Vec<Candidate>> {
    let by_degree: Vec<Vec<Feature>> =
        (0..=d).map(|k| if k == 0 { Ok(Vec::new()) } else { features_at_degree(k, panel) }).collect::<Result<_>>()?;
    let mut out: Vec<Candidate> = by_degree[d].iter().map(|f| Candidate { factors: vec![f.clone()] }).collect();
    if include_products {
        for parts in partitions(d, 1).into_iter().filter(|p| p.len() >= 2) {
            push_products(&parts, &by_degree, 0, 0, &mut Vec::new(), &mut out);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub degree: usize,
    pub include_products: bool,
    pub candidates: usize,
    pub samples: usize,
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub seed: u64,
}

/// Numerical rank of the candidate evaluation matrix at `M ≥ 2·count` seeded states.
///
/// Columns are scaled to unit norm before the SVD; the kernel is taken from `panel`.
pub fn rank_at_degree(d: usize, include_products: bool, panel: &Panel, seed: u64) -> Result<RankReport> {
    if !(1..=6).contains(&d) {
        return Err(Error::InvalidParameter(format!("rank degree {d} outside 1..=6")));
    }
    let cands = candidates_at_degree(d, include_products, panel)?;
    let samples = (2 * cands.len()).max(cands.len() + 5);
    let mut rng = states::rng_from_seed(seed);
    let sample_states: Vec<QubitQutritState> = (0..samples)
        .map(|_| states::random_density_with(Ensemble::GinibreFullRank, &mut rng))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = sample_states
        .par_iter()
        .map(|s| {
            let ops = LocalOperators::new(s);
            cands.iter().map(|c| c.eval(&ops)).collect()
        })
        .collect();
    let mut m = DMatrix::from_fn(samples, cands.len(), |i, j| rows[i][j]);
    linalg::normalize_columns(&mut m);
    let (rank, singular_values) = linalg::numerical_rank(&m, RANK_EPSILON);
    Ok(RankReport { degree: d, include_products, candidates: cands.len(), samples, rank, singular_values, seed })
}

/// The fifteen degree-≤4 invariants that are not products of lower ones.
pub fn listed_invariants() -> Vec<TraceWord> {
    ["aa", "bb", "cc", "bbb", "ccc", "abc", "bcc", "cccc", "accc", "bccc", "acac", "bbcc", "bcbc", "abbc", "abcc"]
        .iter()
        .map(|w| w.parse().expect("static word"))
        .collect()
}

/// All features of degrees `1..=cap`.
pub fn features_up_to(cap: usize, panel: &Panel) -> Result<Vec<Feature>> {
    if !(1..=MAX_WORD_LENGTH).contains(&cap) {
        return Err(Error::InvalidParameter(format!("degree cap {cap} outside 1..={MAX_WORD_LENGTH}")));
    }
    let mut out = Vec::new();
    for d in 1..=cap {
        out.extend(features_at_degree(d, panel)?);
    }
    Ok(out)
}

fn eval_at(params: &[f64; 35], features: &[Feature]) -> Vec<f64> {
    let ops = LocalOperators::new(&QubitQutritState::from_params(params));
    features.iter().map(|f| f.eval(&ops)).collect()
}

/// Central-difference Jacobian (features × 35 parameters) at `params`.
pub fn jacobian(features: &[Feature], params: &[f64; 35], step: f64) -> DMatrix<f64> {
    let columns: Vec<Vec<f64>> = (0..35)
        .into_par_iter()
        .map(|k| {
            let (mut plus, mut minus) = (*params, *params);
            plus[k] += step;
            minus[k] -= step;
            let (fp, fm) = (eval_at(&plus, features), eval_at(&minus, features));
            fp.iter().zip(&fm).map(|(p, m)| (p - m) / (2.0 * step)).collect()
        })
        .collect();
    DMatrix::from_fn(features.len(), 35, |i, k| columns[k][i])
}

pub fn jacobian_rank(features: &[Feature], params: &[f64; 35]) -> (usize, Vec<f64>) {
    linalg::numerical_rank(&jacobian(features, params, JACOBIAN_STEP), RANK_EPSILON)
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobianReport {
    pub invariants: usize,
    pub points: usize,
    pub ranks: Vec<usize>,
    pub max_rank: usize,
    pub seed: u64,
}

/// Jacobian ranks of `features` at `points` parameter vectors uniform in `[−0.3, 0.3]`.
pub fn jacobian_evidence(features: &[Feature], points: usize, seed: u64) -> JacobianReport {
    let mut rng = states::rng_from_seed(seed);
    let ranks: Vec<usize> = (0..points)
        .map(|_| jacobian_rank(features, &random_parameters(&mut rng, JACOBIAN_PARAMETER_RANGE)).0)
        .collect();
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    JacobianReport { invariants: features.len(), points, ranks, max_rank, seed }
}

/// Jacobian evidence for every non-kernel invariant of degree `≤ degree_cap`.
pub fn independence_evidence(degree_cap: usize, points: usize, panel: &Panel, seed: u64) -> Result<JacobianReport> {
    if points < 1 {
        return Err(Error::InvalidParameter("at least one point is needed".into()));
    }
    Ok(jacobian_evidence(&features_up_to(degree_cap, panel)?, points, seed))
}
