use nalgebra::Matrix6;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::words::{Letter, TraceWord};
use crate::error::Result;
use crate::states::{self, Ensemble, QubitQutritState};

pub type Matrix6c = Matrix6<Complex64>;

/// Imaginary residue above which an evaluation is flagged.
pub const IMAGINARY_TOLERANCE: f64 = 1e-9;

/// Seed of the default 200-state evaluation panel.
pub const DEFAULT_PANEL_SEED: u64 = 0x5eed_0200;
pub const DEFAULT_PANEL_SIZE: usize = 200;

fn fixed(m: &crate::linalg::CMatrix) -> Matrix6c {
    Matrix6c::from_fn(|i, j| m[(i, j)])
}

/// `α`, `β`, `γ` of a state as fixed-size 6×6 matrices.
#[derive(Debug, Clone)]
pub struct LocalOperators {
    pub alpha: Matrix6c,
    pub beta: Matrix6c,
    pub gamma: Matrix6c,
}

impl LocalOperators {
    pub fn new(state: &QubitQutritState) -> Self {
        let (a, b, c) = state.sectors();
        Self { alpha: fixed(&a), beta: fixed(&b), gamma: fixed(&c) }
    }

    pub fn letter(&self, l: Letter) -> &Matrix6c {
        match l {
            Letter::Alpha => &self.alpha,
            Letter::Beta => &self.beta,
            Letter::Gamma => &self.gamma,
        }
    }

    /// Complex trace of the word's product.
    pub fn trace(&self, word: &TraceWord) -> Complex64 {
        let letters = word.letters();
        let mut m = *self.letter(letters[0]);
        for &l in &letters[1..] {
            m *= self.letter(l);
        }
        m.trace()
    }

    /// `Re tr(w)` for a word given by its ASCII letters; for relation checks.
    pub fn tr(&self, word: &str) -> f64 {
        self.trace(&word.parse().expect("static word")).re
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantValue {
    pub word: TraceWord,
    pub multidegree: (usize, usize, usize),
    pub value: f64,
    pub imaginary: f64,
    pub flagged: bool,
}

pub fn eval_trace_ops(word: &TraceWord, ops: &LocalOperators) -> InvariantValue {
    let t = ops.trace(word);
    InvariantValue {
        word: word.clone(),
        multidegree: word.multidegree(),
        value: t.re,
        imaginary: t.im,
        flagged: t.im.abs() > IMAGINARY_TOLERANCE,
    }
}

/// Real part of `tr(w)` on `state`, with the imaginary residue reported and flagged.
pub fn eval_trace(word: &TraceWord, state: &QubitQutritState) -> InvariantValue {
    eval_trace_ops(word, &LocalOperators::new(state))
}

/// A seeded collection of random Ginibre states and their sector operators.
#[derive(Debug, Clone)]
pub struct Panel {
    pub seed: u64,
    pub states: Vec<QubitQutritState>,
    pub operators: Vec<LocalOperators>,
}

impl Panel {
    pub fn new(seed: u64, size: usize) -> Result<Self> {
        let mut rng = states::rng_from_seed(seed);
        let states = (0..size)
            .map(|_| states::random_density_with(Ensemble::GinibreFullRank, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_states(seed, states))
    }

    pub fn from_states(seed: u64, states: Vec<QubitQutritState>) -> Self {
        let operators = states.par_iter().map(LocalOperators::new).collect();
        Self { seed, states, operators }
    }

    pub fn default_panel() -> Self {
        Self::new(DEFAULT_PANEL_SEED, DEFAULT_PANEL_SIZE).expect("default ensemble is valid")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `max_s f(s)` over the panel, evaluated in parallel.
    pub fn max_over<F>(&self, f: F) -> f64
    where
        F: Fn(&QubitQutritState, &LocalOperators) -> f64 + Sync,
    {
        self.states
            .par_iter()
            .zip(self.operators.par_iter())
            .map(|(s, o)| f(s, o))
            .reduce(|| 0.0, f64::max)
    }
}

/// State with `a, b, C` drawn uniformly from `[−r, r]`; not necessarily positive.
pub fn random_parameters<R: Rng + ?Sized>(rng: &mut R, r: f64) -> [f64; 35] {
    let mut p = [0.0; 35];
    for x in p.iter_mut() {
        *x = rng.random_range(-r..=r);
    }
    p
}
