//! Local SU(2)⊗SU(3) invariants built as traces of words in the sector
//! operators `α`, `β`, `γ`, and numerical checks of the relations among them.

pub mod checks;
pub mod eval;
pub mod rank;
pub mod words;

pub use checks::{
    casimir_decomposition_check, gamma3_formula_check, i004_identity_check, invariance_test, kernel_at_degree,
    multidegree_relations_check, sign_relation_check, CheckReport, Conjugation, InvariantSelector, KernelReport,
    RelationsReport,
};
pub use eval::{eval_trace, InvariantValue, LocalOperators, Panel};
pub use rank::{independence_evidence, listed_invariants, rank_at_degree, JacobianReport, RankReport};
pub use words::{enumerate_words, Letter, TraceWord};
