//! Local unitary invariants, Casimir positivity conditions and Molien series
//! for mixed states of a qubit-qutrit pair.

pub mod casimir;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod molien;
pub mod selftest;
pub mod states;
pub mod su_algebra;

pub use casimir::{positivity_report, CasimirValues, PositivityReport};
pub use error::{Error, Result};
pub use states::{BlochState, QubitQutritState};
pub use su_algebra::{build_basis, structure_constants, BasisLabel, StructureConstants, SuBasis};
