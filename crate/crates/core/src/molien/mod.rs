//! Molien–Poincaré series of invariant rings under a local unitary group,
//! computed exactly as torus constant terms, plus the rational forms they are
//! compared against.

pub mod laurent;
pub mod rational;
pub mod series;
pub mod weights;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

pub use laurent::LaurentPoly;
pub use rational::{palindromy_check, rational_series, RationalForm};
pub use series::TruncatedTorusSeries;
pub use weights::{adjoint_weight_system, GroupSpec, WeightSystem};

/// Largest degree computed unless the caller raises the cap.
pub const DEFAULT_DEGREE_CAP: usize = 20;

/// Integration measure used for the constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// `(1/|W|)·CT[Π_{all roots}(1 − x^α)·…]`
    #[default]
    Weyl,
    /// `CT[Π_{α>0}(1 − x^{−α})·…]` — valid because the integrand is Weyl-invariant.
    Reduced,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weyl" => Ok(Backend::Weyl),
            "reduced" => Ok(Backend::Reduced),
            _ => Err(Error::InvalidParameter(format!("unknown backend `{s}` (expected weyl or reduced)"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Weyl => "weyl",
            Backend::Reduced => "reduced",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MolienOptions {
    pub cap: usize,
    pub backend: Backend,
}

impl Default for MolienOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_DEGREE_CAP, backend: Backend::Weyl }
    }
}

/// `c₀…c_N` with the default cap and the Weyl backend.
pub fn molien_series(ws: &WeightSystem, max_degree: usize) -> Result<Vec<BigInt>> {
    molien_series_with(ws, max_degree, MolienOptions::default())
}

pub fn molien_series_with(ws: &WeightSystem, max_degree: usize, options: MolienOptions) -> Result<Vec<BigInt>> {
    if max_degree > options.cap {
        return Err(Error::ResourceCap { requested: max_degree, cap: options.cap });
    }
    let series = TruncatedTorusSeries::from_weights(ws.rank, &ws.integrand_weights(), max_degree);
    let (measure, divisor) = match options.backend {
        Backend::Weyl => (LaurentPoly::product_one_minus(ws.rank, &ws.roots), BigInt::from(ws.weyl_order)),
        Backend::Reduced => {
            let negated: Vec<Vec<i32>> =
                ws.positive_roots().iter().map(|r| r.iter().map(|x| -x).collect()).collect();
            (LaurentPoly::product_one_minus(ws.rank, &negated), BigInt::from(1))
        }
    };
    (0..=max_degree)
        .map(|d| {
            let ct = series.constant_term_with(d, &measure);
            let (quotient, remainder) = (&ct / &divisor, &ct % &divisor);
            if !remainder.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "constant term {ct} at degree {d} is not divisible by |W| = {divisor}"
                )));
            }
            Ok(quotient)
        })
        .collect()
}
