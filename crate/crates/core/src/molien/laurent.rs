use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sparse Laurent polynomial in `rank` variables with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], BigInt::one())
    }

    pub fn monomial(exponent: Vec<i32>, coeff: BigInt) -> Self {
        let rank = exponent.len();
        let mut p = Self::zero(rank);
        p.add_term(exponent, coeff);
        p
    }

    /// `1 − x^α`
    pub fn one_minus(alpha: &[i32]) -> Self {
        let mut p = Self::one(alpha.len());
        p.add_term(alpha.to_vec(), -BigInt::one());
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &[i32]) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.rank])
    }

    pub fn add_term(&mut self, exponent: Vec<i32>, coeff: BigInt) {
        assert_eq!(exponent.len(), self.rank, "exponent rank");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut out = Self::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Product of `1 − x^α` over the given exponent vectors.
    pub fn product_one_minus<'a>(rank: usize, alphas: impl IntoIterator<Item = &'a Vec<i32>>) -> Self {
        alphas.into_iter().fold(Self::one(rank), |acc, a| acc.mul(&Self::one_minus(a)))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}·x^{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let p = LaurentPoly::one_minus(&[1]).mul(&LaurentPoly::one_minus(&[-1]));
        // (1 − x)(1 − 1/x) = 2 − x − 1/x
        assert_eq!(p.constant_term(), BigInt::from(2));
        assert_eq!(p.coeff(&[1]), BigInt::from(-1));
        assert_eq!(p.len(), 3);
        let mut q = LaurentPoly::one(1);
        q.add_term(vec![0], BigInt::from(-1));
        assert!(q.is_empty());
    }
}
