use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::laurent::LaurentPoly;

// Below this many cells the per-degree update runs serially.
const PARALLEL_MIN_CELLS: usize = 4096;

/// `Π_w 1/(1 − q·x^w)` truncated at `q^N`, one dense Laurent box per q-degree.
///
/// Every exponent coordinate of the degree-`d` coefficient is bounded by
/// `d·max|w|`, so a single box of radius `N·max|w|` holds all degrees.
#[derive(Debug, Clone)]
pub struct TruncatedTorusSeries {
    rank: usize,
    max_q_degree: usize,
    radius: i32,
    side: usize,
    coeffs: Vec<Vec<BigInt>>,
}

impl TruncatedTorusSeries {
    /// The series `1` (no factors yet).
    pub fn unit(rank: usize, max_q_degree: usize, max_weight: i32) -> Self {
        let radius = max_q_degree as i32 * max_weight;
        let side = (2 * radius + 1) as usize;
        let cells = side.pow(rank as u32);
        let mut coeffs = vec![vec![BigInt::zero(); cells]; max_q_degree + 1];
        let origin = vec![0; rank];
        let centre = Self::index_in(side, radius, &origin).expect("origin is inside the box");
        coeffs[0][centre] = BigInt::one();
        Self { rank, max_q_degree, radius, side, coeffs }
    }

    /// Builds the full product over `weights`.
    pub fn from_weights(rank: usize, weights: &[Vec<i32>], max_q_degree: usize) -> Self {
        let max_weight = weights.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
        let mut series = Self::unit(rank, max_q_degree, max_weight);
        for w in weights {
            series.multiply_geometric(w);
        }
        series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_q_degree(&self) -> usize {
        self.max_q_degree
    }

    pub fn radius(&self) -> i32 {
        self.radius
    }

    fn index_in(side: usize, radius: i32, exponent: &[i32]) -> Option<usize> {
        let mut idx = 0usize;
        for &e in exponent.iter().rev() {
            if e.abs() > radius {
                return None;
            }
            idx = idx * side + (e + radius) as usize;
        }
        Some(idx)
    }

    fn coordinates(&self, mut idx: usize) -> Vec<i32> {
        (0..self.rank)
            .map(|_| {
                let c = (idx % self.side) as i32 - self.radius;
                idx /= self.side;
                c
            })
            .collect()
    }

    /// Coefficient of `q^d x^e`.
    pub fn coeff(&self, d: usize, exponent: &[i32]) -> BigInt {
        Self::index_in(self.side, self.radius, exponent)
            .map(|i| self.coeffs[d][i].clone())
            .unwrap_or_default()
    }

    /// Coefficient of `q^d` as a sparse Laurent polynomial.
    pub fn degree(&self, d: usize) -> LaurentPoly {
        let mut p = LaurentPoly::zero(self.rank);
        for (i, c) in self.coeffs[d].iter().enumerate() {
            if !c.is_zero() {
                p.add_term(self.coordinates(i), c.clone());
            }
        }
        p
    }

    /// Multiplies in `1/(1 − q·x^w)`.
    ///
    /// Updating degrees in ascending order, `G_d += x^w·G_{d−1}` sees the
    /// already-updated `G_{d−1}`, which is exactly the geometric series.
    pub fn multiply_geometric(&mut self, w: &[i32]) {
        assert_eq!(w.len(), self.rank, "weight rank");
        let offsets: Vec<i32> = w.to_vec();
        let (side, radius, rank) = (self.side, self.radius, self.rank);
        for d in 1..=self.max_q_degree {
            let (lo, hi) = self.coeffs.split_at_mut(d);
            let prev = &lo[d - 1];
            let cur = &mut hi[0];
            let update = |(idx, c): (usize, &mut BigInt)| {
                let mut rest = idx;
                let mut src = 0usize;
                let mut stride = 1usize;
                for k in 0..rank {
                    let coord = (rest % side) as i32 - radius - offsets[k];
                    rest /= side;
                    if coord.abs() > radius {
                        return;
                    }
                    src += (coord + radius) as usize * stride;
                    stride *= side;
                }
                let s = &prev[src];
                if !s.is_zero() {
                    *c += s;
                }
            };
            if cur.len() >= PARALLEL_MIN_CELLS {
                cur.par_iter_mut().enumerate().with_min_len(1024).for_each(update);
            } else {
                cur.iter_mut().enumerate().for_each(update);
            }
        }
    }

    /// Constant term of `R(x)·G_d(x)`, i.e. `Σ_m R_m·G_d[−m]`.
    pub fn constant_term_with(&self, d: usize, r: &LaurentPoly) -> BigInt {
        r.terms()
            .map(|(m, c)| {
                let neg: Vec<i32> = m.iter().map(|x| -x).collect();
                Self::index_in(self.side, self.radius, &neg)
                    .map(|i| c * &self.coeffs[d][i])
                    .unwrap_or_default()
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_factor_is_geometric() {
        let s = TruncatedTorusSeries::from_weights(1, &[vec![1]], 5);
        for d in 0..=5 {
            assert_eq!(s.coeff(d, &[d as i32]), BigInt::one());
            assert_eq!(s.degree(d).len(), 1);
        }
    }

    #[test]
    fn opposite_pair() {
        // 1/((1 − qx)(1 − q/x)) at q²: x² + 1 + x⁻²
        let s = TruncatedTorusSeries::from_weights(1, &[vec![1], vec![-1]], 3);
        let p = s.degree(2);
        assert_eq!(p.len(), 3);
        assert_eq!(p.constant_term(), BigInt::one());
        assert_eq!(s.degree(0), LaurentPoly::one(1));
    }
}
