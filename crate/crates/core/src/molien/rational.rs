use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

/// Numerator of the two-qubit Molien function, `q⁰…q¹⁵`.
pub const TWO_QUBIT_NUMERATOR: [i64; 16] = [1, 0, 0, 0, 1, 1, 3, 2, 2, 3, 1, 1, 0, 0, 0, 1];

/// `(1−q²)³(1−q³)²(1−q⁴)³(1−q⁶)` as `(degree, multiplicity)`.
pub const TWO_QUBIT_DENOMINATOR: [(usize, usize); 4] = [(2, 3), (3, 2), (4, 3), (6, 1)];

/// Lower half `q⁰…q³⁸` of the qubit-qutrit numerator; the upper half follows by palindromy.
pub const QUBIT_QUTRIT_NUMERATOR_HALF: [i64; 38] = [
    1, 0, 0, 0, 4, 9, 38, 69, 173, 347, 733, 1403, 2796, 5091, 9286, 16058, 27208, 44250, 70537, 108430, 163158,
    238264, 339974, 472130, 641187, 848615, 1098643, 1388741, 1717327, 2075836, 2456389, 2843020, 3222408,
    3575226, 3884797, 4133599, 4308636, 4398377,
];

/// `(1−q²)³(1−q³)⁴(1−q⁴)⁵(1−q⁵)⁴(1−q⁶)⁵(1−q⁷)²(1−q⁸)`
pub const QUBIT_QUTRIT_DENOMINATOR: [(usize, usize); 7] = [(2, 3), (3, 4), (4, 5), (5, 4), (6, 5), (7, 2), (8, 1)];

/// Displayed qubit-qutrit Poincaré series, `q⁰…q¹⁶`.
pub const QUBIT_QUTRIT_POINCARE: [i64; 17] = [
    1, 0, 3, 4, 15, 25, 90, 170, 489, 1059, 2600, 5641, 12872, 27099, 57990, 118254, 240187,
];

/// `N(q) / Π(1 − q^{d_i})^{m_i}`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalForm {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<(usize, usize)>,
}

fn big(coeffs: &[i64]) -> Vec<BigInt> {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

impl RationalForm {
    pub fn new(numerator: Vec<BigInt>, denominator: Vec<(usize, usize)>) -> Self {
        Self { numerator, denominator }
    }

    pub fn two_qubit() -> Self {
        Self::new(big(&TWO_QUBIT_NUMERATOR), TWO_QUBIT_DENOMINATOR.to_vec())
    }

    /// The qubit-qutrit form with its numerator completed to `q⁷⁵` by palindromy.
    pub fn qubit_qutrit() -> Self {
        Self::new(palindromic_completion(&big(&QUBIT_QUTRIT_NUMERATOR_HALF)), QUBIT_QUTRIT_DENOMINATOR.to_vec())
    }

    pub fn series(&self, max_degree: usize) -> Vec<BigInt> {
        rational_series(&self.numerator, &self.denominator, max_degree)
    }

    pub fn is_palindromic(&self, sign: i32, top_degree: i64) -> bool {
        palindromy_check(&self.numerator, &self.denominator, sign, top_degree)
    }
}

/// `half` followed by its reverse: coefficients `0…2·len−1`.
pub fn palindromic_completion(half: &[BigInt]) -> Vec<BigInt> {
    half.iter().chain(half.iter().rev()).cloned().collect()
}

/// Exact Taylor coefficients `0…N` of `N(q)/Π(1 − q^d)^m`.
pub fn rational_series(numerator: &[BigInt], denominator: &[(usize, usize)], max_degree: usize) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = (0..=max_degree).map(|i| numerator.get(i).cloned().unwrap_or_default()).collect();
    for &(d, m) in denominator {
        assert!(d >= 1, "denominator degrees must be positive");
        for _ in 0..m {
            // multiply by 1/(1 − q^d)
            for k in d..=max_degree {
                let prev = c[k - d].clone();
                c[k] += prev;
            }
        }
    }
    c
}

/// Whether `M(1/q) = sign·q^D·M(q)` holds identically for `M = N/Π(1 − q^d)^m`.
///
/// With `T = Σ d·m` and `n = deg N`, `M(1/q) = (−1)^{Σm} q^{T−n} Ñ(q) / Π(1 − q^d)^m`
/// where `Ñ` is `N` reversed, so the check is the Laurent identity
/// `(−1)^{Σm} q^{T−n} Ñ = sign·q^D N`.
pub fn palindromy_check(numerator: &[BigInt], denominator: &[(usize, usize)], sign: i32, top_degree: i64) -> bool {
    let Some(n) = numerator.iter().rposition(|c| !c.is_zero()) else {
        // M ≡ 0 satisfies every such identity
        return true;
    };
    let t: i64 = denominator.iter().map(|&(d, m)| (d * m) as i64).sum();
    let parity: usize = denominator.iter().map(|&(_, m)| m).sum();
    let lhs_sign = if parity.is_multiple_of(2) { 1 } else { -1 };

    let mut lhs: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (i, c) in numerator[..=n].iter().enumerate() {
        if !c.is_zero() {
            // coefficient of q^i in Ñ is N_{n−i}
            lhs.insert(t - n as i64 + (n - i) as i64, c * lhs_sign);
        }
    }
    let rhs: BTreeMap<i64, BigInt> = numerator[..=n]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (top_degree + i as i64, c * sign))
        .collect();
    lhs == rhs
}
