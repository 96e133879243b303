use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_WORD_LENGTH: usize = 8;

/// The three sector operators `α = a·σ⊗I`, `β = I⊗b·λ`, `γ = c·σ⊗λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Alpha,
    Beta,
    Gamma,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::Alpha, Letter::Beta, Letter::Gamma];

    pub fn greek(self) -> char {
        match self {
            Letter::Alpha => 'α',
            Letter::Beta => 'β',
            Letter::Gamma => 'γ',
        }
    }

    pub fn ascii(self) -> char {
        match self {
            Letter::Alpha => 'a',
            Letter::Beta => 'b',
            Letter::Gamma => 'c',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'a' | 'A' | 'α' => Some(Letter::Alpha),
            'b' | 'B' | 'β' => Some(Letter::Beta),
            'c' | 'C' | 'g' | 'G' | 'γ' => Some(Letter::Gamma),
            _ => None,
        }
    }
}

/// A word over `{α, β, γ}` in canonical form: the lexicographic minimum of its
/// class under cyclic rotation and swapping cyclically adjacent `αβ`/`βα`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord {
    letters: Vec<Letter>,
}

fn neighbours(w: &[Letter]) -> Vec<Vec<Letter>> {
    let n = w.len();
    let mut out = Vec::with_capacity(n + 1);
    if n > 1 {
        let mut r = w[1..].to_vec();
        r.push(w[0]);
        out.push(r);
    }
    for i in 0..n {
        let j = (i + 1) % n;
        if i != j && matches!((w[i], w[j]), (Letter::Alpha, Letter::Beta) | (Letter::Beta, Letter::Alpha)) {
            let mut s = w.to_vec();
            s.swap(i, j);
            out.push(s);
        }
    }
    out
}

/// Every word equivalent to `letters`, found by breadth-first search.
pub fn equivalence_class(letters: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([letters.to_vec()]);
    let mut queue = VecDeque::from([letters.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for v in neighbours(&w) {
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().collect()
}

impl TraceWord {
    /// Canonical representative of the class of `letters`.
    pub fn new(letters: &[Letter]) -> Result<Self> {
        if letters.is_empty() || letters.len() > MAX_WORD_LENGTH {
            return Err(Error::InvalidParameter(format!(
                "word length {} outside 1..={MAX_WORD_LENGTH}",
                letters.len()
            )));
        }
        let canonical = equivalence_class(letters).into_iter().next().expect("class contains the word itself");
        Ok(Self { letters: canonical })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    /// `(s, t, q)` = numbers of `α`, `β`, `γ`.
    pub fn multidegree(&self) -> (usize, usize, usize) {
        let count = |l| self.letters.iter().filter(|&&x| x == l).count();
        (count(Letter::Alpha), count(Letter::Beta), count(Letter::Gamma))
    }

    pub fn ascii(&self) -> String {
        self.letters.iter().map(|l| l.ascii()).collect()
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let run = self.letters[i..].iter().take_while(|&&x| x == l).count();
            write!(f, "{}", l.greek())?;
            if run > 1 {
                write!(f, "{}", SUPERSCRIPTS[run])?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for TraceWord {
    type Err = Error;

    /// Accepts `aabc`, `ααβγ` (with `c`/`g` for `γ`); superscripts are not parsed.
    fn from_str(s: &str) -> Result<Self> {
        let letters: Option<Vec<Letter>> = s.chars().map(Letter::from_char).collect();
        match letters {
            Some(l) => TraceWord::new(&l),
            None => Err(Error::InvalidParameter(format!("cannot parse trace word `{s}`"))),
        }
    }
}

impl Serialize for TraceWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All canonical words of length `d`, sorted.
pub fn enumerate_words(d: usize) -> Result<Vec<TraceWord>> {
    if !(1..=MAX_WORD_LENGTH).contains(&d) {
        return Err(Error::InvalidParameter(format!("degree {d} outside 1..={MAX_WORD_LENGTH}")));
    }
    let mut reps = BTreeSet::new();
    let mut word = vec![Letter::Alpha; d];
    let total = 3usize.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        for slot in word.iter_mut() {
            *slot = Letter::ALL[c % 3];
            c /= 3;
        }
        reps.insert(TraceWord::new(&word)?);
    }
    Ok(reps.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TraceWord {
        s.parse().unwrap()
    }

    #[test]
    fn word_counts() {
        assert_eq!(enumerate_words(1).unwrap().len(), 3);
        assert_eq!(enumerate_words(2).unwrap().len(), 6);
        assert_eq!(enumerate_words(4).unwrap().len(), 18);
        assert!(enumerate_words(0).is_err());
        assert!(enumerate_words(9).is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(w("bca"), w("abc"));
        assert_eq!(w("cab").ascii(), "abc");
        // αβ commute, so βαγγ ~ αβγγ
        assert_eq!(w("bacc"), w("abcc"));
        // γ does not commute with anything
        assert_ne!(w("acbc"), w("abcc"));
        // the swap wraps around the cyclic end
        assert_eq!(w("bcca"), w("abcc"));
    }

    #[test]
    fn display_and_multidegree() {
        assert_eq!(w("aaab").to_string(), "α³β");
        assert_eq!(w("acac").to_string(), "αγαγ");
        assert_eq!(w("bcc").multidegree(), (0, 1, 2));
        assert!("xyz".parse::<TraceWord>().is_err());
        assert_eq!("ααβγ".parse::<TraceWord>().unwrap(), w("aabc"));
    }
}
