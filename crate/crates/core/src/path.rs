//! Paths: cyclic words over `{1..=n+1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tableau::Letter;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    letters: Vec<Letter>,
    n: usize,
}

impl Path {
    pub fn new(letters: Vec<Letter>, n: usize) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Parse { column: 1, message: "empty path".into() });
        }
        if let Some(k) = letters.iter().position(|&x| x == 0 || x as usize > n + 1) {
            return Err(Error::Parse { column: k + 1, message: format!("letter {} outside 1..={}", letters[k], n + 1) });
        }
        Ok(Path { letters, n })
    }

    pub(crate) fn from_raw(letters: Vec<Letter>, n: usize) -> Self {
        Path { letters, n }
    }

    /// Parses a word of digits such as `11213122`.
    pub fn parse(word: &str, n: usize) -> Result<Self> {
        let letters = word
            .trim()
            .chars()
            .enumerate()
            .map(|(k, ch)| {
                ch.to_digit(10).map(|d| d as Letter).ok_or_else(|| Error::Parse {
                    column: k + 1,
                    message: format!("unexpected character {:?}", ch),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Path::new(letters, n)
    }

    pub fn all_ones(length: usize, n: usize) -> Self {
        Path { letters: vec![1; length], n }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `b_1 ... b_L -> b_L b_1 ... b_{L-1}`.
    pub fn cyclic_shift(&self) -> Path {
        let mut letters = self.letters.clone();
        letters.rotate_right(1);
        Path { letters, n: self.n }
    }

    pub fn rotate(&self, steps: usize) -> Path {
        let mut letters = self.letters.clone();
        let len = letters.len();
        letters.rotate_right(steps % len);
        Path { letters, n: self.n }
    }

    pub fn concat(&self, other: &Path) -> Path {
        assert_eq!(self.n, other.n);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Path { letters, n: self.n }
    }

    /// Counts `#(1) .. #(n+1)`.
    pub fn weights(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n + 1];
        for &x in &self.letters {
            counts[x as usize - 1] += 1;
        }
        counts
    }

    /// Every prefix has `#(1) >= #(2) >= ... >= #(n+1)`.
    pub fn is_highest(&self) -> bool {
        let mut counts = vec![0usize; self.n + 2];
        for &x in &self.letters {
            let a = x as usize;
            counts[a] += 1;
            if a > 1 && counts[a] > counts[a - 1] {
                return false;
            }
        }
        true
    }

    /// Weights weakly decreasing over the whole word.
    pub fn in_p(&self) -> bool {
        self.weights().windows(2).all(|w| w[0] >= w[1])
    }

    /// Letter 1 is weakly the most frequent.
    pub fn in_b1(&self) -> bool {
        let w = self.weights();
        w.iter().all(|&x| x <= w[0])
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.letters {
            write!(f, "{}", x)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path({})", self)
    }
}

/// Summary used by the CLI and tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStats {
    pub is_highest: bool,
    pub weights: Vec<usize>,
    pub in_p: bool,
}

pub fn path_stats(p: &Path) -> PathStats {
    PathStats { is_highest: p.is_highest(), weights: p.weights(), in_p: p.in_p() }
}

/// Every word of length `length` over `n + 1` letters, in lexicographic order.
pub fn all_words(length: usize, n: usize) -> impl Iterator<Item = Path> {
    let base = n + 1;
    let total = (base as u64).pow(length as u32);
    (0..total).map(move |mut code| {
        let mut letters = vec![1 as Letter; length];
        for k in (0..length).rev() {
            letters[k] = (code % base as u64) as Letter + 1;
            code /= base as u64;
        }
        Path { letters, n }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_stats() {
        let p = Path::parse("11213122", 2).unwrap();
        assert_eq!(p.cyclic_shift().to_string(), "21121312");
        let mut q = p.clone();
        for _ in 0..p.len() {
            q = q.cyclic_shift();
        }
        assert_eq!(q, p);
        assert!(Path::parse("111221113221132113311322", 2).unwrap().is_highest());
        assert!(!Path::parse("211332111321133112221112", 2).unwrap().is_highest());
        assert_eq!(Path::parse("211332111321133112221112", 2).unwrap().weights(), vec![12, 7, 5]);
    }

    #[test]
    fn parse_reports_column() {
        assert_eq!(Path::parse("1124", 2).unwrap_err(), Error::Parse { column: 4, message: "letter 4 outside 1..=3".into() });
        assert!(matches!(Path::parse("12a", 2), Err(Error::Parse { column: 3, .. })));
    }

    #[test]
    fn word_enumeration() {
        let words: Vec<String> = all_words(2, 1).map(|p| p.to_string()).collect();
        assert_eq!(words, ["11", "12", "21", "22"]);
    }
}
