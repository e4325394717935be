//! Finite binary words: addresses of dyadic subintervals of [0, 1].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A finite word over {0, 1}.
///
/// The word `w` addresses the standard dyadic interval `[0.w, 0.w + 2^-|w|]`;
/// the empty word addresses all of [0, 1]. Words double as root-to-leaf paths
/// in binary trees (0 = left, 1 = right).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord(Vec<bool>);

impl BinaryWord {
    pub fn empty() -> Self {
        BinaryWord(Vec::new())
    }

    /// The word `0^n`.
    pub fn zeros(n: usize) -> Self {
        BinaryWord(vec![false; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BinaryWord(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn concat(&self, tail: &BinaryWord) -> BinaryWord {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&tail.0);
        BinaryWord(bits)
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// The suffix `s` with `self = prefix · s`, if `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &BinaryWord) -> Option<BinaryWord> {
        if prefix.is_prefix_of(self) {
            Some(BinaryWord(self.0[prefix.len()..].to_vec()))
        } else {
            None
        }
    }

    /// The first `n` letters of `self · 0^∞`.
    pub fn take_padded(&self, n: usize) -> BinaryWord {
        let mut bits: Vec<bool> = self.0.iter().copied().take(n).collect();
        bits.resize(n, false);
        BinaryWord(bits)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordParseError {
    #[error("invalid character {ch:?} at position {pos}: binary words use only '0' and '1'")]
    InvalidBit { ch: char, pos: usize },
}

impl FromStr for BinaryWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(WordParseError::InvalidBit { ch, pos }),
            }
        }
        Ok(BinaryWord(bits))
    }
}
