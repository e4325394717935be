//! Words over the standard generating set x0, x1, x2, … of F.
//!
//! A [`GroupWord`] is a formal product of letters `x<i>^<e>`. Its letters can
//! be read over the standard generators ([`GroupWord::evaluate`]) or over any
//! supplied list of elements ([`GroupWord::evaluate_over`]), which is how
//! generation certificates express witnesses as words in the input tuple.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::Element;

/// The generator x0, with branch pairs 00 -> 0, 01 -> 10, 1 -> 11.
pub fn x0() -> Element {
    "11000,10100".parse().expect("fixed table")
}

/// The generator x1, with branch pairs 0 -> 0, 100 -> 10, 101 -> 110,
/// 11 -> 111.
pub fn x1() -> Element {
    "1011000,1010100".parse().expect("fixed table")
}

/// The generator x_i; for i >= 2 this is x0^-(i-1) x1 x0^(i-1).
pub fn xi(i: u32) -> Element {
    match i {
        0 => x0(),
        1 => x1(),
        _ => {
            let shift = x0().pow(i as i64 - 1);
            shift.invert().multiply(&x1()).multiply(&shift)
        }
    }
}

/// Evaluate a word over the standard generators.
pub fn from_group_word(word: &GroupWord) -> Element {
    word.evaluate()
}

/// A formal product of powers of indexed generators.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    letters: Vec<(u32, i64)>,
}

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord::default()
    }

    pub fn new(letters: Vec<(u32, i64)>) -> Self {
        let mut word = GroupWord::empty();
        for (index, exponent) in letters {
            word.push_letter(index, exponent);
        }
        word
    }

    /// Append one letter, merging with the tail when indices match.
    pub fn push_letter(&mut self, index: u32, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == index {
                last.1 += exponent;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((index, exponent));
    }

    pub fn letters(&self) -> &[(u32, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Evaluate over the standard generators x0, x1, x2, ….
    pub fn evaluate(&self) -> Element {
        let mut acc = Element::identity();
        for &(index, exponent) in &self.letters {
            acc = acc.multiply(&xi(index).pow(exponent));
        }
        acc
    }

    /// Evaluate reading index i as `gens[i]`. `None` when an index is out of
    /// range.
    pub fn evaluate_over(&self, gens: &[Element]) -> Option<Element> {
        let mut acc = Element::identity();
        for &(index, exponent) in &self.letters {
            let base = gens.get(index as usize)?;
            acc = acc.multiply(&base.pow(exponent));
        }
        Some(acc)
    }

    /// Render with a custom generator symbol, e.g. `g0 g1^-1` for words over
    /// an input tuple.
    pub fn to_string_with(&self, symbol: &str) -> String {
        if self.letters.is_empty() {
            return String::from("<empty>");
        }
        let mut out = String::new();
        for (i, &(index, exponent)) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(symbol);
            out.push_str(&index.to_string());
            if exponent != 1 {
                out.push('^');
                out.push_str(&exponent.to_string());
            }
        }
        out
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return Ok(());
        }
        f.write_str(&self.to_string_with("x"))
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupWordParseError {
    #[error("bad token {token:?}: expected x<index> or x<index>^<exponent>")]
    BadToken { token: String },
    #[error("generator index does not fit in 32 bits in {token:?}")]
    BadIndex { token: String },
    #[error("exponent does not fit in 64 bits in {token:?}")]
    BadExponent { token: String },
}

impl FromStr for GroupWord {
    type Err = GroupWordParseError;

    /// Accepts whitespace-separated letters like `x0^2 x1^-1 x4`; an exponent
    /// of 1 may be omitted. The empty string is the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut word = GroupWord::empty();
        for token in s.split_whitespace() {
            let bad = || GroupWordParseError::BadToken {
                token: token.to_owned(),
            };
            let rest = token.strip_prefix('x').ok_or_else(bad)?;
            let (index_part, exp_part) = match rest.split_once('^') {
                Some((i, e)) => (i, Some(e)),
                None => (rest, None),
            };
            if index_part.is_empty() || !index_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let index: u32 =
                index_part
                    .parse()
                    .map_err(|_| GroupWordParseError::BadIndex {
                        token: token.to_owned(),
                    })?;
            let exponent: i64 = match exp_part {
                None => 1,
                Some(e) => {
                    let digits = e.strip_prefix('-').unwrap_or(e);
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(bad());
                    }
                    e.parse().map_err(|_| GroupWordParseError::BadExponent {
                        token: token.to_owned(),
                    })?
                }
            };
            word.push_letter(index, exponent);
        }
        Ok(word)
    }
}
