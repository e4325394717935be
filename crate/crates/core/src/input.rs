//! Text input formats for elements and generator lists.
//!
//! Two element syntaxes are accepted everywhere, distinguished by the comma:
//! a serialized diagram `"11000,10100"`, or a word over the standard
//! generators `"x0^2 x1^-1"`. Lists put entries on separate lines or join
//! them with `;`; `#` starts a comment.
//!
//! Because word entries are *evaluated*, list parsing caps generator indices
//! and exponents ([`MAX_GENERATOR_INDEX`], [`MAX_EXPONENT`]) so that a short
//! hostile string like `x0^99999999` cannot demand a gigantic diagram.

use thiserror::Error;

use crate::diagram::{Element, ParseError};
use crate::group_word::{GroupWord, GroupWordParseError};

pub const MAX_GENERATOR_INDEX: u32 = 64;
pub const MAX_EXPONENT: i64 = 4096;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("empty element entry")]
    Empty,
    #[error(transparent)]
    Element(#[from] ParseError),
    #[error(transparent)]
    Word(#[from] GroupWordParseError),
    #[error("generator index {index} exceeds the input cap {max}")]
    IndexTooLarge { index: u32, max: u32 },
    #[error("exponent {exponent} exceeds the input cap ±{max}")]
    ExponentTooLarge { exponent: i64, max: i64 },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<InputError>,
    },
}

/// Parse one element entry in either syntax.
pub fn parse_element_input(text: &str) -> Result<Element, InputError> {
    let entry = text.trim();
    if entry.is_empty() {
        return Err(InputError::Empty);
    }
    if entry.contains(',') {
        return Ok(entry.parse::<Element>()?);
    }
    let word: GroupWord = entry.parse()?;
    for &(index, exponent) in word.letters() {
        if index > MAX_GENERATOR_INDEX {
            return Err(InputError::IndexTooLarge {
                index,
                max: MAX_GENERATOR_INDEX,
            });
        }
        if exponent.abs() > MAX_EXPONENT {
            return Err(InputError::ExponentTooLarge {
                exponent,
                max: MAX_EXPONENT,
            });
        }
    }
    Ok(word.evaluate())
}

/// Parse a generator list: one entry per line or `;`-separated, `#` comments.
pub fn parse_element_list(text: &str) -> Result<Vec<Element>, InputError> {
    let mut out = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        for entry in line.split(';') {
            if entry.trim().is_empty() {
                continue;
            }
            let element = parse_element_input(entry).map_err(|e| InputError::AtLine {
                line: idx + 1,
                source: Box::new(e),
            })?;
            out.push(element);
        }
    }
    Ok(out)
}
