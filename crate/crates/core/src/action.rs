//! The action of elements on finite binary words, and its slope data.
//!
//! An element maps the infinite expansions inside a source interval `[u]`
//! linearly onto a target interval `[v]`; on finite words this substitutes
//! prefixes. The log-slopes at the two endpoints of [0, 1] form the
//! abelianization image of the element in Z².

use thiserror::Error;

use crate::diagram::Element;
use crate::word::BinaryWord;

/// Log-2 slopes at 0 and at 1: the image of an element in Z² under the
/// abelianization of F.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AbImage {
    pub at_zero: i64,
    pub at_one: i64,
}

impl AbImage {
    pub fn as_pair(self) -> (i64, i64) {
        (self.at_zero, self.at_one)
    }
}

impl std::ops::Add for AbImage {
    type Output = AbImage;

    fn add(self, rhs: AbImage) -> AbImage {
        AbImage {
            at_zero: self.at_zero + rhs.at_zero,
            at_one: self.at_one + rhs.at_one,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("word \"{word}\" is shorter than every source branch containing it")]
    WordTooShort { word: BinaryWord },
}

impl Element {
    /// Substitute the source prefix of `w` by the matching target branch.
    /// Fails when `w` ends strictly above a breakpoint, i.e. no source branch
    /// is a prefix of `w`.
    pub fn apply_to_word(&self, w: &BinaryWord) -> Result<BinaryWord, ActionError> {
        for (u, v) in self.branch_pairs() {
            if let Some(suffix) = w.strip_prefix(&u) {
                return Ok(v.concat(&suffix));
            }
        }
        Err(ActionError::WordTooShort { word: w.clone() })
    }

    /// Does the element map `[u]` linearly onto `[v]`?
    ///
    /// True exactly when `u -> v` appears in some refinement of the reduced
    /// diagram: either `u` extends a source branch, or every source branch
    /// below `u` matches `v` with the same suffix.
    pub fn has_branch_pair(&self, u: &BinaryWord, v: &BinaryWord) -> bool {
        let pairs = self.branch_pairs();
        for (ui, vi) in &pairs {
            if ui.is_prefix_of(u) {
                let suffix = u.strip_prefix(ui).expect("checked prefix");
                return *v == vi.concat(&suffix);
            }
        }
        let mut below = false;
        for (ui, vi) in &pairs {
            if u.is_prefix_of(ui) {
                below = true;
                let suffix = ui.strip_prefix(u).expect("checked prefix");
                if *vi != v.concat(&suffix) {
                    return false;
                }
            }
        }
        below
    }

    /// Is the element the identity on the interval `[u]`?
    ///
    /// An increasing PL self-map of an interval sending it linearly onto
    /// itself is the identity there, so this is one branch-pair question.
    pub fn fixes_interval(&self, u: &BinaryWord) -> bool {
        self.has_branch_pair(u, u)
    }

    /// Log-2 slopes at the endpoints: (|u_first| - |v_first|,
    /// |u_last| - |v_last|) read off the outermost branch pairs.
    pub fn ab(&self) -> AbImage {
        let pairs = self.branch_pairs();
        let (u0, v0) = pairs.first().expect("at least one branch");
        let (u1, v1) = pairs.last().expect("at least one branch");
        AbImage {
            at_zero: u0.len() as i64 - v0.len() as i64,
            at_one: u1.len() as i64 - v1.len() as i64,
        }
    }
}
