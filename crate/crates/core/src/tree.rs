//! Full binary trees and their preorder bit encoding.

use std::collections::HashSet;
use std::str::FromStr;

use thiserror::Error;

use crate::word::BinaryWord;

/// A full (every inner node has two children) binary tree.
///
/// Inner nodes are called carets; the size of a tree is its caret count, and a
/// tree with `n` carets has `n + 1` leaves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BinaryTree {
    Leaf,
    Caret(Box<BinaryTree>, Box<BinaryTree>),
}

impl BinaryTree {
    pub fn leaf() -> Self {
        BinaryTree::Leaf
    }

    pub fn caret(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Caret(Box::new(left), Box::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, BinaryTree::Leaf)
    }

    pub fn carets(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let BinaryTree::Caret(l, r) = t {
                count += 1;
                stack.push(l);
                stack.push(r);
            }
        }
        count
    }

    pub fn leaf_count(&self) -> usize {
        self.carets() + 1
    }

    pub fn depth(&self) -> usize {
        match self {
            BinaryTree::Leaf => 0,
            BinaryTree::Caret(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Root-to-leaf paths in left-to-right leaf order.
    pub fn branches(&self) -> Vec<BinaryWord> {
        fn collect(t: &BinaryTree, prefix: &mut Vec<bool>, out: &mut Vec<BinaryWord>) {
            match t {
                BinaryTree::Leaf => out.push(BinaryWord::from_bits(prefix.clone())),
                BinaryTree::Caret(l, r) => {
                    prefix.push(false);
                    collect(l, prefix, out);
                    prefix.pop();
                    prefix.push(true);
                    collect(r, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        collect(self, &mut Vec::new(), &mut out);
        out
    }

    /// Preorder encoding: '1' per caret, '0' per leaf.
    pub fn to_bits(&self) -> String {
        fn emit(t: &BinaryTree, out: &mut String) {
            match t {
                BinaryTree::Leaf => out.push('0'),
                BinaryTree::Caret(l, r) => {
                    out.push('1');
                    emit(l, out);
                    emit(r, out);
                }
            }
        }
        let mut out = String::with_capacity(2 * self.leaf_count() - 1);
        emit(self, &mut out);
        out
    }

    /// Decode a preorder encoding. Iterative, so arbitrarily deep inputs
    /// cannot overflow the call stack.
    pub fn from_bits(s: &str) -> Result<Self, TreeBitsError> {
        if s.is_empty() {
            return Err(TreeBitsError::Empty);
        }
        // Forward pass: track how many subtrees are still owed.
        let mut pending = 1usize;
        for (pos, ch) in s.char_indices() {
            if pending == 0 {
                return Err(TreeBitsError::Excess);
            }
            match ch {
                '0' => pending -= 1,
                '1' => pending += 1,
                _ => return Err(TreeBitsError::InvalidBit { ch, pos }),
            }
        }
        if pending > 0 {
            return Err(TreeBitsError::Incomplete);
        }
        // Build in reverse: the reversed preorder is postfix, so leaves are
        // operands and each caret pops its two (left on top) children.
        let mut stack: Vec<BinaryTree> = Vec::new();
        for ch in s.chars().rev() {
            if ch == '0' {
                stack.push(BinaryTree::Leaf);
            } else {
                let left = stack.pop().expect("validated above");
                let right = stack.pop().expect("validated above");
                stack.push(BinaryTree::caret(left, right));
            }
        }
        Ok(stack.pop().expect("validated above"))
    }

    /// The smallest common refinement: a leaf against `t` yields `t`.
    pub fn union(&self, other: &BinaryTree) -> BinaryTree {
        match (self, other) {
            (BinaryTree::Leaf, t) | (t, BinaryTree::Leaf) => t.clone(),
            (BinaryTree::Caret(al, ar), BinaryTree::Caret(bl, br)) => {
                BinaryTree::caret(al.union(bl), ar.union(br))
            }
        }
    }

    /// The subtree rooted at the end of path `w`, if the path stays inside
    /// the tree.
    pub fn subtree_at(&self, w: &BinaryWord) -> Option<&BinaryTree> {
        let mut node = self;
        for &bit in w.bits() {
            match node {
                BinaryTree::Leaf => return None,
                BinaryTree::Caret(l, r) => node = if bit { r } else { l },
            }
        }
        Some(node)
    }

    /// Replace the leaf at the end of path `branch` by `sub`. `None` unless
    /// `branch` is exactly a root-to-leaf path.
    pub fn attach_at_leaf(&self, branch: &BinaryWord, sub: &BinaryTree) -> Option<BinaryTree> {
        fn go(t: &BinaryTree, bits: &[bool], sub: &BinaryTree) -> Option<BinaryTree> {
            match (t, bits) {
                (BinaryTree::Leaf, []) => Some(sub.clone()),
                (BinaryTree::Leaf, _) | (BinaryTree::Caret(..), []) => None,
                (BinaryTree::Caret(l, r), [bit, rest @ ..]) => {
                    if *bit {
                        Some(BinaryTree::caret((**l).clone(), go(r, rest, sub)?))
                    } else {
                        Some(BinaryTree::caret(go(l, rest, sub)?, (**r).clone()))
                    }
                }
            }
        }
        go(self, branch.bits(), sub)
    }

    /// The smallest tree having `v` as a branch: one caret per letter of `v`,
    /// each hanging off the path.
    pub fn spine(v: &BinaryWord) -> BinaryTree {
        let mut t = BinaryTree::Leaf;
        for &bit in v.bits().iter().rev() {
            t = if bit {
                BinaryTree::caret(BinaryTree::Leaf, t)
            } else {
                BinaryTree::caret(t, BinaryTree::Leaf)
            };
        }
        t
    }

    /// Split into (the tree with the subtree under `v` cut back to a leaf,
    /// that subtree). `None` if the path `v` leaves the tree.
    pub(crate) fn split_off_at(&self, v: &BinaryWord) -> Option<(BinaryTree, BinaryTree)> {
        let sub = self.subtree_at(v)?.clone();
        let skeleton = {
            fn cut(t: &BinaryTree, bits: &[bool]) -> BinaryTree {
                match (t, bits) {
                    (_, []) => BinaryTree::Leaf,
                    (BinaryTree::Leaf, _) => unreachable!("path checked by subtree_at"),
                    (BinaryTree::Caret(l, r), [bit, rest @ ..]) => {
                        if *bit {
                            BinaryTree::caret((**l).clone(), cut(r, rest))
                        } else {
                            BinaryTree::caret(cut(l, rest), (**r).clone())
                        }
                    }
                }
            }
            cut(self, v.bits())
        };
        Some((skeleton, sub))
    }

    /// Left-leaf indices of carets whose both children are leaves.
    pub(crate) fn sibling_leaf_indices(&self) -> Vec<usize> {
        fn go(t: &BinaryTree, offset: usize, out: &mut Vec<usize>) -> usize {
            match t {
                BinaryTree::Leaf => 1,
                BinaryTree::Caret(l, r) => {
                    if l.is_leaf() && r.is_leaf() {
                        out.push(offset);
                        2
                    } else {
                        let a = go(l, offset, out);
                        a + go(r, offset + a, out)
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut out);
        out
    }

    /// Collapse the both-leaf carets whose left-leaf index is in `kill`.
    /// Indices refer to the original leaf numbering.
    pub(crate) fn remove_sibling_carets(&self, kill: &HashSet<usize>) -> BinaryTree {
        // Returns (rebuilt tree, original leaf count consumed).
        fn go(t: &BinaryTree, offset: usize, kill: &HashSet<usize>) -> (BinaryTree, usize) {
            match t {
                BinaryTree::Leaf => (BinaryTree::Leaf, 1),
                BinaryTree::Caret(l, r) => {
                    if l.is_leaf() && r.is_leaf() && kill.contains(&offset) {
                        (BinaryTree::Leaf, 2)
                    } else {
                        let (nl, a) = go(l, offset, kill);
                        let (nr, b) = go(r, offset + a, kill);
                        (BinaryTree::caret(nl, nr), a + b)
                    }
                }
            }
        }
        go(self, 0, kill).0
    }

    /// For each leaf of `self`, the subtree of `finer` at that position.
    /// Requires `finer` to refine `self` (as `union` outputs do).
    pub(crate) fn refinement_forest(&self, finer: &BinaryTree) -> Vec<BinaryTree> {
        fn go(coarse: &BinaryTree, fine: &BinaryTree, out: &mut Vec<BinaryTree>) {
            match coarse {
                BinaryTree::Leaf => out.push(fine.clone()),
                BinaryTree::Caret(cl, cr) => match fine {
                    BinaryTree::Caret(fl, fr) => {
                        go(cl, fl, out);
                        go(cr, fr, out);
                    }
                    BinaryTree::Leaf => unreachable!("refinement invariant violated"),
                },
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        go(self, finer, &mut out);
        out
    }

    /// Replace the i-th leaf by `forest[i]`.
    pub(crate) fn graft(&self, forest: &[BinaryTree]) -> BinaryTree {
        fn go(t: &BinaryTree, forest: &[BinaryTree], next: &mut usize) -> BinaryTree {
            match t {
                BinaryTree::Leaf => {
                    let sub = forest[*next].clone();
                    *next += 1;
                    sub
                }
                BinaryTree::Caret(l, r) => {
                    let nl = go(l, forest, next);
                    let nr = go(r, forest, next);
                    BinaryTree::caret(nl, nr)
                }
            }
        }
        let mut next = 0;
        let out = go(self, forest, &mut next);
        assert_eq!(next, forest.len(), "forest length must match leaf count");
        out
    }

    /// Every tree with exactly `n` carets, in a fixed deterministic order.
    pub fn all_with_carets(n: usize) -> Vec<BinaryTree> {
        let mut table: Vec<Vec<BinaryTree>> = vec![vec![BinaryTree::Leaf]];
        for m in 1..=n {
            let mut row = Vec::new();
            for i in 0..m {
                for l in &table[i] {
                    for r in &table[m - 1 - i] {
                        row.push(BinaryTree::caret(l.clone(), r.clone()));
                    }
                }
            }
            table.push(row);
        }
        table.pop().unwrap()
    }
}

impl Drop for BinaryTree {
    /// Detach children onto an explicit worklist so that dropping an
    /// arbitrarily deep tree never recurses.
    fn drop(&mut self) {
        let mut stack = Vec::new();
        if let BinaryTree::Caret(l, r) = self {
            stack.push(std::mem::replace(&mut **l, BinaryTree::Leaf));
            stack.push(std::mem::replace(&mut **r, BinaryTree::Leaf));
        }
        while let Some(mut t) = stack.pop() {
            if let BinaryTree::Caret(l, r) = &mut t {
                stack.push(std::mem::replace(&mut **l, BinaryTree::Leaf));
                stack.push(std::mem::replace(&mut **r, BinaryTree::Leaf));
            }
        }
    }
}

impl std::fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_bits())
    }
}

impl FromStr for BinaryTree {
    type Err = TreeBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BinaryTree::from_bits(s)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TreeBitsError {
    #[error("empty tree encoding")]
    Empty,
    #[error("invalid character {ch:?} at position {pos}: tree encodings use only '0' and '1'")]
    InvalidBit { ch: char, pos: usize },
    #[error("encoding ends before the tree is complete")]
    Incomplete,
    #[error("encoding continues past a complete tree")]
    Excess,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BinaryTree {
        BinaryTree::from_bits(s).unwrap()
    }

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn bits_round_trip() {
        for s in ["0", "100", "11000", "10100", "1011000", "1110000"] {
            assert_eq!(t(s).to_bits(), s);
        }
    }

    #[test]
    fn decode_rejects_malformed() {
        assert_eq!(BinaryTree::from_bits(""), Err(TreeBitsError::Empty));
        assert_eq!(BinaryTree::from_bits("1100"), Err(TreeBitsError::Incomplete));
        assert_eq!(BinaryTree::from_bits("1"), Err(TreeBitsError::Incomplete));
        assert_eq!(BinaryTree::from_bits("00"), Err(TreeBitsError::Excess));
        assert_eq!(BinaryTree::from_bits("010"), Err(TreeBitsError::Excess));
        assert_eq!(
            BinaryTree::from_bits("1020"),
            Err(TreeBitsError::InvalidBit { ch: '2', pos: 2 })
        );
    }

    #[test]
    fn deep_decode_does_not_recurse() {
        let n = 200_000;
        let mut s = "1".repeat(n);
        s.push_str(&"0".repeat(n + 1));
        let deep = BinaryTree::from_bits(&s).unwrap();
        assert_eq!(deep.carets(), n);
    }

    #[test]
    fn counts_and_depth() {
        assert_eq!(t("0").carets(), 0);
        assert_eq!(t("0").leaf_count(), 1);
        assert_eq!(t("11000").carets(), 2);
        assert_eq!(t("11000").leaf_count(), 3);
        assert_eq!(t("11000").depth(), 2);
        assert_eq!(t("1010100").depth(), 3);
    }

    #[test]
    fn branches_in_leaf_order() {
        assert_eq!(t("0").branches(), vec![w("")]);
        assert_eq!(t("11000").branches(), vec![w("00"), w("01"), w("1")]);
        assert_eq!(t("10100").branches(), vec![w("0"), w("10"), w("11")]);
        assert_eq!(
            t("1011000").branches(),
            vec![w("0"), w("100"), w("101"), w("11")]
        );
    }

    #[test]
    fn union_refines_both_sides() {
        let a = t("11000");
        let b = t("10100");
        let u = a.union(&b);
        assert_eq!(u.to_bits(), "1100100");
        for side in [&a, &b] {
            for branch in side.branches() {
                assert!(u.subtree_at(&branch).is_some());
            }
        }
        assert_eq!(a.union(&t("0")), a);
        assert_eq!(t("0").union(&b), b);
    }

    #[test]
    fn spine_is_minimal_with_branch() {
        assert_eq!(BinaryTree::spine(&w("")), t("0"));
        assert_eq!(BinaryTree::spine(&w("0")), t("100"));
        assert_eq!(BinaryTree::spine(&w("11")), t("10100"));
        let v = w("00110");
        let sp = BinaryTree::spine(&v);
        assert_eq!(sp.carets(), v.len());
        assert!(sp.branches().contains(&v));
    }

    #[test]
    fn attach_and_split_invert_each_other() {
        let host = BinaryTree::spine(&w("011"));
        let sub = t("11000");
        let grown = host.attach_at_leaf(&w("011"), &sub).unwrap();
        let (skeleton, cut) = grown.split_off_at(&w("011")).unwrap();
        assert_eq!(skeleton, host);
        assert_eq!(cut, sub);
        // attaching along a non-branch path fails
        assert!(host.attach_at_leaf(&w("0"), &sub).is_none());
        assert!(host.attach_at_leaf(&w("0110"), &sub).is_none());
    }

    #[test]
    fn sibling_leaves_and_removal() {
        // 1100100: leaves 00,01,10,11 → sibling carets at leaf indices 0 and 2
        assert_eq!(t("1100100").sibling_leaf_indices(), vec![0, 2]);
        assert_eq!(t("11000").sibling_leaf_indices(), vec![0]);
        assert_eq!(t("0").sibling_leaf_indices(), Vec::<usize>::new());
        let kill: HashSet<usize> = [0, 2].into_iter().collect();
        assert_eq!(t("1100100").remove_sibling_carets(&kill), t("100"));
        let only_left: HashSet<usize> = [0].into_iter().collect();
        assert_eq!(t("1100100").remove_sibling_carets(&only_left), t("10100"));
    }

    #[test]
    fn refinement_forest_and_graft_round_trip() {
        let coarse = t("100");
        let fine = t("1101000");
        let forest = coarse.refinement_forest(&fine);
        assert_eq!(forest.len(), 2);
        assert_eq!(coarse.graft(&forest), fine);
    }

    #[test]
    fn tree_enumeration_matches_catalan_start() {
        let counts: Vec<usize> = (0..=7).map(|n| BinaryTree::all_with_carets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429]);
        // all distinct, all the right size
        let all4 = BinaryTree::all_with_carets(4);
        let set: HashSet<String> = all4.iter().map(|t| t.to_bits()).collect();
        assert_eq!(set.len(), all4.len());
        assert!(all4.iter().all(|t| t.carets() == 4));
    }
}
