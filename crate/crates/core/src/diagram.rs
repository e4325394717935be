//! Tree diagrams and reduced elements of Thompson's group F.
//!
//! A tree diagram is a pair of full binary trees with equally many leaves;
//! matching leaves in order pairs a source dyadic interval with a target one,
//! which glues to a piecewise-linear homeomorphism of [0, 1]. A diagram is
//! reduced when no leaf index carries a both-leaf caret in both trees at once;
//! each group element has exactly one reduced diagram, so [`Element`] equality
//! is plain structural equality.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::tree::{BinaryTree, TreeBitsError};
use crate::word::BinaryWord;

/// A source/target interval pair, written `u -> v`.
pub type BranchPair = (BinaryWord, BinaryWord);

/// An unreduced pair of trees with equal leaf counts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeDiagram {
    source: BinaryTree,
    target: BinaryTree,
}

impl TreeDiagram {
    pub fn new(source: BinaryTree, target: BinaryTree) -> Result<Self, DiagramError> {
        if source.leaf_count() != target.leaf_count() {
            return Err(DiagramError::LeafCountMismatch {
                source_leaves: source.leaf_count(),
                target_leaves: target.leaf_count(),
            });
        }
        Ok(TreeDiagram { source, target })
    }

    pub fn source(&self) -> &BinaryTree {
        &self.source
    }

    pub fn target(&self) -> &BinaryTree {
        &self.target
    }

    /// Cancel common carets until none remain.
    pub fn reduce(self) -> Element {
        let (source, target) = reduce_pair(self.source, self.target);
        Element { source, target }
    }
}

/// An element of F: the unique reduced tree diagram representing it.
///
/// The size of an element is the caret count of either tree of its reduced
/// diagram. Elements order canonically by (size, source encoding, target
/// encoding), so sorting a list of elements is deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    source: BinaryTree,
    target: BinaryTree,
}

impl Element {
    pub fn identity() -> Self {
        Element {
            source: BinaryTree::Leaf,
            target: BinaryTree::Leaf,
        }
    }

    pub fn from_diagram(diagram: TreeDiagram) -> Self {
        diagram.reduce()
    }

    pub fn is_identity(&self) -> bool {
        self.source.is_leaf()
    }

    /// Caret count of the reduced diagram.
    pub fn size(&self) -> usize {
        self.source.carets()
    }

    pub fn source(&self) -> &BinaryTree {
        &self.source
    }

    pub fn target(&self) -> &BinaryTree {
        &self.target
    }

    /// The interval pairs `u -> v`, in left-to-right leaf order.
    pub fn branch_pairs(&self) -> Vec<BranchPair> {
        self.source
            .branches()
            .into_iter()
            .zip(self.target.branches())
            .collect()
    }

    /// Build the element whose reduced-or-not diagram has exactly these
    /// branch pairs, listed left to right.
    pub fn from_branch_pairs(pairs: &[BranchPair]) -> Result<Self, DiagramError> {
        if pairs.is_empty() {
            return Err(DiagramError::EmptyBranchList);
        }
        let source = tree_from_branches(pairs.iter().map(|(u, _)| u), pairs.len(), Side::Source)?;
        let target = tree_from_branches(pairs.iter().map(|(_, v)| v), pairs.len(), Side::Target)?;
        Ok(TreeDiagram::new(source, target)
            .expect("equal by construction")
            .reduce())
    }

    /// Group product, composing left to right: `a.multiply(&b)` maps `t` to
    /// `b(a(t))`.
    pub fn multiply(&self, rhs: &Element) -> Element {
        let common = self.target.union(&rhs.source);
        let source = self
            .source
            .graft(&self.target.refinement_forest(&common));
        let target = rhs.target.graft(&rhs.source.refinement_forest(&common));
        let (source, target) = reduce_pair(source, target);
        Element { source, target }
    }

    pub fn invert(&self) -> Element {
        // Reducedness is symmetric in the two trees.
        Element {
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, exponent: i64) -> Element {
        let base = if exponent < 0 { self.invert() } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc = Element::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.multiply(&sq);
            }
        }
        acc
    }
}

fn reduce_pair(mut source: BinaryTree, mut target: BinaryTree) -> (BinaryTree, BinaryTree) {
    loop {
        let in_source = source.sibling_leaf_indices();
        if in_source.is_empty() {
            break;
        }
        let in_target: HashSet<usize> = target.sibling_leaf_indices().into_iter().collect();
        let common: HashSet<usize> = in_source
            .into_iter()
            .filter(|i| in_target.contains(i))
            .collect();
        if common.is_empty() {
            break;
        }
        source = source.remove_sibling_carets(&common);
        target = target.remove_sibling_carets(&common);
    }
    (source, target)
}

/// Build the tree spanned by the listed branches and insist the list is
/// exactly its left-to-right branch list.
fn tree_from_branches<'a>(
    words: impl Iterator<Item = &'a BinaryWord>,
    count: usize,
    side: Side,
) -> Result<BinaryTree, DiagramError> {
    let listed: Vec<&BinaryWord> = words.collect();
    let mut tree = BinaryTree::Leaf;
    for w in &listed {
        tree = tree.union(&BinaryTree::spine(w));
    }
    if tree.leaf_count() != count {
        return Err(DiagramError::LeafCountMismatch {
            source_leaves: count,
            target_leaves: tree.leaf_count(),
        });
    }
    let actual = tree.branches();
    if actual.iter().zip(&listed).any(|(a, b)| a != *b) {
        return Err(DiagramError::BranchOrder { side });
    }
    Ok(tree)
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.source.to_bits().cmp(&other.source.to_bits()))
            .then_with(|| self.target.to_bits().cmp(&other.target.to_bits()))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.source.to_bits(), self.target.to_bits())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("expected exactly one ',' separating source and target encodings")]
    MissingComma,
    #[error("source tree: {0}")]
    Source(TreeBitsError),
    #[error("target tree: {0}")]
    Target(TreeBitsError),
    #[error("source and target must have equal leaf counts ({source_leaves} vs {target_leaves})")]
    LeafCountMismatch { source_leaves: usize, target_leaves: usize },
}

impl FromStr for Element {
    type Err = ParseError;

    /// Accepts `"<source bits>,<target bits>"` and reduces the diagram, so
    /// any valid equal-leaf-count pair parses to the element it represents.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(',');
        let (src, tgt) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(ParseError::MissingComma),
        };
        let source = BinaryTree::from_bits(src).map_err(ParseError::Source)?;
        let target = BinaryTree::from_bits(tgt).map_err(ParseError::Target)?;
        match TreeDiagram::new(source, target) {
            Ok(d) => Ok(d.reduce()),
            Err(DiagramError::LeafCountMismatch { source_leaves, target_leaves }) => {
                Err(ParseError::LeafCountMismatch { source_leaves, target_leaves })
            }
            Err(_) => unreachable!("TreeDiagram::new only reports leaf counts"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("leaf counts disagree ({source_leaves} vs {target_leaves})")]
    LeafCountMismatch { source_leaves: usize, target_leaves: usize },
    #[error("empty branch list")]
    EmptyBranchList,
    #[error("{side} branch list is not the left-to-right branch list of a tree")]
    BranchOrder { side: Side },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> Element {
        s.parse().unwrap()
    }

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn pairs(spec: &[(&str, &str)]) -> Vec<BranchPair> {
        spec.iter().map(|(u, v)| (w(u), w(v))).collect()
    }

    #[test]
    fn identity_is_single_leaf_pair() {
        let e = Element::identity();
        assert_eq!(e.to_string(), "0,0");
        assert_eq!(e.size(), 0);
        assert!(e.is_identity());
        assert_eq!(e.branch_pairs(), pairs(&[("", "")]));
    }

    #[test]
    fn parse_display_round_trip_on_reduced_inputs() {
        for s in ["0,0", "11000,10100", "1011000,1010100", "10100,11000"] {
            assert_eq!(el(s).to_string(), s);
        }
    }

    #[test]
    fn parse_reduces_common_carets() {
        assert_eq!(el("1100100,1100100"), Element::identity());
        // one shared caret on leaf 0, rest differs
        assert_eq!(el("110011000,110010100"), el("1011000,1010100"));
        // cascading: cancelling one caret exposes another
        assert_eq!(el("1101000,1101000"), Element::identity());
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert_eq!("11000".parse::<Element>(), Err(ParseError::MissingComma));
        assert_eq!(
            "11000,10100,0".parse::<Element>(),
            Err(ParseError::MissingComma)
        );
        assert!(matches!(
            "1100,10100".parse::<Element>(),
            Err(ParseError::Source(TreeBitsError::Incomplete))
        ));
        assert!(matches!(
            "11000,102".parse::<Element>(),
            Err(ParseError::Target(TreeBitsError::InvalidBit { ch: '2', pos: 2 }))
        ));
        assert_eq!(
            "11000,100".parse::<Element>(),
            Err(ParseError::LeafCountMismatch {
                source_leaves: 3,
                target_leaves: 2
            })
        );
    }

    #[test]
    fn branch_pair_construction_matches_tables() {
        let x0 = Element::from_branch_pairs(&pairs(&[("00", "0"), ("01", "10"), ("1", "11")]))
            .unwrap();
        assert_eq!(x0.to_string(), "11000,10100");
        let x1 = Element::from_branch_pairs(&pairs(&[
            ("0", "0"),
            ("100", "10"),
            ("101", "110"),
            ("11", "111"),
        ]))
        .unwrap();
        assert_eq!(x1.to_string(), "1011000,1010100");
    }

    #[test]
    fn branch_pair_construction_reduces() {
        let unreduced = Element::from_branch_pairs(&pairs(&[
            ("00", "00"),
            ("01", "01"),
            ("1", "1"),
        ]))
        .unwrap();
        assert!(unreduced.is_identity());
    }

    #[test]
    fn branch_pair_construction_rejects_bad_lists() {
        assert_eq!(
            Element::from_branch_pairs(&[]),
            Err(DiagramError::EmptyBranchList)
        );
        assert_eq!(
            Element::from_branch_pairs(&pairs(&[("0", "0"), ("1", "10")])),
            Err(DiagramError::LeafCountMismatch {
                source_leaves: 2,
                target_leaves: 3
            })
        );
        assert_eq!(
            Element::from_branch_pairs(&pairs(&[("1", "1"), ("0", "0")])),
            Err(DiagramError::BranchOrder { side: Side::Source })
        );
    }

    #[test]
    fn product_composes_left_to_right() {
        let x0 = el("11000,10100");
        assert_eq!(x0.multiply(&x0).to_string(), "1110000,1010100");
        assert_eq!(x0.multiply(&x0.invert()), Element::identity());
        assert_eq!(x0.invert().multiply(&x0), Element::identity());
    }

    #[test]
    fn inverse_swaps_trees() {
        let x0 = el("11000,10100");
        assert_eq!(x0.invert().to_string(), "10100,11000");
        assert_eq!(x0.invert().invert(), x0);
    }

    #[test]
    fn powers_by_binary_exponentiation() {
        let x0 = el("11000,10100");
        assert_eq!(x0.pow(0), Element::identity());
        assert_eq!(x0.pow(1), x0);
        assert_eq!(x0.pow(2), x0.multiply(&x0));
        assert_eq!(x0.pow(-1), x0.invert());
        assert_eq!(x0.pow(5).multiply(&x0.pow(-5)), Element::identity());
        assert_eq!(x0.pow(7), x0.pow(3).multiply(&x0.pow(4)));
        // powers of x0 grow one caret per factor
        assert_eq!(x0.pow(6).size(), 7);
    }

    #[test]
    fn canonical_order_is_size_then_encodings() {
        let e = Element::identity();
        let x0 = el("11000,10100");
        let x0_inv = x0.invert();
        let x1 = el("1011000,1010100");
        assert!(e < x0);
        assert!(x0 < x1);
        // same size: source encoding decides; "10100" < "11000"
        assert!(x0_inv < x0);
        let mut v = vec![x1.clone(), x0.clone(), e.clone(), x0_inv.clone()];
        v.sort();
        assert_eq!(v, vec![e, x0_inv, x0, x1]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;

        fn arbitrary_element(seed: u64, max_size: usize) -> Element {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let n = (seed % (max_size as u64 + 1)) as usize;
            if n == 1 {
                return Element::identity();
            }
            crate::sample::sample_element(n, &mut rng).unwrap()
        }

        proptest! {
            #[test]
            fn product_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
                let (x, y, z) = (
                    arbitrary_element(a, 6),
                    arbitrary_element(b, 6),
                    arbitrary_element(c, 6),
                );
                prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
            }

            #[test]
            fn inverse_cancels(a in any::<u64>()) {
                let x = arbitrary_element(a, 8);
                prop_assert_eq!(x.multiply(&x.invert()), Element::identity());
                prop_assert_eq!(x.invert().multiply(&x), Element::identity());
            }

            #[test]
            fn display_parse_round_trip(a in any::<u64>()) {
                let x = arbitrary_element(a, 8);
                prop_assert_eq!(x.to_string().parse::<Element>().unwrap(), x);
            }

            #[test]
            fn pow_adds_exponents(a in any::<u64>(), p in -4i64..=4, q in -4i64..=4) {
                let x = arbitrary_element(a, 5);
                prop_assert_eq!(x.pow(p).multiply(&x.pow(q)), x.pow(p + q));
            }
        }
    }
}
