//! Tree-diagram calculus for Thompson's group F.
//!
//! Elements of F are piecewise-linear homeomorphisms of [0, 1] with dyadic
//! breakpoints and power-of-two slopes. This crate represents them as reduced
//! tree diagrams (pairs of full binary trees with equally many leaves) and
//! builds, on top of exact diagram arithmetic:
//!
//! - the group operations (product, inverse, powers) and the action on finite
//!   binary words, all exact ([`diagram`], [`action`]);
//! - subtree copies `g_[v]`, the injections that shrink generation questions
//!   about k-tuples to (k-1)-tuples, and their partial inverses
//!   ([`construct`]);
//! - a certificate procedure deciding "does this tuple generate F?" whenever
//!   a bounded witness search suffices, sound in both directions
//!   ([`certify`]);
//! - exact counts of reduced diagrams by size, sphere sizes for tuples under
//!   two size models, and the exact density of the always-generating image
//!   set inside each sphere ([`count`]);
//! - uniform seeded samplers for trees, elements, and tuples, plus Monte
//!   Carlo estimates cross-checkable against exhaustive censuses ([`sample`]).
//!
//! All counts are exact big integers, densities are exact rationals, and every
//! comparison against the irrational growth constant goes through explicit
//! rational interval arithmetic — no floating point in any verdict path.

pub mod action;
pub mod certify;
pub mod construct;
pub mod count;
pub mod diagram;
pub mod group_word;
pub mod input;
pub mod sample;
pub mod tree;
pub mod verification;
pub mod word;

pub use action::{AbImage, ActionError};
pub use certify::{ball, ball_with_words, certify_generates_f, Verdict, Witness, Witnesses};
pub use construct::{
    big_phi, copy_in, invert_nat_map, invert_phi1, invert_phi2, is_in_s, make_x, make_y, nat_map,
    nat_plan, phi1, phi2, strip_copy, ConstructError, KTuple, NatPlan, Stage,
};
pub use count::{
    catalan, density_envelope, density_s, enumerate_reduced, forest_count, mu_interval,
    ordered_count, r_cumulative, r_count, sphere_count, CountError, Model, RatInterval,
};
pub use diagram::{BranchPair, DiagramError, Element, ParseError, TreeDiagram};
pub use group_word::{from_group_word, x0, x1, xi, GroupWord, GroupWordParseError};
pub use input::{parse_element_input, parse_element_list, InputError};
pub use sample::{
    estimate_generating_fraction, exact_generating_census, sample_element, sample_tree,
    sample_tuple, CensusReport, ExperimentReport, SampleError, VerdictCounts,
};
pub use tree::{BinaryTree, TreeBitsError};
pub use word::{BinaryWord, WordParseError};
