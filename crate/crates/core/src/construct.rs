//! Natural copies `g_[v]` and the size-shifting injections on tuples.
//!
//! The `[v]`-copy of `g` acts as `g` inside the dyadic interval `[v]` and
//! fixes everything else; `g -> g_[v]` embeds F into itself. Composing copies
//! with two fixed elements `x` (size 6) and `y = x0` (size 2) gives the
//! injections `phi1(g) = x·g_[00110]` and `phi2(g) = y·g_[11]`, which shift
//! sphere radii by a constant; their tuple version [`big_phi`] shifts the
//! sum size by 8 and the max size by 6 while every image tuple generates F.
//! The Γ machinery ([`nat_plan`], [`nat_map`]) generalizes this relative to
//! an arbitrary generator list and base interval `[u]`.

use std::fmt;

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::diagram::{BranchPair, Element, TreeDiagram};
use crate::group_word::GroupWord;
use crate::tree::BinaryTree;
use crate::word::BinaryWord;

/// The `[v]`-copy of `g`: act as `g` inside `[v]`, fix the rest.
/// Size is `|g| + |v|` except that every copy of the identity is the
/// identity.
pub fn copy_in(g: &Element, v: &BinaryWord) -> Element {
    if g.is_identity() {
        return Element::identity();
    }
    let spine = BinaryTree::spine(v);
    let source = spine
        .attach_at_leaf(v, g.source())
        .expect("v is a branch of its spine");
    let target = spine
        .attach_at_leaf(v, g.target())
        .expect("v is a branch of its spine");
    TreeDiagram::new(source, target)
        .expect("equal counts by construction")
        .reduce()
}

/// Inverse of [`copy_in`]: recover `g` from `g_[v]`.
///
/// A reduced non-identity element is a `[v]`-copy exactly when both trees
/// are the spine of `v` with a subtree hung at its end, so the check is
/// structural.
pub fn strip_copy(f: &Element, v: &BinaryWord) -> Result<Element, ConstructError> {
    if f.is_identity() {
        return Ok(Element::identity());
    }
    let not_a_copy = || ConstructError::NotACopy { at: v.clone() };
    let spine = BinaryTree::spine(v);
    let (source_skeleton, source_sub) = f.source().split_off_at(v).ok_or_else(not_a_copy)?;
    let (target_skeleton, target_sub) = f.target().split_off_at(v).ok_or_else(not_a_copy)?;
    if source_skeleton != spine || target_skeleton != spine {
        return Err(not_a_copy());
    }
    Ok(TreeDiagram::new(source_sub, target_sub)
        .expect("copies keep counts equal")
        .reduce())
}

/// The size-6 element x = x0² x1² x4⁻¹ x2⁻¹ x1⁻¹ x0⁻², built from its branch
/// table and cross-checked against that word on first use.
pub fn make_x() -> Element {
    static X: Lazy<Element> = Lazy::new(|| {
        let table = branch_table(&[
            ("000", "000"),
            ("00100", "0010"),
            ("00101", "00110"),
            ("0011", "00111"),
            ("01", "010"),
            ("10", "011"),
            ("11", "1"),
        ]);
        let from_table = Element::from_branch_pairs(&table).expect("fixed table");
        let word: GroupWord = "x0^2 x1^2 x4^-1 x2^-1 x1^-1 x0^-2"
            .parse()
            .expect("fixed word");
        assert_eq!(
            from_table,
            word.evaluate(),
            "x: branch table and defining word disagree"
        );
        from_table
    });
    X.clone()
}

/// The size-2 element y = x0, built from its branch table and cross-checked
/// against the generator on first use.
pub fn make_y() -> Element {
    static Y: Lazy<Element> = Lazy::new(|| {
        let table = branch_table(&[("00", "0"), ("01", "10"), ("1", "11")]);
        let from_table = Element::from_branch_pairs(&table).expect("fixed table");
        assert_eq!(
            from_table,
            crate::group_word::x0(),
            "y: branch table and x0 disagree"
        );
        from_table
    });
    Y.clone()
}

fn branch_table(rows: &[(&str, &str)]) -> Vec<BranchPair> {
    rows.iter()
        .map(|(u, v)| (u.parse().unwrap(), v.parse().unwrap()))
        .collect()
}

fn word(s: &str) -> BinaryWord {
    s.parse().expect("fixed word literal")
}

/// phi1(g) = x · g_[00110]; size shift +6.
pub fn phi1(g: &Element) -> Element {
    make_x().multiply(&copy_in(g, &word("00110")))
}

/// phi2(g) = y · g_[11]; size shift +2.
pub fn phi2(g: &Element) -> Element {
    make_y().multiply(&copy_in(g, &word("11")))
}

/// Recover g from phi1(g); anything outside the image errors.
pub fn invert_phi1(f: &Element) -> Result<Element, ConstructError> {
    strip_copy(&make_x().invert().multiply(f), &word("00110")).map_err(|_| {
        ConstructError::NotInImage { stage: Stage::Phi1 }
    })
}

/// Recover g from phi2(g); anything outside the image errors.
pub fn invert_phi2(f: &Element) -> Result<Element, ConstructError> {
    strip_copy(&make_y().invert().multiply(f), &word("11")).map_err(|_| {
        ConstructError::NotInImage { stage: Stage::Phi2 }
    })
}

/// A k-tuple of elements, stored sorted by descending size with ties broken
/// by the canonical element order, so tuples compare as multisets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KTuple {
    members: Vec<Element>,
}

impl KTuple {
    pub fn new(members: Vec<Element>) -> Self {
        assert!(!members.is_empty(), "tuples have arity at least 1");
        let mut members = members;
        members.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.cmp(b)));
        KTuple { members }
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    /// Members in descending size order.
    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn sum_size(&self) -> usize {
        self.members.iter().map(Element::size).sum()
    }

    pub fn max_size(&self) -> usize {
        self.members.first().expect("nonempty").size()
    }
}

/// Replace the two largest members by their phi-images:
/// {h1, h2, h3, …} -> {phi1(h1), phi2(h2), h3, …}. Sum size shifts by 8, max
/// size by 6.
pub fn big_phi(tuple: &KTuple) -> KTuple {
    assert!(tuple.k() >= 2, "big_phi needs arity at least 2");
    let m = tuple.members();
    let mut images = Vec::with_capacity(m.len());
    images.push(phi1(&m[0]));
    images.push(phi2(&m[1]));
    images.extend_from_slice(&m[2..]);
    KTuple::new(images)
}

/// Decide membership in the image of [`big_phi`] constructively: invert the
/// two leading members and confirm by re-applying.
pub fn is_in_s(tuple: &KTuple) -> Result<KTuple, ConstructError> {
    if tuple.k() < 2 {
        return Err(ConstructError::NotInImage { stage: Stage::Arity });
    }
    let m = tuple.members();
    let h1 = invert_phi1(&m[0])?;
    let h2 = invert_phi2(&m[1])?;
    let mut members = vec![h1, h2];
    members.extend_from_slice(&m[2..]);
    let preimage = KTuple::new(members);
    if big_phi(&preimage) != *tuple {
        return Err(ConstructError::NotInImage {
            stage: Stage::Ordering,
        });
    }
    Ok(preimage)
}

/// Which stage of an inversion failed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Stage {
    Arity,
    Phi1,
    Phi2,
    Psi(usize),
    Gamma1,
    Gamma2,
    Rho(usize),
    Ordering,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("element is not a [{at}]-copy")]
    NotACopy { at: BinaryWord },
    #[error("not in the image ({stage:?} stage failed)")]
    NotInImage { stage: Stage },
    #[error("tuple arity {k} too small: need at least {min}")]
    ArityTooSmall { k: usize, min: usize },
}

/// Everything needed to run the Γ injection relative to a generator list
/// `f1 ≥ … ≥ fm` (descending size) and a base word `u`: the per-generator
/// branch data, the common copy root `p = u·0^ell`, the copied pair
/// `xbar = x_[p]`, `ybar = y_[p]`, and the exact size shifts `c1` (sum) and
/// `c2` (max).
#[derive(Clone, Debug)]
pub struct NatPlan {
    pub gens: Vec<Element>,
    pub u: BinaryWord,
    pub k: usize,
    /// Per generator: source branch paired with `v_i`.
    pub u_i: Vec<BinaryWord>,
    /// Per generator: the unique target branch that is a prefix of `u·0^∞`.
    pub v_i: Vec<BinaryWord>,
    /// Per generator: the continuation of length `|p| + 7 + m - i` along
    /// `p·0^∞` after `v_i`.
    pub w_i: Vec<BinaryWord>,
    /// Per generator: the copy root `p_i = v_i · w_i`.
    pub p_i: Vec<BinaryWord>,
    pub ell: usize,
    pub p: BinaryWord,
    pub xbar: Element,
    pub ybar: Element,
    pub c1: usize,
    pub c2: usize,
}

impl NatPlan {
    pub fn m(&self) -> usize {
        self.gens.len()
    }

    /// psi_i(g) = f_i · g_[p_i] (argument `i` is 0-based).
    pub fn psi(&self, i: usize, g: &Element) -> Element {
        self.gens[i].multiply(&copy_in(g, &self.p_i[i]))
    }

    /// gamma1(g) = xbar · g_[p·00110].
    pub fn gamma1(&self, g: &Element) -> Element {
        self.xbar.multiply(&copy_in(g, &self.p.concat(&word("00110"))))
    }

    /// gamma2(g) = ybar · g_[p·11].
    pub fn gamma2(&self, g: &Element) -> Element {
        self.ybar.multiply(&copy_in(g, &self.p.concat(&word("11"))))
    }

    /// rho(g) = g_[p].
    pub fn rho(&self, g: &Element) -> Element {
        copy_in(g, &self.p)
    }
}

/// Build the Γ plan for `gens` relative to `[u]`, for tuples of arity `k`.
///
/// The caller asserts that the subgroup generated by `gens` contains every
/// element supported on `[u]`; that hypothesis is not (and cannot cheaply
/// be) verified here, and nothing below depends on it.
pub fn nat_plan(gens: &[Element], u: &BinaryWord, k: usize) -> Result<NatPlan, ConstructError> {
    let m = gens.len();
    if k < m + 2 {
        return Err(ConstructError::ArityTooSmall { k, min: m + 2 });
    }
    let mut gens = gens.to_vec();
    gens.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.cmp(b)));

    let mut u_i = Vec::with_capacity(m);
    let mut v_i = Vec::with_capacity(m);
    for f in &gens {
        // walk the target tree along u·0^∞ to its unique branch on that ray
        let mut node = f.target();
        let mut path = BinaryWord::empty();
        let mut depth = 0;
        while let BinaryTree::Caret(l, r) = node {
            let bit = if depth < u.len() { u.bit(depth) } else { false };
            node = if bit { r } else { l };
            path.push(bit);
            depth += 1;
        }
        let (src, _) = f
            .branch_pairs()
            .into_iter()
            .find(|(_, v)| *v == path)
            .expect("path is a target branch");
        u_i.push(src);
        v_i.push(path);
    }

    let ell = v_i
        .iter()
        .map(|v| v.len().saturating_sub(u.len()))
        .max()
        .unwrap_or(0);
    let p = u.concat(&BinaryWord::zeros(ell));

    let mut w_i = Vec::with_capacity(m);
    let mut p_i = Vec::with_capacity(m);
    for (idx, v) in v_i.iter().enumerate() {
        // length |p| + 7 + m - i with i 1-based
        let len = p.len() + 6 + m - idx;
        let suffix = p.strip_prefix(v).expect("v_i is a prefix of p");
        let w = suffix.take_padded(len);
        w_i.push(w.clone());
        p_i.push(v.concat(&w));
    }

    let sum_gen_sizes: usize = gens.iter().map(Element::size).sum();
    let c1 = k * p.len() + 8 + m * (m + 13) / 2 + sum_gen_sizes;
    let c2 = gens.first().map(Element::size).unwrap_or(0) + p.len() + m + 6;

    Ok(NatPlan {
        xbar: copy_in(&make_x(), &p),
        ybar: copy_in(&make_y(), &p),
        gens,
        u: u.clone(),
        k,
        u_i,
        v_i,
        w_i,
        p_i,
        ell,
        p,
        c1,
        c2,
    })
}

/// Γ: members 1..m go through psi_i, the next two through gamma1/gamma2, the
/// rest through rho. Sum size shifts by `c1`, max size by `c2`.
pub fn nat_map(plan: &NatPlan, tuple: &KTuple) -> KTuple {
    assert_eq!(tuple.k(), plan.k, "tuple arity must match the plan");
    let m = plan.m();
    let members = tuple.members();
    let mut images = Vec::with_capacity(members.len());
    for (idx, h) in members.iter().enumerate() {
        let image = if idx < m {
            plan.psi(idx, h)
        } else if idx == m {
            plan.gamma1(h)
        } else if idx == m + 1 {
            plan.gamma2(h)
        } else {
            plan.rho(h)
        };
        images.push(image);
    }
    KTuple::new(images)
}

/// Invert [`nat_map`]: strip each stage from the size-sorted members, then
/// confirm by re-applying the map.
pub fn invert_nat_map(plan: &NatPlan, tuple: &KTuple) -> Result<KTuple, ConstructError> {
    if tuple.k() != plan.k {
        return Err(ConstructError::ArityTooSmall {
            k: tuple.k(),
            min: plan.k,
        });
    }
    let m = plan.m();
    let members = tuple.members();
    let mut preimages = Vec::with_capacity(members.len());
    for (idx, f) in members.iter().enumerate() {
        let recovered = if idx < m {
            strip_copy(&plan.gens[idx].invert().multiply(f), &plan.p_i[idx])
                .map_err(|_| ConstructError::NotInImage { stage: Stage::Psi(idx) })?
        } else if idx == m {
            strip_copy(
                &plan.xbar.invert().multiply(f),
                &plan.p.concat(&word("00110")),
            )
            .map_err(|_| ConstructError::NotInImage { stage: Stage::Gamma1 })?
        } else if idx == m + 1 {
            strip_copy(&plan.ybar.invert().multiply(f), &plan.p.concat(&word("11")))
                .map_err(|_| ConstructError::NotInImage { stage: Stage::Gamma2 })?
        } else {
            strip_copy(f, &plan.p)
                .map_err(|_| ConstructError::NotInImage { stage: Stage::Rho(idx) })?
        };
        preimages.push(recovered);
    }
    let candidate = KTuple::new(preimages);
    if nat_map(plan, &candidate) != *tuple {
        return Err(ConstructError::NotInImage {
            stage: Stage::Ordering,
        });
    }
    Ok(candidate)
}

impl fmt::Display for NatPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "plan: m = {}, u = \"{}\", k = {}, ell = {}, p = \"{}\"",
            self.m(),
            self.u,
            self.k,
            self.ell,
            self.p
        )?;
        for (idx, g) in self.gens.iter().enumerate() {
            writeln!(f, "  f{} = {}  (size {})", idx + 1, g, g.size())?;
        }
        for idx in 0..self.m() {
            writeln!(
                f,
                "  i={}: u_i = \"{}\", v_i = \"{}\", |w_i| = {}, p_i = \"{}\"",
                idx + 1,
                self.u_i[idx],
                self.v_i[idx],
                self.w_i[idx].len(),
                self.p_i[idx]
            )?;
        }
        writeln!(f, "  xbar = {}  (size {})", self.xbar, self.xbar.size())?;
        writeln!(f, "  ybar = {}  (size {})", self.ybar, self.ybar.size())?;
        write!(f, "  c1 = {}  c2 = {}", self.c1, self.c2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_word::{x0, x1};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn random_element(rng: &mut ChaCha12Rng, max_size: usize) -> Element {
        // sizes 0 and 2..=max_size (no size-1 elements exist)
        use rand::Rng;
        let n = loop {
            let n = rng.gen_range(0..=max_size);
            if n != 1 {
                break n;
            }
        };
        crate::sample::sample_element(n, rng).unwrap()
    }

    fn random_nontrivial(rng: &mut ChaCha12Rng, max_size: usize) -> Element {
        use rand::Rng;
        let n = rng.gen_range(2..=max_size);
        crate::sample::sample_element(n, rng).unwrap()
    }

    #[test]
    fn copies_of_x0_match_reference_diagrams() {
        let at_zero = copy_in(&x0(), &word("0"));
        assert_eq!(at_zero.to_string(), "1110000,1101000");
        assert_eq!(at_zero.size(), 3);
        assert_eq!(
            at_zero.branch_pairs(),
            branch_table(&[("000", "00"), ("001", "010"), ("01", "011"), ("1", "1")])
        );
        // the [1]-copy of x0 is exactly x1
        assert_eq!(copy_in(&x0(), &word("1")), x1());
        // copy at the empty word is the element itself
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..20 {
            let g = random_element(&mut rng, 6);
            assert_eq!(copy_in(&g, &BinaryWord::empty()), g);
        }
    }

    #[test]
    fn copy_size_and_identity_behavior() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..50 {
            let g = random_nontrivial(&mut rng, 8);
            for v in ["0", "1", "011", "00110"] {
                assert_eq!(copy_in(&g, &word(v)).size(), g.size() + v.len());
            }
        }
        for v in ["", "0", "00110"] {
            assert!(copy_in(&Element::identity(), &word(v)).is_identity());
        }
    }

    #[test]
    fn copies_nest_and_respect_products() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let words = ["", "0", "1", "01", "110", "001"];
        for _ in 0..30 {
            let g = random_element(&mut rng, 6);
            let h = random_element(&mut rng, 6);
            for v in &words {
                for w in &words {
                    assert_eq!(
                        copy_in(&copy_in(&g, &word(w)), &word(v)),
                        copy_in(&g, &word(v).concat(&word(w))),
                        "nesting failed at v={v}, w={w}"
                    );
                }
                assert_eq!(
                    copy_in(&g.multiply(&h), &word(v)),
                    copy_in(&g, &word(v)).multiply(&copy_in(&h, &word(v))),
                    "homomorphism failed at v={v}"
                );
            }
        }
    }

    #[test]
    fn strip_copy_round_trips_and_rejects() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..50 {
            let g = random_element(&mut rng, 7);
            for v in ["", "0", "11", "010"] {
                let copied = copy_in(&g, &word(v));
                assert_eq!(strip_copy(&copied, &word(v)).unwrap(), g);
            }
        }
        assert!(strip_copy(&Element::identity(), &word("0101")).unwrap().is_identity());
        assert_eq!(
            strip_copy(&x0(), &word("0")),
            Err(ConstructError::NotACopy { at: word("0") })
        );
        // supported on [0] but not on [00]
        assert_eq!(
            strip_copy(&copy_in(&x0(), &word("0")), &word("00")),
            Err(ConstructError::NotACopy { at: word("00") })
        );
    }

    #[test]
    fn product_with_copy_at_a_branch_pair_adds_sizes() {
        // if u -> v is a branch pair of f, |f · g_[v]| = |f| + |g| and every
        // other branch pair of f persists in the product
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..40 {
            use rand::Rng;
            let f = random_nontrivial(&mut rng, 7);
            let g = random_element(&mut rng, 6);
            let pairs = f.branch_pairs();
            let chosen = rng.gen_range(0..pairs.len());
            let (_, v) = &pairs[chosen];
            let product = f.multiply(&copy_in(&g, v));
            assert_eq!(product.size(), f.size() + g.size());
            for (idx, (a, b)) in pairs.iter().enumerate() {
                if idx != chosen {
                    assert!(
                        product.has_branch_pair(a, b),
                        "pair {a}->{b} lost in f·g_[{v}]"
                    );
                }
            }
        }
    }

    #[test]
    fn x_and_y_match_their_tables() {
        let x = make_x();
        assert_eq!(x.size(), 6);
        assert_eq!(
            x.branch_pairs(),
            branch_table(&[
                ("000", "000"),
                ("00100", "0010"),
                ("00101", "00110"),
                ("0011", "00111"),
                ("01", "010"),
                ("10", "011"),
                ("11", "1"),
            ])
        );
        let y = make_y();
        assert_eq!(y.size(), 2);
        assert_eq!(y, x0());
        assert_eq!(x.ab().as_pair(), (0, 1));
        assert_eq!(y.ab().as_pair(), (1, -1));
    }

    #[test]
    fn phi_maps_shift_sizes_and_build_the_expected_diagrams() {
        assert_eq!(phi1(&Element::identity()), make_x());
        assert_eq!(phi2(&Element::identity()), make_y());
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        for _ in 0..100 {
            let g = random_element(&mut rng, 8);
            let p1 = phi1(&g);
            let p2 = phi2(&g);
            assert_eq!(p1.size(), g.size() + 6);
            assert_eq!(p2.size(), g.size() + 2);
            // structural picture: x's diagram with g's trees attached at the
            // 00101 source branch and the 00110 target branch
            let x = make_x();
            let source = x.source().attach_at_leaf(&word("00101"), g.source()).unwrap();
            let target = x.target().attach_at_leaf(&word("00110"), g.target()).unwrap();
            assert_eq!(
                p1,
                TreeDiagram::new(source, target).unwrap().reduce()
            );
        }
    }

    #[test]
    fn phi_inverses_round_trip_and_reject() {
        assert_eq!(invert_phi1(&make_x()).unwrap(), Element::identity());
        assert_eq!(invert_phi2(&make_y()).unwrap(), Element::identity());
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let h = random_element(&mut rng, 8);
            assert_eq!(invert_phi1(&phi1(&h)).unwrap(), h);
            assert_eq!(invert_phi2(&phi2(&h)).unwrap(), h);
        }
        assert_eq!(
            invert_phi1(&x1()),
            Err(ConstructError::NotInImage { stage: Stage::Phi1 })
        );
        assert_eq!(
            invert_phi2(&x0().invert()),
            Err(ConstructError::NotInImage { stage: Stage::Phi2 })
        );
    }

    #[test]
    fn tuples_sort_by_descending_size() {
        let t = KTuple::new(vec![x0(), make_x(), Element::identity()]);
        let sizes: Vec<usize> = t.members().iter().map(Element::size).collect();
        assert_eq!(sizes, vec![6, 2, 0]);
        assert_eq!(t.sum_size(), 8);
        assert_eq!(t.max_size(), 6);
        // ties broken canonically: x0^-1 sorts before x0
        let tie = KTuple::new(vec![x0(), x0().invert()]);
        assert_eq!(tie.members()[0], x0().invert());
    }

    #[test]
    fn big_phi_on_reference_tuples() {
        let identities = KTuple::new(vec![Element::identity(), Element::identity()]);
        assert_eq!(
            big_phi(&identities),
            KTuple::new(vec![make_x(), make_y()])
        );
        // x1 (size 3) is the larger member
        assert_eq!(
            big_phi(&KTuple::new(vec![x0(), x1()])),
            KTuple::new(vec![phi1(&x1()), phi2(&x0())])
        );
    }

    #[test]
    fn big_phi_shifts_and_inverts() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for k in 2..=4usize {
            for _ in 0..60 {
                let members: Vec<Element> =
                    (0..k).map(|_| random_element(&mut rng, 7)).collect();
                let tuple = KTuple::new(members);
                let image = big_phi(&tuple);
                assert_eq!(image.sum_size(), tuple.sum_size() + 8);
                assert_eq!(image.max_size(), tuple.max_size() + 6);
                assert_eq!(is_in_s(&image).unwrap(), tuple);
            }
        }
    }

    #[test]
    fn s_membership_rejects_non_images() {
        assert_eq!(
            is_in_s(&KTuple::new(vec![make_x(), make_y()])).unwrap(),
            KTuple::new(vec![Element::identity(), Element::identity()])
        );
        assert!(is_in_s(&KTuple::new(vec![x0(), x1()])).is_err());
        assert_eq!(
            is_in_s(&KTuple::new(vec![x0()])),
            Err(ConstructError::NotInImage { stage: Stage::Arity })
        );
    }

    #[test]
    fn worked_plan_matches_hand_computation() {
        let f1 = copy_in(&x1(), &word("0"));
        let f2 = copy_in(&x0(), &word("0"));
        assert_eq!((f1.size(), f2.size()), (4, 3));
        let plan = nat_plan(&[f2.clone(), f1.clone()], &word("0"), 4).unwrap();
        assert_eq!(plan.gens, vec![f1, f2]); // re-sorted descending
        assert_eq!(plan.v_i, vec![word("00"), word("00")]);
        assert_eq!(plan.u_i, vec![word("00"), word("000")]);
        assert_eq!(plan.ell, 1);
        assert_eq!(plan.p, word("00"));
        assert_eq!(plan.w_i.iter().map(BinaryWord::len).collect::<Vec<_>>(), vec![10, 9]);
        assert_eq!(plan.p_i, vec![BinaryWord::zeros(12), BinaryWord::zeros(11)]);
        assert_eq!(plan.c1, 38);
        assert_eq!(plan.c2, 14);
        assert_eq!(plan.xbar, copy_in(&make_x(), &word("00")));
        assert_eq!(plan.ybar, copy_in(&make_y(), &word("00")));
    }

    #[test]
    fn plan_on_the_standard_generators() {
        let plan = nat_plan(&[x0(), x1()], &BinaryWord::empty(), 4).unwrap();
        assert_eq!(plan.gens, vec![x1(), x0()]);
        assert_eq!(plan.v_i, vec![word("0"), word("0")]);
        assert_eq!(plan.u_i, vec![word("0"), word("00")]);
        assert_eq!(plan.ell, 1);
        assert_eq!(plan.p, word("0"));
        assert_eq!(
            nat_plan(&[x0(), x1()], &word("0"), 3).unwrap_err(),
            ConstructError::ArityTooSmall { k: 3, min: 4 }
        );
    }

    #[test]
    fn nat_map_identities_on_random_tuples() {
        let f1 = copy_in(&x1(), &word("0"));
        let f2 = copy_in(&x0(), &word("0"));
        let plan = nat_plan(&[f1, f2], &word("0"), 5).unwrap();
        let m = plan.m();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..60 {
            let members: Vec<Element> =
                (0..plan.k).map(|_| random_nontrivial(&mut rng, 8)).collect();
            let tuple = KTuple::new(members);
            let image = nat_map(&plan, &tuple);
            assert_eq!(image.sum_size(), tuple.sum_size() + plan.c1);
            assert_eq!(image.max_size(), tuple.max_size() + plan.c2);
            assert_eq!(invert_nat_map(&plan, &image).unwrap(), tuple);

            // per-member size laws on the sorted members
            let h = tuple.members();
            for i in 0..m {
                assert_eq!(
                    plan.psi(i, &h[i]).size(),
                    h[i].size() + plan.gens[i].size() + plan.p.len() + 7 + m - (i + 1)
                );
            }
            assert_eq!(plan.gamma1(&h[m]).size(), h[m].size() + plan.p.len() + 6);
            assert_eq!(plan.gamma2(&h[m + 1]).size(), h[m + 1].size() + plan.p.len() + 2);
            for hj in &h[m + 2..] {
                assert_eq!(plan.rho(hj).size(), hj.size() + plan.p.len());
            }

            // strict ordering of the image chain
            let image_sizes: Vec<usize> =
                image.members().iter().map(Element::size).collect();
            for pair in image_sizes.windows(2).take(m + 2).enumerate() {
                let (idx, wnd) = pair;
                if idx < m + 1 {
                    assert!(wnd[0] > wnd[1], "chain not strict at {idx}: {image_sizes:?}");
                }
            }

            // gamma factorization and generator recovery
            assert_eq!(plan.gamma1(&h[m]), copy_in(&phi1(&h[m]), &plan.p));
            assert_eq!(plan.gamma2(&h[m + 1]), copy_in(&phi2(&h[m + 1]), &plan.p));
            for i in 0..m {
                assert_eq!(
                    plan.psi(i, &h[i]).multiply(&copy_in(&h[i], &plan.p_i[i]).invert()),
                    plan.gens[i]
                );
            }
        }
    }

    #[test]
    fn invert_nat_map_rejects_non_images() {
        let plan = nat_plan(&[copy_in(&x1(), &word("0"))], &word("0"), 3).unwrap();
        let junk = KTuple::new(vec![make_x(), make_y(), x0()]);
        assert!(invert_nat_map(&plan, &junk).is_err());
    }
}
