//! Finite sets and functions, the limits and colimits used throughout, and
//! permutation and free-action machinery.

mod action;
mod perm;

pub use action::{orbit_pullback_comparison, GroupAction, OrbitPullbackComparison};
pub use perm::{block_perm, block_sum, Perm};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An opaque, totally ordered element label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Atom(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        Label::Atom(s.into())
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Tuple(vec![a, b])
    }

    pub fn ints(xs: impl IntoIterator<Item = usize>) -> Self {
        Label::Tuple(xs.into_iter().map(|x| Label::Int(x as i64)).collect())
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Atom(s.to_string())
    }
}

impl From<i64> for Label {
    fn from(x: i64) -> Self {
        Label::Int(x)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(x) => write!(f, "{x}"),
            Label::Atom(s) => write!(f, "{s}"),
            Label::Tuple(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A finite set whose elements are kept in canonical (sorted) order.
/// Elements are addressed by their index in that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Label>", into = "Vec<Label>")]
pub struct FinSet {
    elements: Vec<Label>,
}

impl TryFrom<Vec<Label>> for FinSet {
    type Error = Error;

    fn try_from(v: Vec<Label>) -> Result<Self> {
        FinSet::new(v)
    }
}

impl From<FinSet> for Vec<Label> {
    fn from(s: FinSet) -> Self {
        s.elements
    }
}

impl FinSet {
    /// Sorts the labels; duplicates are rejected.
    pub fn new(mut elements: Vec<Label>) -> Result<Self> {
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::structural(format!("duplicate label {}", w[0])));
        }
        Ok(FinSet { elements })
    }

    pub fn empty() -> Self {
        FinSet::default()
    }

    /// The set {0, .., n-1} labelled by integers.
    pub fn range(n: usize) -> Self {
        FinSet {
            elements: (0..n as i64).map(Label::Int).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.elements[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.elements
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.elements.binary_search(label).ok()
    }

    pub fn require(&self, label: &Label) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::structural(format!("unknown label {label}")))
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.elements.len()
    }
}

/// A total function between finite sets, stored as an index table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinFn {
    src: FinSet,
    tgt: FinSet,
    table: Vec<usize>,
}

impl FinFn {
    pub fn new(src: FinSet, tgt: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != src.len() {
            return Err(Error::structural(format!(
                "function table has {} entries for a domain of size {}",
                table.len(),
                src.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= tgt.len()) {
            return Err(Error::structural(format!("image index {bad} outside codomain")));
        }
        Ok(FinFn { src, tgt, table })
    }

    pub fn from_labels(src: FinSet, tgt: FinSet, pairs: &[(Label, Label)]) -> Result<Self> {
        let mut table = vec![usize::MAX; src.len()];
        for (a, b) in pairs {
            table[src.require(a)?] = tgt.require(b)?;
        }
        if let Some(i) = table.iter().position(|&t| t == usize::MAX) {
            return Err(Error::structural(format!("function undefined on {}", src.label(i))));
        }
        FinFn::new(src, tgt, table)
    }

    pub fn identity(set: &FinSet) -> Self {
        FinFn {
            src: set.clone(),
            tgt: set.clone(),
            table: set.indices().collect(),
        }
    }

    pub fn src(&self) -> &FinSet {
        &self.src
    }

    pub fn tgt(&self) -> &FinSet {
        &self.tgt
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply_label(&self, label: &Label) -> Result<&Label> {
        Ok(self.tgt.label(self.table[self.src.require(label)?]))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FinFn) -> Result<FinFn> {
        if other.tgt != self.src {
            return Err(Error::structural("composing functions with mismatched sets"));
        }
        let table = other.table.iter().map(|&i| self.table[i]).collect();
        FinFn::new(other.src.clone(), self.tgt.clone(), table)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.tgt.len()];
        self.table.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.tgt.len()];
        for &t in &self.table {
            seen[t] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// The pullback `{(a, b) | f(a) = g(b)}` of a cospan, labelled by pairs,
/// with its two projections.
pub fn pullback(f: &FinFn, g: &FinFn) -> Result<(FinSet, FinFn, FinFn)> {
    if f.tgt != g.tgt {
        return Err(Error::structural("pullback of maps into different sets"));
    }
    let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
    for b in g.src.indices() {
        by_image.entry(g.apply(b)).or_default().push(b);
    }
    let mut pairs = Vec::new();
    for a in f.src.indices() {
        if let Some(bs) = by_image.get(&f.apply(a)) {
            pairs.extend(bs.iter().map(|&b| (a, b)));
        }
    }
    // sources are sorted, so pairs come out in label order
    let set = FinSet {
        elements: pairs
            .iter()
            .map(|&(a, b)| Label::pair(f.src.label(a).clone(), g.src.label(b).clone()))
            .collect(),
    };
    let p1 = FinFn::new(set.clone(), f.src.clone(), pairs.iter().map(|p| p.0).collect())?;
    let p2 = FinFn::new(set.clone(), g.src.clone(), pairs.iter().map(|p| p.1).collect())?;
    Ok((set, p1, p2))
}

/// Checks that the square
///
/// ```text
/// A --top--> B
/// |          |
/// left       right
/// v          v
/// C --bot--> D
/// ```
///
/// commutes and is a pullback: every pair `(c, b)` with `bot(c) = right(b)`
/// has exactly one `a` over it. The error carries a witness.
pub fn check_pullback_square(
    top: &FinFn,
    left: &FinFn,
    right: &FinFn,
    bottom: &FinFn,
) -> std::result::Result<(), String> {
    if top.src != left.src || top.tgt != right.src || left.tgt != bottom.src || right.tgt != bottom.tgt {
        return Err("square has mismatched corners".to_string());
    }
    let mut over: HashMap<(usize, usize), usize> = HashMap::new();
    for a in top.src.indices() {
        let (b, c) = (top.apply(a), left.apply(a));
        if right.apply(b) != bottom.apply(c) {
            return Err(format!("square does not commute at {}", top.src.label(a)));
        }
        *over.entry((c, b)).or_default() += 1;
    }
    let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
    for b in right.src.indices() {
        by_image.entry(right.apply(b)).or_default().push(b);
    }
    for c in bottom.src.indices() {
        for &b in by_image.get(&bottom.apply(c)).map(Vec::as_slice).unwrap_or(&[]) {
            let n = over.get(&(c, b)).copied().unwrap_or(0);
            if n != 1 {
                return Err(format!(
                    "{n} lifts over ({}, {})",
                    bottom.src.label(c),
                    right.src.label(b)
                ));
            }
        }
    }
    Ok(())
}

/// Disjoint-set forest over `0..n`.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns true if the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    /// Maps every element to the smallest element of its class.
    pub fn min_representatives(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut min_of_root = vec![usize::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            min_of_root[r] = min_of_root[r].min(x);
        }
        (0..n).map(|x| min_of_root[self.find(x)]).collect()
    }
}

/// The coequalizer of a parallel pair: classes of the equivalence generated
/// by `f(x) ~ g(x)`, each labelled by its minimal member.
pub fn coequalizer(f: &FinFn, g: &FinFn) -> Result<(FinSet, FinFn)> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(Error::structural("coequalizer of maps with different shapes"));
    }
    let mut uf = UnionFind::new(f.tgt.len());
    for x in f.src.indices() {
        uf.union(f.apply(x), g.apply(x));
    }
    let reps = uf.min_representatives();
    let mut class_reps: Vec<usize> = reps.clone();
    class_reps.sort_unstable();
    class_reps.dedup();
    let quotient = FinSet {
        elements: class_reps.iter().map(|&r| f.tgt.label(r).clone()).collect(),
    };
    let table = reps
        .iter()
        .map(|r| class_reps.binary_search(r).expect("representative present"))
        .collect();
    let q = FinFn::new(f.tgt.clone(), quotient.clone(), table)?;
    Ok((quotient, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> FinSet {
        FinSet::new(xs.iter().map(|&x| Label::from(x)).collect()).unwrap()
    }

    fn func(src: &FinSet, tgt: &FinSet, pairs: &[(&str, &str)]) -> FinFn {
        let pairs: Vec<_> = pairs.iter().map(|&(a, b)| (a.into(), b.into())).collect();
        FinFn::from_labels(src.clone(), tgt.clone(), &pairs).unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(FinSet::new(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn pullback_of_empty_maps_is_empty() {
        let e = FinSet::empty();
        let (p, _, _) = pullback(&FinFn::identity(&e), &FinFn::identity(&e)).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn pullback_along_identity_is_other_leg() {
        let z = set(&["0", "1"]);
        let b = set(&["p", "q", "r"]);
        let g = func(&b, &z, &[("p", "0"), ("q", "1"), ("r", "1")]);
        let (p, _, p2) = pullback(&FinFn::identity(&z), &g).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p2.is_bijective());
    }

    #[test]
    fn pullback_small_example() {
        let ab = set(&["a", "b"]);
        let z = set(&["0", "1"]);
        let f = func(&ab, &z, &[("a", "0"), ("b", "1")]);
        let g = func(&ab, &z, &[("a", "1"), ("b", "1")]);
        let (p, _, _) = pullback(&f, &g).unwrap();
        // oracle: filter all four pairs
        let mut expected = Vec::new();
        for x in ["a", "b"] {
            for y in ["a", "b"] {
                if f.apply_label(&x.into()).unwrap() == g.apply_label(&y.into()).unwrap() {
                    expected.push(Label::pair(x.into(), y.into()));
                }
            }
        }
        assert_eq!(p.labels(), expected.as_slice());
        assert_eq!(p.labels(), &[Label::pair("b".into(), "a".into()), Label::pair("b".into(), "b".into())]);
    }

    #[test]
    fn pullback_rejects_mismatched_codomains() {
        let a = set(&["a"]);
        let z1 = set(&["0"]);
        let z2 = set(&["1"]);
        let f = func(&a, &z1, &[("a", "0")]);
        let g = func(&a, &z2, &[("a", "1")]);
        assert!(matches!(pullback(&f, &g), Err(Error::Structural(_))));
    }

    #[test]
    fn coequalizer_of_equal_legs_is_identity() {
        let x = set(&["x", "y"]);
        let t = set(&["1", "2", "3"]);
        let f = func(&x, &t, &[("x", "1"), ("y", "2")]);
        let (q, map) = coequalizer(&f, &f).unwrap();
        assert_eq!(q, t);
        assert!(map.is_bijective());
    }

    #[test]
    fn coequalizer_single_merge() {
        let x = set(&["x"]);
        let t = set(&["p", "q"]);
        let f = func(&x, &t, &[("x", "p")]);
        let g = func(&x, &t, &[("x", "q")]);
        let (q, _) = coequalizer(&f, &g).unwrap();
        assert_eq!(q.labels(), &[Label::from("p")]);
    }

    #[test]
    fn coequalizer_transitive_closure() {
        let x = set(&["x", "y"]);
        let t = set(&["1", "2", "3"]);
        let f = func(&x, &t, &[("x", "1"), ("y", "2")]);
        let g = func(&x, &t, &[("x", "2"), ("y", "3")]);
        let (q, map) = coequalizer(&f, &g).unwrap();
        assert_eq!(q.len(), 1);
        assert!(map.table().iter().all(|&c| c == 0));
    }

    #[test]
    fn coequalizer_rejects_shape_mismatch() {
        let x = set(&["x"]);
        let y = set(&["x", "y"]);
        let t = set(&["1"]);
        let f = func(&x, &t, &[("x", "1")]);
        let g = func(&y, &t, &[("x", "1"), ("y", "1")]);
        assert!(coequalizer(&f, &g).is_err());
    }
}
