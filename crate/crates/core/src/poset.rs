//! Finite posets over a named ground set of at most 64 elements.
//!
//! Subsets of the ground set are [`ElementSet`] bitmasks. Element `i` is the
//! `i`-th name in sorted order, so two posets built from the same names and
//! relations are identical regardless of input order.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("unknown element name `{0}`")]
    UnknownName(String),
    #[error("relations contain a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),
    #[error("{0} elements exceeds the limit of {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("sigma is undefined for the empty set")]
    EmptySetSigma,
    #[error("set is not an ideal of the poset")]
    NotAnIdeal,
    #[error("set {bits:#x} is not contained in a ground set of {n} elements")]
    ForeignSet { bits: u64, n: usize },
}

/// A subset of a poset's ground set, as a bitmask over element indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        ElementSet(1u64 << i)
    }

    /// The first `n` element indices.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Self::EMPTY, |acc, i| acc.with(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        ElementSet(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Self {
        ElementSet(self.0 & !(1u64 << i))
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: ElementSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Element indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, in increasing bitmask order (starting with the empty set).
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(ElementSet(cur))
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for ElementSet {
    type Output = ElementSet;
    fn bitor(self, rhs: Self) -> Self {
        ElementSet(self.0 | rhs.0)
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    fn bitand(self, rhs: Self) -> Self {
        ElementSet(self.0 & rhs.0)
    }
}

impl Sub for ElementSet {
    type Output = ElementSet;
    fn sub(self, rhs: Self) -> Self {
        ElementSet(self.0 & !rhs.0)
    }
}

impl Not for ElementSet {
    type Output = ElementSet;
    fn not(self) -> Self {
        ElementSet(!self.0)
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        ElementSet::from_indices(iter)
    }
}

/// A finite partially ordered set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    names: Vec<String>,
    /// `below[v]` is the set of `u` with `u <= v`.
    below: Vec<ElementSet>,
    /// `above[u]` is the set of `v` with `u <= v`.
    above: Vec<ElementSet>,
    /// Largest cardinality of a chain with the element as its top.
    len: Vec<usize>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .cover_pairs()
            .into_iter()
            .map(|(u, v)| format!("{}<{}", self.names[u], self.names[v]))
            .collect();
        write!(f, "Poset({:?}; {})", self.names, rels.join(","))
    }
}

impl Poset {
    /// Builds the reflexive-transitive closure of `relations` (pairs `(u, v)`
    /// meaning `u <= v`) over `elements`.
    pub fn new<S: AsRef<str>>(elements: &[S], relations: &[(S, S)]) -> Result<Self, PosetError> {
        let mut names: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        if names.len() > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(names.len()));
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(PosetError::DuplicateName(w[0].clone()));
        }
        let index = |s: &str| {
            names.binary_search_by(|n| n.as_str().cmp(s)).map_err(|_| PosetError::UnknownName(s.to_owned()))
        };
        let mut pairs = Vec::with_capacity(relations.len());
        for (u, v) in relations {
            pairs.push((index(u.as_ref())?, index(v.as_ref())?));
        }
        Self::from_index_pairs(names, &pairs)
    }

    /// Like [`Poset::new`] but with relations given by element index into the
    /// (already sorted, distinct) `names`.
    pub fn from_index_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        debug_assert!(names.windows(2).all(|w| w[0] < w[1]));
        let mut below: Vec<ElementSet> = (0..n).map(ElementSet::singleton).collect();
        for &(u, v) in pairs {
            below[v] = below[v].with(u);
        }
        // Warshall over bitmasks.
        for k in 0..n {
            for v in 0..n {
                if below[v].contains(k) {
                    below[v] = below[v] | below[k];
                }
            }
        }
        for v in 0..n {
            for u in (below[v] - ElementSet::singleton(v)).iter() {
                if below[u].contains(v) {
                    let (a, b) = if u < v { (u, v) } else { (v, u) };
                    return Err(PosetError::CycleDetected(names[a].clone(), names[b].clone()));
                }
            }
        }
        Ok(Self::from_below(names, below))
    }

    fn from_below(names: Vec<String>, below: Vec<ElementSet>) -> Self {
        let n = names.len();
        let mut above = vec![ElementSet::EMPTY; n];
        for (v, b) in below.iter().enumerate() {
            for u in b.iter() {
                above[u] = above[u].with(v);
            }
        }
        // Strictly-below sets are smaller, so processing by size is a linear extension.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| below[v].len());
        let mut len = vec![0usize; n];
        for &v in &order {
            len[v] = 1 + (below[v] - ElementSet::singleton(v)).iter().map(|u| len[u]).max().unwrap_or(0);
        }
        Poset { names, below, above, len }
    }

    /// Antichain on the given names.
    pub fn antichain<S: AsRef<str>>(elements: &[S]) -> Result<Self, PosetError> {
        Self::new(elements, &[])
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.size())
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ElementSet, PosetError> {
        names.iter().try_fold(ElementSet::EMPTY, |acc, s| {
            self.index_of(s.as_ref()).map(|i| acc.with(i)).ok_or_else(|| PosetError::UnknownName(s.as_ref().to_owned()))
        })
    }

    pub fn set_names(&self, set: ElementSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }

    /// Rejects sets with bits outside the ground set.
    pub fn check_set(&self, set: ElementSet) -> Result<ElementSet, PosetError> {
        if set.is_subset(self.ground()) {
            Ok(set)
        } else {
            Err(PosetError::ForeignSet { bits: set.bits(), n: self.size() })
        }
    }

    fn assert_own(&self, set: ElementSet) {
        assert!(set.is_subset(self.ground()), "element set {set:?} is foreign to a poset of {} elements", self.size());
    }

    /// `u <= v`.
    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.below[v].contains(u)
    }

    pub fn lt(&self, u: usize, v: usize) -> bool {
        u != v && self.leq(u, v)
    }

    /// `{u : u <= v}`.
    pub fn principal_ideal(&self, v: usize) -> ElementSet {
        self.below[v]
    }

    /// `{w : v <= w}`.
    pub fn principal_filter(&self, v: usize) -> ElementSet {
        self.above[v]
    }

    /// Pairs `(u, v)` with `u < v` and nothing strictly between.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.size() {
            let strict = self.below[v] - ElementSet::singleton(v);
            for u in strict.iter() {
                let between = strict & (self.above[u] - ElementSet::singleton(u));
                if between.is_empty() {
                    out.push((u, v));
                }
            }
        }
        out.sort();
        out
    }

    /// Pairs `(u, v)` with `u < v`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.size() {
            for u in (self.below[v] - ElementSet::singleton(v)).iter() {
                out.push((u, v));
            }
        }
        out.sort();
        out
    }

    /// The poset with every relation reversed.
    pub fn dual(&self) -> Poset {
        Poset {
            names: self.names.clone(),
            below: self.above.clone(),
            above: self.below.clone(),
            len: Vec::new(),
        }
        .relevel()
    }

    fn relevel(self) -> Poset {
        Self::from_below(self.names, self.below)
    }

    /// The ideal generated by `set`.
    pub fn down_closure(&self, set: ElementSet) -> ElementSet {
        self.assert_own(set);
        set.iter().fold(ElementSet::EMPTY, |acc, v| acc | self.below[v])
    }

    /// The up-set generated by `set`, i.e. the ideal it generates in the dual poset.
    pub fn up_closure(&self, set: ElementSet) -> ElementSet {
        self.assert_own(set);
        set.iter().fold(ElementSet::EMPTY, |acc, v| acc | self.above[v])
    }

    pub fn maximal(&self, set: ElementSet) -> ElementSet {
        self.assert_own(set);
        set.iter().filter(|&v| (self.above[v] & set) == ElementSet::singleton(v)).collect()
    }

    pub fn minimal(&self, set: ElementSet) -> ElementSet {
        self.assert_own(set);
        set.iter().filter(|&v| (self.below[v] & set) == ElementSet::singleton(v)).collect()
    }

    pub fn is_ideal(&self, set: ElementSet) -> bool {
        self.down_closure(set) == set
    }

    pub fn is_up_set(&self, set: ElementSet) -> bool {
        self.up_closure(set) == set
    }

    /// Ideal of the subposet induced on `within`.
    pub fn is_ideal_in(&self, set: ElementSet, within: ElementSet) -> bool {
        set.is_subset(within) && set.iter().all(|v| (self.below[v] & within).is_subset(set))
    }

    /// Up-set of the subposet induced on `within`.
    pub fn is_up_set_in(&self, set: ElementSet, within: ElementSet) -> bool {
        set.is_subset(within) && set.iter().all(|v| (self.above[v] & within).is_subset(set))
    }

    /// Down-closure of `set` inside the subposet induced on `within`.
    pub fn down_closure_in(&self, set: ElementSet, within: ElementSet) -> ElementSet {
        self.down_closure(set) & within
    }

    pub fn is_antichain(&self, set: ElementSet) -> bool {
        self.maximal(set) == set
    }

    /// All ideals of the subposet induced on `within`, sorted by
    /// `(cardinality, bitmask)`. Always contains the empty set and `within`.
    pub fn ideals(&self, within: ElementSet) -> Result<Vec<ElementSet>, PosetError> {
        self.check_set(within)?;
        let mut order: Vec<usize> = within.iter().collect();
        order.sort_by_key(|&v| (self.len[v], v));
        let mut out = Vec::new();
        self.collect_ideals(&order, within, 0, ElementSet::EMPTY, &mut out);
        out.sort_by_key(|s| (s.len(), s.bits()));
        Ok(out)
    }

    // `order` is a linear extension, so every predecessor of `order[k]` is decided before it.
    fn collect_ideals(&self, order: &[usize], within: ElementSet, k: usize, cur: ElementSet, out: &mut Vec<ElementSet>) {
        if k == order.len() {
            out.push(cur);
            return;
        }
        let v = order[k];
        self.collect_ideals(order, within, k + 1, cur, out);
        let preds = (self.below[v] & within).without(v);
        if preds.is_subset(cur) {
            self.collect_ideals(order, within, k + 1, cur.with(v), out);
        }
    }

    /// All up-sets of the subposet induced on `within`, sorted by `(cardinality, bitmask)`.
    pub fn up_sets(&self, within: ElementSet) -> Result<Vec<ElementSet>, PosetError> {
        let mut out: Vec<ElementSet> = self.ideals(within)?.into_iter().map(|i| within - i).collect();
        out.sort_by_key(|s| (s.len(), s.bits()));
        Ok(out)
    }

    pub fn len_of(&self, y: usize) -> usize {
        self.len[y]
    }

    /// Largest chain cardinality.
    pub fn height(&self) -> usize {
        self.len.iter().copied().max().unwrap_or(0)
    }

    /// `(m, W)` where `W[j - 1]` holds the elements with `len == j`.
    pub fn levels(&self) -> (usize, Vec<ElementSet>) {
        let m = self.height();
        let mut w = vec![ElementSet::EMPTY; m];
        for (v, &l) in self.len.iter().enumerate() {
            w[l - 1] = w[l - 1].with(v);
        }
        (m, w)
    }

    /// The level index `r` such that `D` lies in levels `r..=m` but not in
    /// levels `r+1..=m`; that is, the smallest level met by `D`.
    pub fn sigma(&self, d: ElementSet) -> Result<usize, PosetError> {
        self.check_set(d)?;
        d.iter().map(|v| self.len[v]).min().ok_or(PosetError::EmptySetSigma)
    }

    /// Every element of a lower level lies below every element of each higher level.
    pub fn is_hierarchical(&self) -> bool {
        let n = self.size();
        (0..n).all(|u| (0..n).all(|v| self.len[u] + 1 > self.len[v] || self.leq(u, v)))
    }

    /// Elements on the same level.
    pub fn same_level(&self, u: usize, v: usize) -> bool {
        self.len[u] == self.len[v]
    }

    /// The five equivalent characterisations of a hierarchical poset, each
    /// evaluated independently by exhaustive search.
    pub fn hierarchical_equivalents(&self) -> HierarchicalReport {
        let ground = self.ground();
        let ideals = self.ideals(ground).expect("ground set is own");
        let up_sets: Vec<ElementSet> = ideals.iter().map(|&i| ground - i).collect();

        let equal_size_equal = |family: &[ElementSet], f: &dyn Fn(ElementSet) -> usize| {
            family.iter().all(|&a| family.iter().all(|&b| a.len() != b.len() || f(a) == f(b)))
        };
        let cond2 = equal_size_equal(&up_sets, &|d| self.minimal(d).len());
        let cond4 = equal_size_equal(&ideals, &|i| self.maximal(i).len());

        let all_leq = |lo: ElementSet, hi: ElementSet| lo.iter().all(|a| hi.iter().all(|b| self.leq(a, b)));
        // A set with everything inside below everything outside is necessarily an
        // ideal, and dually, so it suffices to range over ideals and up-sets.
        let cond3 = ideals.iter().filter(|&&a| all_leq(a, ground - a)).all(|&a| {
            let top = self.maximal(a);
            all_leq(a - top, top)
        });
        let cond5 = up_sets.iter().filter(|&&b| all_leq(ground - b, b)).all(|&b| {
            let bottom = self.minimal(b);
            all_leq(bottom, b - bottom)
        });
        HierarchicalReport {
            by_definition: self.is_hierarchical(),
            up_set_minima: cond2,
            top_segment: cond3,
            ideal_maxima: cond4,
            bottom_segment: cond5,
        }
    }

    /// A maximal chain of ideals `∅ = I_0 ⊂ … ⊂ I_n = Ω` with `|I_j| = j`.
    pub fn ideal_chain(&self) -> Vec<ElementSet> {
        self.extend_through(ElementSet::EMPTY).expect("empty set is an ideal")
    }

    /// A maximal chain of ideals passing through the ideal `through`.
    pub fn extend_through(&self, through: ElementSet) -> Result<Vec<ElementSet>, PosetError> {
        self.check_set(through)?;
        if !self.is_ideal(through) {
            return Err(PosetError::NotAnIdeal);
        }
        let mut chain = vec![ElementSet::EMPTY];
        let mut cur = ElementSet::EMPTY;
        for target in [through, self.ground()] {
            while cur != target {
                let next = self.minimal(target - cur).first().expect("nonempty remainder");
                cur = cur.with(next);
                chain.push(cur);
            }
        }
        Ok(chain)
    }
}

/// Outcome of each characterisation in [`Poset::hierarchical_equivalents`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HierarchicalReport {
    /// Levels are totally ordered against each other.
    pub by_definition: bool,
    /// Equal-size up-sets have equally many minimal elements.
    pub up_set_minima: bool,
    /// Every ideal lying below its complement has its non-maximal part below its maximal part.
    pub top_segment: bool,
    /// Equal-size ideals have equally many maximal elements.
    pub ideal_maxima: bool,
    /// Every up-set lying above its complement has its minimal part below the rest.
    pub bottom_segment: bool,
}

impl HierarchicalReport {
    pub fn as_array(&self) -> [bool; 5] {
        [self.by_definition, self.up_set_minima, self.top_segment, self.ideal_maxima, self.bottom_segment]
    }

    pub fn all_agree(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&x| x == a[0])
    }
}

/// Every labeled poset on the element names `names` (which must be sorted and
/// distinct), in a deterministic order.
pub fn labeled_posets(names: &[String]) -> Vec<Poset> {
    let n = names.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0u8; pairs.len()];
    loop {
        let mut below: Vec<ElementSet> = (0..n).map(ElementSet::singleton).collect();
        for (&(a, b), &c) in pairs.iter().zip(&choice) {
            match c {
                1 => below[b] = below[b].with(a),
                2 => below[a] = below[a].with(b),
                _ => {}
            }
        }
        // Already closed exactly when the relation is transitive.
        let transitive = (0..n).all(|v| below[v].iter().all(|u| below[u].is_subset(below[v])));
        if transitive {
            out.push(Poset::from_below(names.to_vec(), below));
        }
        // Odometer over {none, a<b, b<a} per pair.
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] == 3 {
                choice[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }
}

/// Default element names `a`, `b`, `c`, …
pub fn default_names(n: usize) -> Vec<String> {
    assert!(n <= 26);
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Sorted, distinct canonical key for a relation set, used to order reports.
pub fn relation_key(p: &Poset) -> String {
    let rels: BTreeSet<String> =
        p.cover_pairs().into_iter().map(|(u, v)| format!("{}<{}", p.name(u), p.name(v))).collect();
    rels.into_iter().collect::<Vec<_>>().join(" ")
}
