//! The ambient space `H = Π_i H_i` over a poset's elements, with each `H_i` a
//! product of cyclic groups, and its character group.
//!
//! Characters are indexed by codewords of the same shape: the character with
//! index `a` sends `b` to `Π_f ζ_{m_f}^{a_f b_f}` over all cyclic factors `f`.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, CyclotomicRing};
use crate::poset::{ElementSet, Poset};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;
pub const DEFAULT_SUBGROUP_CAP: u64 = 4096;
pub const DEFAULT_SCHEME_CAP: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("expected cyclic factors for {expected} elements, got {got}")]
    FactorCount { expected: usize, got: usize },
    #[error("element `{0}` has no cyclic factors")]
    NoFactors(String),
    #[error("element `{0}` has a cyclic factor of order 0")]
    ZeroOrder(String),
    #[error("group too large: {size} exceeds the cap of {cap}")]
    TooLarge { size: u128, cap: u64 },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("codeword has the wrong shape or out-of-range residues")]
    BadCodeword,
}

/// Enumeration budgets; all are configuration with safe defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub enumerate: u64,
    pub subgroups: u64,
    pub scheme: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enumerate: DEFAULT_ENUMERATION_CAP, subgroups: DEFAULT_SUBGROUP_CAP, scheme: DEFAULT_SCHEME_CAP }
    }
}

/// Residues over all cyclic factors, element by element. Also the index of a character.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Codeword(pub Vec<u64>);

pub type Character = Codeword;

#[derive(Debug, Clone)]
pub struct AmbientSpace {
    poset: Poset,
    factors: Vec<Vec<u64>>,
    /// Cyclic orders, flattened.
    orders: Vec<u64>,
    /// Owning element of each flattened factor.
    owner: Vec<usize>,
    /// `N / m_f` per flattened factor.
    weights: Vec<u64>,
    exponent: u64,
    size: u128,
    caps: Caps,
    cyclo: CyclotomicRing,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl AmbientSpace {
    /// `factors[i]` lists the cyclic orders at poset element `i`.
    pub fn new(poset: Poset, factors: Vec<Vec<u64>>) -> Result<Self, GroupError> {
        Self::with_caps(poset, factors, Caps::default())
    }

    pub fn with_caps(poset: Poset, factors: Vec<Vec<u64>>, caps: Caps) -> Result<Self, GroupError> {
        if factors.len() != poset.size() {
            return Err(GroupError::FactorCount { expected: poset.size(), got: factors.len() });
        }
        let mut orders = Vec::new();
        let mut owner = Vec::new();
        for (i, fs) in factors.iter().enumerate() {
            if fs.is_empty() {
                return Err(GroupError::NoFactors(poset.name(i).to_owned()));
            }
            if fs.contains(&0) {
                return Err(GroupError::ZeroOrder(poset.name(i).to_owned()));
            }
            orders.extend(fs.iter().copied());
            owner.extend(std::iter::repeat_n(i, fs.len()));
        }
        let exponent = orders.iter().fold(1u64, |acc, &m| acc / gcd(acc, m) * m);
        let size = orders.iter().fold(1u128, |acc, &m| acc.saturating_mul(m as u128));
        let weights = orders.iter().map(|&m| exponent / m).collect();
        let cyclo = CyclotomicRing::new(exponent);
        Ok(AmbientSpace { poset, factors, orders, owner, weights, exponent, size, caps, cyclo })
    }

    /// One cyclic factor of order `h[i]` per element.
    pub fn cyclic(poset: Poset, h: &[u64]) -> Result<Self, GroupError> {
        Self::new(poset, h.iter().map(|&m| vec![m]).collect())
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn factors(&self) -> &[Vec<u64>] {
        &self.factors
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn set_caps(&mut self, caps: Caps) {
        self.caps = caps;
    }

    /// `|H|`, saturating.
    pub fn size(&self) -> u128 {
        self.size
    }

    /// `h_i = |H_i|`.
    pub fn h(&self, i: usize) -> u64 {
        self.factors[i].iter().product()
    }

    pub fn sizes(&self) -> Vec<u64> {
        (0..self.poset.size()).map(|i| self.h(i)).collect()
    }

    pub fn all_at_least_two(&self) -> bool {
        (0..self.poset.size()).all(|i| self.h(i) >= 2)
    }

    /// Group exponent `N`, the lcm of all cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn cyclotomic_ring(&self) -> &CyclotomicRing {
        &self.cyclo
    }

    pub fn check_size(&self, cap: u64) -> Result<usize, GroupError> {
        if self.size > cap as u128 {
            Err(GroupError::TooLarge { size: self.size, cap })
        } else {
            Ok(self.size as usize)
        }
    }

    pub fn identity(&self) -> Codeword {
        Codeword(vec![0; self.orders.len()])
    }

    /// Mixed-radix decoding, first factor most significant.
    pub fn codeword(&self, mut index: usize) -> Codeword {
        let mut r = vec![0u64; self.orders.len()];
        for (slot, &m) in r.iter_mut().zip(&self.orders).rev() {
            *slot = index as u64 % m;
            index /= m as usize;
        }
        Codeword(r)
    }

    pub fn index_of(&self, w: &Codeword) -> usize {
        w.0.iter().zip(&self.orders).fold(0usize, |acc, (&r, &m)| acc * m as usize + r as usize)
    }

    pub fn validate(&self, w: &Codeword) -> Result<(), GroupError> {
        if w.0.len() == self.orders.len() && w.0.iter().zip(&self.orders).all(|(r, m)| r < m) {
            Ok(())
        } else {
            Err(GroupError::BadCodeword)
        }
    }

    /// Every codeword in mixed-radix order; index 0 is the identity.
    pub fn enumerate(&self) -> Result<Vec<Codeword>, GroupError> {
        let n = self.check_size(self.caps.enumerate)?;
        Ok((0..n).map(|i| self.codeword(i)).collect())
    }

    /// Elements whose component is not the identity.
    pub fn support(&self, w: &Codeword) -> ElementSet {
        w.0.iter().zip(&self.owner).filter(|(&r, _)| r != 0).map(|(_, &i)| i).collect()
    }

    /// `|<supp w>|` in `poset`.
    pub fn pweight(&self, poset: &Poset, w: &Codeword) -> usize {
        poset.down_closure(self.support(w)).len()
    }

    /// P-weight with respect to the space's own poset.
    pub fn weight(&self, w: &Codeword) -> usize {
        self.pweight(&self.poset, w)
    }

    /// `<supp α>` in the dual poset, i.e. the up-set generated by the support.
    pub fn dual_closure(&self, alpha: &Character) -> ElementSet {
        self.poset.up_closure(self.support(alpha))
    }

    /// The exponent `k` with `α(β) = ζ_N^k`.
    pub fn char_exponent(&self, alpha: &Character, beta: &Codeword) -> u64 {
        let n = self.exponent;
        alpha.0.iter().zip(&beta.0).zip(&self.weights).fold(0u64, |acc, ((&a, &b), &w)| (acc + a * b % n * w) % n)
    }

    pub fn char_eval(&self, alpha: &Character, beta: &Codeword) -> Cyclotomic {
        self.cyclo.root_power(self.char_exponent(alpha, beta))
    }

    pub fn add(&self, u: &Codeword, v: &Codeword) -> Codeword {
        Codeword(u.0.iter().zip(&v.0).zip(&self.orders).map(|((a, b), m)| (a + b) % m).collect())
    }

    pub fn neg(&self, u: &Codeword) -> Codeword {
        Codeword(u.0.iter().zip(&self.orders).map(|(a, m)| (m - a) % m).collect())
    }

    /// `-u + v`, written `u^{-1} v` multiplicatively.
    pub fn difference(&self, u: &Codeword, v: &Codeword) -> Codeword {
        self.add(&self.neg(u), v)
    }

    /// A codeword supported exactly on `set` (residue 1 in the first nontrivial
    /// factor of each element), or `None` if some element has `h_i = 1`.
    pub fn word_with_support(&self, set: ElementSet) -> Option<Codeword> {
        let mut r = vec![0u64; self.orders.len()];
        for i in set.iter() {
            let f = (0..self.orders.len()).find(|&f| self.owner[f] == i && self.orders[f] > 1)?;
            r[f] = 1;
        }
        Some(Codeword(r))
    }

    /// Every subgroup, each as sorted codeword indices, sorted by (order, members).
    pub fn subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        let n = self.check_size(self.caps.subgroups)?;
        let words: Vec<Codeword> = (0..n).map(|i| self.codeword(i)).collect();
        let add = |i: usize, j: usize| self.index_of(&self.add(&words[i], &words[j]));
        let mut cyclics: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for g in 0..n {
            let mut members = vec![0usize];
            let mut cur = g;
            while cur != 0 {
                members.push(cur);
                cur = add(cur, g);
            }
            members.sort_unstable();
            if seen.insert(members.clone()) {
                cyclics.push(members);
            }
        }
        // Every subgroup is a join of cyclic ones.
        let mut frontier = cyclics.clone();
        let mut all = cyclics.clone();
        let mut mark = vec![false; n];
        while let Some(x) = frontier.pop() {
            for c in &cyclics {
                mark.iter_mut().for_each(|m| *m = false);
                for &a in &x {
                    for &b in c {
                        mark[add(a, b)] = true;
                    }
                }
                let joined: Vec<usize> = (0..n).filter(|&i| mark[i]).collect();
                if seen.insert(joined.clone()) {
                    frontier.push(joined.clone());
                    all.push(joined);
                }
            }
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(all.into_iter().map(|members| Subgroup { members }).collect())
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[Codeword]) -> Result<Subgroup, GroupError> {
        let n = self.check_size(self.caps.subgroups)?;
        for g in gens {
            self.validate(g)?;
        }
        let mut mark = vec![false; n];
        mark[0] = true;
        let mut stack = vec![self.identity()];
        while let Some(w) = stack.pop() {
            for g in gens {
                let s = self.add(&w, g);
                let k = self.index_of(&s);
                if !mark[k] {
                    mark[k] = true;
                    stack.push(s);
                }
            }
        }
        Ok(Subgroup { members: (0..n).filter(|&i| mark[i]).collect() })
    }

    /// Checks that `members` (codeword indices) form a subgroup.
    pub fn subgroup_from_indices(&self, mut members: Vec<usize>) -> Result<Subgroup, GroupError> {
        let n = self.check_size(self.caps.subgroups)?;
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        if members.iter().any(|&i| i >= n) {
            return Err(GroupError::NotASubgroup("index out of range".into()));
        }
        let set: HashSet<usize> = members.iter().copied().collect();
        for &a in &members {
            for &b in &members {
                let s = self.index_of(&self.add(&self.codeword(a), &self.codeword(b)));
                if !set.contains(&s) {
                    return Err(GroupError::NotASubgroup(format!("not closed: {a} + {b}")));
                }
            }
        }
        Ok(Subgroup { members })
    }

    /// `⊥D`: characters trivial on every element of `d`.
    pub fn dual_code(&self, d: &Subgroup) -> Result<Subgroup, GroupError> {
        let n = self.check_size(self.caps.enumerate)?;
        if d.members.first() != Some(&0) || d.members.iter().any(|&i| i >= n) {
            return Err(GroupError::NotASubgroup("identity missing or index out of range".into()));
        }
        let words: Vec<Codeword> = d.members.iter().map(|&i| self.codeword(i)).collect();
        let members = (0..n)
            .filter(|&a| {
                let alpha = self.codeword(a);
                words.iter().all(|w| self.char_exponent(&alpha, w) == 0)
            })
            .collect();
        Ok(Subgroup { members })
    }
}

/// A subgroup as sorted indices into [`AmbientSpace::enumerate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }
}
