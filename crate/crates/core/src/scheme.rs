//! Association schemes on `H`: the axioms checked by brute force, the
//! translation scheme of a partition of `H`, the equivalent three conditions
//! on the partition itself, and an explicit certificate that the weight
//! partition of a non-hierarchical poset fails the convolution condition.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{AmbientSpace, Codeword, GroupError};
use crate::partition::{self, Partition, PartitionError};
use crate::poset::{ElementSet, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("poset is hierarchical, so no witness exists")]
    IsHierarchical,
    #[error("some coordinate group has order 1")]
    SizeOnePresent,
    #[error("relation classes do not match the carrier size")]
    ShapeMismatch,
}

/// A labelling of `H × H` by class ids, pair `(x, y)` at `x * size + y`.
/// Class ids are dense and numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationPartition {
    size: usize,
    class_of: Vec<usize>,
    classes: usize,
}

impl RelationPartition {
    pub fn from_labels(size: usize, labels: &[usize]) -> Result<Self, SchemeError> {
        if labels.len() != size * size {
            return Err(SchemeError::ShapeMismatch);
        }
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let class_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        Ok(RelationPartition { size, classes: remap.len(), class_of })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn class(&self, x: usize, y: usize) -> usize {
        self.class_of[x * self.size + y]
    }
}

/// `(x, y) ~ (u, v)` exactly when `x⁻¹y` and `u⁻¹v` share a block of `gamma`.
pub fn translation_scheme(space: &AmbientSpace, gamma: &Partition) -> Result<RelationPartition, SchemeError> {
    let n = space.check_size(space.caps().scheme)?;
    if gamma.carrier_len() != n {
        return Err(PartitionError::CarrierMismatch.into());
    }
    let words = space.enumerate()?;
    let labels: Vec<usize> = (0..n)
        .flat_map(|x| {
            let words = &words;
            (0..n).map(move |y| gamma.block_of(space.index_of(&space.difference(&words[x], &words[y]))))
        })
        .collect();
    RelationPartition::from_labels(n, &labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeAxioms {
    pub partition: bool,
    pub identity_class: bool,
    pub transpose_closed: bool,
    pub regular: bool,
    pub commutative: bool,
}

impl SchemeAxioms {
    pub fn all(&self) -> bool {
        self.partition && self.identity_class && self.transpose_closed && self.regular && self.commutative
    }
}

/// The five axioms of an association scheme, each evaluated independently.
pub fn is_association_scheme(theta: &RelationPartition) -> SchemeAxioms {
    let n = theta.size;
    let k = theta.classes;
    let mut class_sizes = vec![0usize; k];
    for &c in &theta.class_of {
        class_sizes[c] += 1;
    }
    let partition = theta.class_of.len() == n * n && class_sizes.iter().all(|&s| s > 0);

    let identity_class = n > 0 && {
        let c = theta.class(0, 0);
        (0..n).all(|x| theta.class(x, x) == c) && class_sizes[c] == n
    };

    // Map each class to its transpose; consistent exactly when transposes are classes.
    let mut transpose: Vec<Option<usize>> = vec![None; k];
    let mut transpose_closed = true;
    for x in 0..n {
        for y in 0..n {
            let (c, t) = (theta.class(x, y), theta.class(y, x));
            match transpose[c] {
                None => transpose[c] = Some(t),
                Some(prev) if prev != t => transpose_closed = false,
                Some(_) => {}
            }
        }
    }
    if transpose_closed {
        let mut hit = vec![false; k];
        for t in transpose.iter().flatten() {
            hit[*t] = true;
        }
        transpose_closed = hit.iter().all(|&h| h) && transpose.iter().enumerate().all(|(c, t)| t.is_some_and(|t| transpose[t] == Some(c)));
    }

    // Intersection counts c[R][S] = |{z : (u,z) ∈ R, (z,v) ∈ S}| for each pair (u, v).
    let counts = |u: usize, v: usize| {
        let mut c = vec![0u32; k * k];
        for z in 0..n {
            c[theta.class(u, z) * k + theta.class(z, v)] += 1;
        }
        c
    };
    let per_row: Vec<(bool, HashMap<usize, Vec<u32>>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut local: HashMap<usize, Vec<u32>> = HashMap::new();
            let mut commutative = true;
            let mut regular = true;
            for v in 0..n {
                let c = counts(u, v);
                commutative &= (0..k).all(|r| (0..k).all(|s| c[r * k + s] == c[s * k + r]));
                match local.get(&theta.class(u, v)) {
                    Some(prev) => regular &= *prev == c,
                    None => {
                        local.insert(theta.class(u, v), c);
                    }
                }
            }
            if !regular {
                local.clear();
                local.insert(usize::MAX, Vec::new());
            }
            (commutative, local)
        })
        .collect();
    let commutative = per_row.iter().all(|(c, _)| *c);
    let mut regular = true;
    let mut seen: HashMap<usize, &Vec<u32>> = HashMap::new();
    for (_, local) in &per_row {
        regular &= !local.contains_key(&usize::MAX);
        for (class, m) in local {
            match seen.get(class) {
                Some(prev) => regular &= *prev == m,
                None => {
                    seen.insert(*class, m);
                }
            }
        }
    }

    SchemeAxioms { partition, identity_class, transpose_closed, regular, commutative }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReflexivityConditions {
    /// `{1_H}` is a block.
    pub identity_block: bool,
    /// The inverse of every block is a block.
    pub inverse_closed: bool,
    /// `|{(u, v) ∈ U × V : uv = w}|` is constant for `w` in each block `W`.
    pub convolution_constant: bool,
}

impl ReflexivityConditions {
    pub fn all(&self) -> bool {
        self.identity_block && self.inverse_closed && self.convolution_constant
    }
}

/// The three conditions on `gamma` equivalent to Fourier-reflexivity.
pub fn reflexivity_conditions(space: &AmbientSpace, gamma: &Partition) -> Result<ReflexivityConditions, SchemeError> {
    let n = space.check_size(space.caps().enumerate)?;
    if gamma.carrier_len() != n {
        return Err(PartitionError::CarrierMismatch.into());
    }
    let words = space.enumerate()?;
    let identity_block = gamma.block(gamma.block_of(0)).len() == 1;
    let inverse_closed = gamma.blocks().iter().all(|block| {
        let target = gamma.block_of(space.index_of(&space.neg(&words[block[0]])));
        gamma.block(target).len() == block.len() && block.iter().all(|&b| gamma.block_of(space.index_of(&space.neg(&words[b]))) == target)
    });
    let k = gamma.len();
    let convolution = |w: usize| {
        let mut c = vec![0u32; k * k];
        for (u, word) in words.iter().enumerate() {
            let v = space.index_of(&space.difference(word, &words[w]));
            c[gamma.block_of(u) * k + gamma.block_of(v)] += 1;
        }
        c
    };
    let convolution_constant = gamma
        .blocks()
        .par_iter()
        .all(|block| {
            let first = convolution(block[0]);
            block[1..].iter().all(|&w| convolution(w) == first)
        });
    Ok(ReflexivityConditions { identity_block, inverse_closed, convolution_constant })
}

/// Certificate that the weight partition of a non-hierarchical poset violates
/// the convolution condition: `beta` and `theta` have equal weight, yet only
/// `theta` splits as a sum of words with the lower and upper weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonhierarchicalWitness {
    /// An up-set lying entirely above its complement whose minimal elements
    /// are not all below the rest of it.
    pub up_set: Vec<String>,
    pub u: String,
    pub v: String,
    pub beta: Codeword,
    pub theta: Codeword,
    pub weight_beta: usize,
    pub weight_theta: usize,
    pub lower_weight: usize,
    pub upper_weight: usize,
    pub count_beta: usize,
    pub count_theta: usize,
    #[serde(skip)]
    pub up_set_elements: ElementSet,
}

impl NonhierarchicalWitness {
    pub fn certifies(&self) -> bool {
        self.weight_beta == self.weight_theta && self.count_beta == 0 && self.count_theta >= 1
    }
}

pub fn nonhierarchical_witness(space: &AmbientSpace) -> Result<NonhierarchicalWitness, SchemeError> {
    let p = space.poset();
    if p.is_hierarchical() {
        return Err(SchemeError::IsHierarchical);
    }
    if !space.all_at_least_two() {
        return Err(SchemeError::SizeOnePresent);
    }
    let ground = p.ground();
    let up_sets = p.up_sets(ground)?;
    let found = up_sets.into_iter().find_map(|b| {
        let rest = ground - b;
        if !rest.iter().all(|a| b.iter().all(|x| p.leq(a, x))) {
            return None;
        }
        let min_b = p.minimal(b);
        let next = p.minimal(b - min_b);
        min_b.iter().find_map(|u| next.iter().find(|&v| !p.leq(u, v)).map(|v| (b, u, v)))
    });
    let (b, u, v) = found.expect("a non-hierarchical poset has an up-set violating the segment condition");
    let outside = (ground - b).len();
    let beta = space.word_with_support(ElementSet::singleton(v)).expect("sizes at least two");
    let weight_beta = space.weight(&beta);
    let k = weight_beta - outside;
    let min_b = p.minimal(b);
    let m: ElementSet = min_b.iter().take(k).collect();
    let theta = space.word_with_support(m).expect("sizes at least two");
    let weight_theta = space.weight(&theta);
    let lower_weight = outside + 1;
    let upper_weight = weight_beta - 1;
    let words = space.enumerate()?;
    let count = |target: &Codeword| {
        words
            .iter()
            .filter(|a| space.weight(a) == lower_weight && space.weight(&space.difference(a, target)) == upper_weight)
            .count()
    };
    Ok(NonhierarchicalWitness {
        up_set: p.set_names(b),
        u: p.name(u).to_owned(),
        v: p.name(v).to_owned(),
        count_beta: count(&beta),
        count_theta: count(&theta),
        beta,
        theta,
        weight_beta,
        weight_theta,
        lower_weight,
        upper_weight,
        up_set_elements: b,
    })
}

/// The scheme axioms, the three conditions and biduality all agree on `Q(H, P)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeAgreement {
    pub reflexive: bool,
    pub scheme: bool,
    pub conditions: bool,
}

impl SchemeAgreement {
    pub fn agrees(&self) -> bool {
        self.reflexive == self.scheme && self.scheme == self.conditions
    }
}

pub fn weight_scheme_agreement(space: &AmbientSpace) -> Result<SchemeAgreement, SchemeError> {
    let q = partition::weight_partition(space)?;
    let reflexive = partition::is_reflexive(space, &q)?.is_reflexive();
    let scheme = is_association_scheme(&translation_scheme(space, &q)?).all();
    let conditions = reflexivity_conditions(space, &q)?.all();
    Ok(SchemeAgreement { reflexive, scheme, conditions })
}
