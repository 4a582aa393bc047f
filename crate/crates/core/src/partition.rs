//! Partitions of `H` and of its character group, Fourier duality between them,
//! Krawtchouk coefficients and the MacWilliams identity.
//!
//! Codewords and characters share an index space (see [`crate::group`]), and
//! the pairing `(a, b) ↦ a(b)` is symmetric in that indexing. The dual of a
//! character partition therefore lands back on codewords, which is the
//! canonical identification used for biduals.

use std::collections::HashMap;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::Cyclotomic;
use crate::group::{AmbientSpace, Codeword, GroupError, Subgroup};
use crate::poset::Poset;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("partitions live on different carriers")]
    CarrierMismatch,
    #[error("block index out of range or block from the wrong partition")]
    BlockMismatch,
    #[error("Krawtchouk value differs across characters of dual block {0}")]
    NotWellDefined(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Carrier {
    Codewords,
    Characters,
}

impl Carrier {
    pub fn flip(self) -> Carrier {
        match self {
            Carrier::Codewords => Carrier::Characters,
            Carrier::Characters => Carrier::Codewords,
        }
    }
}

/// Blocks are nonempty, disjoint and cover `0..carrier_len`; they are ordered
/// by smallest member and each block is sorted. Equal partitions therefore
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    carrier: Carrier,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups indices by equal keys.
    pub fn from_keys<K: Hash + Eq, I: IntoIterator<Item = K>>(carrier: Carrier, keys: I) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let labels: Vec<usize> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Self::from_labels(carrier, &labels)
    }

    /// Indices with equal labels share a block; labels need not be dense.
    pub fn from_labels(carrier: Carrier, labels: &[usize]) -> Self {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let id = *remap.entry(*l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[id].push(i);
            block_of.push(id);
        }
        Partition { carrier, block_of, blocks }
    }

    pub fn singletons(carrier: Carrier, n: usize) -> Self {
        Self::from_labels(carrier, &(0..n).collect::<Vec<_>>())
    }

    pub fn whole(carrier: Carrier, n: usize) -> Self {
        Self::from_labels(carrier, &vec![0; n])
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn carrier_len(&self) -> usize {
        self.block_of.len()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &[usize] {
        &self.blocks[id]
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Re-labels the same blocks on the other carrier.
    pub fn reinterpret(&self, carrier: Carrier) -> Partition {
        Partition { carrier, ..self.clone() }
    }
}

/// Uniform block assignment over at most `max_blocks` labels.
pub fn random_partition(carrier: Carrier, n: usize, max_blocks: usize, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..max_blocks.max(1))).collect();
    Partition::from_labels(carrier, &labels)
}

fn check_carrier(space: &AmbientSpace, p: &Partition) -> Result<usize, PartitionError> {
    let n = space.check_size(space.caps().enumerate)?;
    if p.carrier_len() != n {
        return Err(PartitionError::CarrierMismatch);
    }
    Ok(n)
}

/// `Q(H, P)`: codewords by P-weight.
pub fn weight_partition(space: &AmbientSpace) -> Result<Partition, PartitionError> {
    let words = space.enumerate()?;
    Ok(Partition::from_keys(Carrier::Codewords, words.iter().map(|w| space.weight(w))))
}

/// `Q(Ĥ, P̄)`: characters by the weight of the dual poset.
pub fn dual_weight_partition(space: &AmbientSpace) -> Result<Partition, PartitionError> {
    weight_partition_in(space, &space.poset().dual(), Carrier::Characters)
}

pub fn weight_partition_in(space: &AmbientSpace, poset: &Poset, carrier: Carrier) -> Result<Partition, PartitionError> {
    let words = space.enumerate()?;
    Ok(Partition::from_keys(carrier, words.iter().map(|w| space.pweight(poset, w))))
}

/// Block sums `Σ_{b∈B} x(b)` for every block, as exponent histograms reduced in `Z[ζ_N]`.
fn block_sums(space: &AmbientSpace, words: &[Codeword], p: &Partition, x: &Codeword) -> Vec<Cyclotomic> {
    let n = space.exponent() as usize;
    let ring = space.cyclotomic_ring();
    p.blocks()
        .iter()
        .map(|block| {
            let mut counts = vec![0i64; n];
            for &b in block {
                counts[space.char_exponent(x, &words[b]) as usize] += 1;
            }
            ring.from_exponent_counts(&counts)
        })
        .collect()
}

/// The Fourier dual of `p`, on the opposite carrier.
pub fn dual_partition(space: &AmbientSpace, p: &Partition) -> Result<Partition, PartitionError> {
    check_carrier(space, p)?;
    let words = space.enumerate()?;
    let keys = words.iter().map(|x| block_sums(space, &words, p, x));
    Ok(Partition::from_keys(p.carrier().flip(), keys))
}

pub fn bidual_partition(space: &AmbientSpace, p: &Partition) -> Result<Partition, PartitionError> {
    dual_partition(space, &dual_partition(space, p)?)
}

/// Every block of `a` lies inside a block of `b`.
pub fn is_finer(a: &Partition, b: &Partition) -> Result<bool, PartitionError> {
    if a.carrier() != b.carrier() || a.carrier_len() != b.carrier_len() {
        return Err(PartitionError::CarrierMismatch);
    }
    Ok(a.blocks().iter().all(|block| block.iter().all(|&i| b.block_of(i) == b.block_of(block[0]))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflexivityReport {
    pub card: usize,
    pub card_dual: usize,
    pub equal_counts: bool,
    pub bidual_equals: bool,
    pub card_at_most_dual: bool,
    pub bidual_finer: bool,
}

impl ReflexivityReport {
    pub fn is_reflexive(&self) -> bool {
        self.bidual_equals
    }

    /// The counting test and the direct bidual comparison agree.
    pub fn consistent(&self) -> bool {
        self.equal_counts == self.bidual_equals && self.card_at_most_dual && self.bidual_finer
    }
}

pub fn is_reflexive(space: &AmbientSpace, p: &Partition) -> Result<ReflexivityReport, PartitionError> {
    let dual = dual_partition(space, p)?;
    let bidual = dual_partition(space, &dual)?;
    Ok(ReflexivityReport {
        card: p.len(),
        card_dual: dual.len(),
        equal_counts: p.len() == dual.len(),
        bidual_equals: &bidual == p,
        card_at_most_dual: p.len() <= dual.len(),
        bidual_finer: is_finer(&bidual, p)?,
    })
}

/// `K(A, B)` for a dual block `A` of `Γ̂` and a block `B` of `Γ`, evaluated at
/// the lowest-index character of `A`. With `verify`, every character of `A`
/// is evaluated and must agree.
pub fn krawtchouk(
    space: &AmbientSpace,
    gamma: &Partition,
    dual: &Partition,
    a: usize,
    b: usize,
    verify: bool,
) -> Result<Cyclotomic, PartitionError> {
    let n = check_carrier(space, gamma)?;
    if dual.carrier_len() != n || dual.carrier() == gamma.carrier() || a >= dual.len() || b >= gamma.len() {
        return Err(PartitionError::BlockMismatch);
    }
    let ring = space.cyclotomic_ring();
    let eval = |chi: usize| {
        let chi = space.codeword(chi);
        let vals: Vec<Cyclotomic> = gamma.block(b).iter().map(|&w| space.char_eval(&chi, &space.codeword(w))).collect();
        ring.sum(vals.iter())
    };
    let value = eval(dual.block(a)[0]);
    if verify && dual.block(a)[1..].iter().any(|&chi| eval(chi) != value) {
        return Err(PartitionError::NotWellDefined(a));
    }
    Ok(value)
}

/// All Krawtchouk coefficients of `Γ` against its dual, each verified well defined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KrawtchoukMatrix {
    /// `entries[a][b] = K(A_a, B_b)`, as reduced cyclotomic coefficient vectors.
    pub entries: Vec<Vec<Vec<i64>>>,
    /// The same matrix when every entry is a rational integer.
    pub integral: Option<Vec<Vec<i64>>>,
    #[serde(skip)]
    values: Vec<Vec<Cyclotomic>>,
}

impl KrawtchoukMatrix {
    pub fn value(&self, a: usize, b: usize) -> &Cyclotomic {
        &self.values[a][b]
    }
}

pub fn krawtchouk_matrix(space: &AmbientSpace, gamma: &Partition, dual: &Partition) -> Result<KrawtchoukMatrix, PartitionError> {
    check_carrier(space, gamma)?;
    if dual.carrier_len() != gamma.carrier_len() || dual.carrier() == gamma.carrier() {
        return Err(PartitionError::BlockMismatch);
    }
    let words = space.enumerate()?;
    let mut values = Vec::with_capacity(dual.len());
    for (a, block) in dual.blocks().iter().enumerate() {
        let row = block_sums(space, &words, gamma, &words[block[0]]);
        if block[1..].iter().any(|&chi| block_sums(space, &words, gamma, &words[chi]) != row) {
            return Err(PartitionError::NotWellDefined(a));
        }
        values.push(row);
    }
    let integral = values.iter().map(|row| row.iter().map(Cyclotomic::as_integer).collect::<Option<Vec<_>>>()).collect();
    let entries = values.iter().map(|row| row.iter().map(|c| c.coeffs().to_vec()).collect()).collect();
    Ok(KrawtchoukMatrix { entries, integral, values })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MacWilliamsRow {
    pub block: usize,
    /// `|⊥D| · |D ∩ B|`.
    pub lhs: i64,
    /// `Σ_A |⊥D ∩ A| K(A, B)`, as cyclotomic coefficients.
    pub rhs: Vec<i64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MacWilliamsReport {
    pub subgroup_order: usize,
    pub dual_order: usize,
    pub rows: Vec<MacWilliamsRow>,
    pub holds: bool,
}

pub fn macwilliams_check(space: &AmbientSpace, gamma: &Partition, d: &Subgroup) -> Result<MacWilliamsReport, PartitionError> {
    let dual = dual_partition(space, gamma)?;
    let k = krawtchouk_matrix(space, gamma, &dual)?;
    macwilliams_check_with(space, gamma, &dual, &k, d)
}

/// As [`macwilliams_check`] with the dual partition and its matrix precomputed.
pub fn macwilliams_check_with(
    space: &AmbientSpace,
    gamma: &Partition,
    dual: &Partition,
    k: &KrawtchoukMatrix,
    d: &Subgroup,
) -> Result<MacWilliamsReport, PartitionError> {
    let perp = space.dual_code(d)?;
    let ring = space.cyclotomic_ring();
    let mut perp_in = vec![0i64; dual.len()];
    for &chi in perp.members() {
        perp_in[dual.block_of(chi)] += 1;
    }
    let mut d_in = vec![0i64; gamma.len()];
    for &w in d.members() {
        d_in[gamma.block_of(w)] += 1;
    }
    let rows: Vec<MacWilliamsRow> = (0..gamma.len())
        .map(|b| {
            let lhs = perp.order() as i64 * d_in[b];
            let terms: Vec<Cyclotomic> = (0..dual.len()).map(|a| ring.mul(&ring.from_int(perp_in[a]), k.value(a, b))).collect();
            let rhs = ring.sum(terms.iter());
            MacWilliamsRow { block: b, lhs, holds: rhs == ring.from_int(lhs), rhs: rhs.coeffs().to_vec() }
        })
        .collect();
    Ok(MacWilliamsReport { subgroup_order: d.order(), dual_order: perp.order(), holds: rows.iter().all(|r| r.holds), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::default_names;
    use proptest::prelude::*;

    fn c2() -> AmbientSpace {
        AmbientSpace::cyclic(Poset::new(&["a", "b"], &[("a", "b")]).unwrap(), &[2, 2]).unwrap()
    }

    fn a2() -> AmbientSpace {
        AmbientSpace::cyclic(Poset::antichain(&default_names(2)).unwrap(), &[2, 2]).unwrap()
    }

    fn c3(h: &[u64]) -> AmbientSpace {
        AmbientSpace::cyclic(Poset::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap(), h).unwrap()
    }

    fn poset_l3() -> Poset {
        Poset::new(&["a", "b", "c"], &[("a", "c")]).unwrap()
    }

    fn sorted_blocks(p: &Partition) -> Vec<Vec<usize>> {
        let mut b = p.blocks().to_vec();
        b.sort();
        b
    }

    #[test]
    fn weight_partition_examples() {
        // Codeword indices for Z2²: 00, 01, 10, 11 (first coordinate is `a`).
        let q = weight_partition(&c2()).unwrap();
        assert_eq!(q.blocks(), &[vec![0], vec![1, 3], vec![2]]);
        assert_eq!(weight_partition(&a2()).unwrap().block_sizes(), vec![1, 2, 1]);
        let sparse = AmbientSpace::cyclic(poset_l3(), &[1, 2, 2]).unwrap();
        // Attained weights 0, 1 (b), 2 (c), 3 (b, c).
        assert_eq!(weight_partition(&sparse).unwrap().len(), 4);
        assert_eq!(weight_partition(&c3(&[2, 3, 2])).unwrap().len(), 4);
    }

    #[test]
    fn from_labels_is_canonical() {
        let p = Partition::from_labels(Carrier::Codewords, &[7, 3, 7, 1]);
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p, Partition::from_labels(Carrier::Codewords, &[0, 1, 0, 2]));
    }

    #[test]
    fn dual_partition_examples() {
        let h = c2();
        let dual = dual_partition(&h, &weight_partition(&h).unwrap()).unwrap();
        // Characters 00 | 01 | 10, 11.
        assert_eq!(sorted_blocks(&dual), vec![vec![0], vec![1], vec![2, 3]]);
        assert_eq!(dual.carrier(), Carrier::Characters);
        let whole = dual_partition(&h, &Partition::whole(Carrier::Codewords, 4)).unwrap();
        assert_eq!(sorted_blocks(&whole), vec![vec![0], vec![1, 2, 3]]);
        let fine = dual_partition(&a2(), &Partition::singletons(Carrier::Codewords, 4)).unwrap();
        assert_eq!(fine.len(), 4);
    }

    #[test]
    fn bidual_examples() {
        let h = c2();
        let q = weight_partition(&h).unwrap();
        assert_eq!(bidual_partition(&h, &q).unwrap(), q);
        let s = Partition::singletons(Carrier::Codewords, 4);
        assert_eq!(bidual_partition(&a2(), &s).unwrap(), s);
        let l = AmbientSpace::cyclic(poset_l3(), &[2, 2, 2]).unwrap();
        let ql = weight_partition(&l).unwrap();
        let bl = bidual_partition(&l, &ql).unwrap();
        assert!(is_finer(&bl, &ql).unwrap());
        assert_ne!(bl, ql);
    }

    #[test]
    fn is_finer_examples() {
        let h = c2();
        let s = Partition::singletons(Carrier::Codewords, 4);
        let w = Partition::whole(Carrier::Codewords, 4);
        let q = weight_partition(&h).unwrap();
        assert!(is_finer(&s, &q).unwrap());
        assert!(!is_finer(&w, &s).unwrap());
        assert!(is_finer(&q, &w).unwrap());
        assert_eq!(is_finer(&s, &s.reinterpret(Carrier::Characters)), Err(PartitionError::CarrierMismatch));
    }

    #[test]
    fn reflexivity_examples() {
        let r = is_reflexive(&c2(), &weight_partition(&c2()).unwrap()).unwrap();
        assert!(r.is_reflexive() && r.consistent());
        assert_eq!((r.card, r.card_dual), (3, 3));
        let l = AmbientSpace::cyclic(poset_l3(), &[2, 2, 2]).unwrap();
        let r = is_reflexive(&l, &weight_partition(&l).unwrap()).unwrap();
        assert!(!r.is_reflexive() && r.consistent());
        let v = AmbientSpace::cyclic(Poset::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap(), &[2, 2, 2]).unwrap();
        let r = is_reflexive(&v, &weight_partition(&v).unwrap()).unwrap();
        assert!(r.is_reflexive() && r.consistent());
    }

    #[test]
    fn krawtchouk_examples() {
        let h = a2();
        let q = weight_partition(&h).unwrap();
        let dual = dual_partition(&h, &q).unwrap();
        // Blocks of both: weight 0 = {0}, weight 1 = {1, 2}, weight 2 = {3}.
        let r = h.cyclotomic_ring();
        assert_eq!(krawtchouk(&h, &q, &dual, 1, 1, true).unwrap(), r.from_int(0));
        assert_eq!(krawtchouk(&h, &q, &dual, 1, 2, true).unwrap(), r.from_int(-1));
        for b in 0..q.len() {
            assert_eq!(krawtchouk(&h, &q, &dual, 0, b, true).unwrap(), r.from_int(q.block(b).len() as i64));
        }
        assert_eq!(krawtchouk(&h, &q, &dual, 9, 0, false), Err(PartitionError::BlockMismatch));
        assert_eq!(krawtchouk(&h, &q, &q, 0, 0, false), Err(PartitionError::BlockMismatch));
    }

    #[test]
    fn krawtchouk_not_well_defined_is_detected() {
        let h = a2();
        let q = weight_partition(&h).unwrap();
        let coarse = Partition::whole(Carrier::Characters, 4);
        assert_eq!(krawtchouk(&h, &q, &coarse, 0, 1, true), Err(PartitionError::NotWellDefined(0)));
    }

    #[test]
    fn macwilliams_examples() {
        let h = a2();
        let q = weight_partition(&h).unwrap();
        let d = h.subgroup_from_indices(vec![0, 3]).unwrap();
        let rep = macwilliams_check(&h, &q, &d).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rows[1].lhs, 0);
        let trivial = h.subgroup_from_indices(vec![0]).unwrap();
        assert!(macwilliams_check(&h, &q, &trivial).unwrap().holds);
        let whole = h.subgroup_from_indices(vec![0, 1, 2, 3]).unwrap();
        let rep = macwilliams_check(&h, &q, &whole).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rows[0].lhs, 1);
    }

    #[test]
    fn weight_partition_krawtchouk_is_integral() {
        for h in [c2(), c3(&[2, 3, 2]), AmbientSpace::new(poset_l3(), vec![vec![2, 2], vec![3], vec![4]]).unwrap()] {
            let q = weight_partition(&h).unwrap();
            let dual = dual_partition(&h, &q).unwrap();
            assert!(krawtchouk_matrix(&h, &q, &dual).unwrap().integral.is_some());
        }
    }

    #[test]
    fn dual_of_non_integral_partition() {
        let z3 = AmbientSpace::cyclic(Poset::antichain(&default_names(1)).unwrap(), &[3]).unwrap();
        let s = Partition::singletons(Carrier::Codewords, 3);
        let dual = dual_partition(&z3, &s).unwrap();
        assert_eq!(dual.len(), 3);
        assert!(krawtchouk_matrix(&z3, &s, &dual).unwrap().integral.is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_partitions_obey_duality(seed in any::<u64>(), max_blocks in 1usize..9, shape in 0usize..4) {
            let factors = match shape {
                0 => vec![vec![2], vec![2], vec![2]],
                1 => vec![vec![4], vec![2]],
                2 => vec![vec![2, 2], vec![3]],
                _ => vec![vec![5]],
            };
            let names = default_names(factors.len());
            let h = AmbientSpace::new(Poset::antichain(&names).unwrap(), factors).unwrap();
            let n = h.size() as usize;
            let g = random_partition(Carrier::Codewords, n, max_blocks, seed);
            let r = is_reflexive(&h, &g).unwrap();
            prop_assert!(r.consistent());
            for d in h.subgroups().unwrap() {
                prop_assert!(macwilliams_check(&h, &g, &d).unwrap().holds);
            }
        }
    }
}
