//! The character weight enumerator `F(α) = Σ_β α(β) x^{wt(β)}`, computed both
//! by brute force over `H` and by a closed sum over ideals, and the
//! classification results built on it.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{AmbientSpace, Character, GroupError};
use crate::partition::{self, Carrier, Partition, PartitionError};
use crate::poset::{ElementSet, PosetError};
use crate::ring::{Integers, Poly};

pub type IntPoly = Poly<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("coefficient of x^{0} is not a rational integer")]
    NonIntegerCoefficient(usize),
    #[error("set is not an ideal of the poset")]
    NotAnIdeal,
    #[error("set is not an up-set of the poset")]
    NotADualIdeal,
    #[error("some coordinate group has order 1")]
    SizeOnePresent,
    #[error("poset is not hierarchical")]
    NotHierarchical,
    #[error("coordinate groups must all have the same order, at least 3")]
    SizesNotUniformOrTooSmall,
}

fn product<I: IntoIterator<Item = u64>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

fn signed(negative: bool, v: BigInt) -> BigInt {
    if negative {
        -v
    } else {
        v
    }
}

fn require_sizes_at_least_two(space: &AmbientSpace) -> Result<(), WeightError> {
    if space.all_at_least_two() {
        Ok(())
    } else {
        Err(WeightError::SizeOnePresent)
    }
}

/// `F(α)` by summing `α(β)` over every codeword, grouped by weight.
pub fn f_poly_bruteforce(space: &AmbientSpace, alpha: &Character) -> Result<IntPoly, WeightError> {
    space.validate(alpha)?;
    let words = space.enumerate()?;
    let n = space.poset().size();
    let order = space.exponent() as usize;
    let mut counts = vec![vec![0i64; order]; n + 1];
    for w in &words {
        counts[space.weight(w)][space.char_exponent(alpha, w) as usize] += 1;
    }
    let ring = space.cyclotomic_ring();
    let coeffs = counts
        .iter()
        .enumerate()
        .map(|(l, c)| ring.from_exponent_counts(c).as_integer().map(BigInt::from).ok_or(WeightError::NonIntegerCoefficient(l)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::from_coeffs(&Integers, coeffs))
}

/// `F(α)` as a sum over the ideals inside `(Ω − D) ∪ min D`, with `D` the up-set generated by `supp α`.
pub fn f_poly_closed(space: &AmbientSpace, alpha: &Character) -> Result<IntPoly, WeightError> {
    space.validate(alpha)?;
    Ok(f_poly_for_up_set(space, space.dual_closure(alpha)))
}

/// `F` for any character whose support generates the up-set `d`.
pub fn f_poly_for_up_set(space: &AmbientSpace, d: ElementSet) -> IntPoly {
    let p = space.poset();
    let min_d = p.minimal(d);
    let x = (p.ground() - d) | min_d;
    let n = p.size();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for i in p.ideals(x).expect("ideal enumeration within the ground set") {
        let max_i = p.maximal(i);
        let term = product((i - max_i).iter().map(|k| space.h(k))) * product((max_i - min_d).iter().map(|k| space.h(k) - 1));
        coeffs[i.len()] += signed((i & d).len() % 2 == 1, term);
    }
    Poly::from_coeffs(&Integers, coeffs)
}

/// `Σ_{<supp β> = I} α(β)` in closed form.
pub fn block_sum(space: &AmbientSpace, alpha: &Character, ideal: ElementSet) -> Result<BigInt, WeightError> {
    space.validate(alpha)?;
    let p = space.poset();
    p.check_set(ideal)?;
    if !p.is_ideal(ideal) {
        return Err(WeightError::NotAnIdeal);
    }
    Ok(block_sum_for_up_set(space, space.dual_closure(alpha), ideal))
}

fn block_sum_for_up_set(space: &AmbientSpace, d: ElementSet, ideal: ElementSet) -> BigInt {
    let p = space.poset();
    let max_i = p.maximal(ideal);
    if !(ideal & d).is_subset(max_i) {
        return BigInt::zero();
    }
    let term = product((ideal - max_i).iter().map(|k| space.h(k))) * product((max_i - d).iter().map(|k| space.h(k) - 1));
    signed((ideal & d).len() % 2 == 1, term)
}

/// Degree and leading coefficient of `F(α)` for `<supp α>` in the dual poset equal to `d`.
pub fn f_degree_leading(space: &AmbientSpace, d: ElementSet) -> Result<(usize, BigInt), WeightError> {
    require_sizes_at_least_two(space)?;
    let p = space.poset();
    p.check_set(d)?;
    if !p.is_up_set(d) {
        return Err(WeightError::NotADualIdeal);
    }
    let min_d = p.minimal(d);
    let x = (p.ground() - d) | min_d;
    let max_x = p.maximal(x);
    let lead = product((x - max_x).iter().map(|k| space.h(k))) * product((max_x - min_d).iter().map(|k| space.h(k) - 1));
    Ok((x.len(), signed(min_d.len() % 2 == 1, lead)))
}

/// `Λ` computed by grouping characters on equal `F(α)`.
pub fn lambda_via_f(space: &AmbientSpace) -> Result<Partition, WeightError> {
    let words = space.enumerate()?;
    let polys: Vec<IntPoly> = words.par_iter().map(|a| f_poly_for_up_set(space, space.dual_closure(a))).collect();
    Ok(Partition::from_keys(Carrier::Characters, polys))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCriterionReport {
    /// Characters of equal dual weight always have `F` of equal degree.
    pub degree_condition: bool,
    pub hierarchical: bool,
    /// A pair of character indices violating the degree condition.
    pub witness: Option<(usize, usize)>,
}

impl DegreeCriterionReport {
    pub fn agrees(&self) -> bool {
        self.degree_condition == self.hierarchical
    }
}

pub fn degree_criterion_check(space: &AmbientSpace) -> Result<DegreeCriterionReport, WeightError> {
    require_sizes_at_least_two(space)?;
    let words = space.enumerate()?;
    let n = space.poset().size();
    // First character seen at each dual weight, with its degree.
    let mut first: Vec<Option<(usize, Option<usize>)>> = vec![None; n + 1];
    let mut witness = None;
    for (k, a) in words.iter().enumerate() {
        let d = space.dual_closure(a);
        let deg = f_poly_for_up_set(space, d).degree();
        match first[d.len()] {
            None => first[d.len()] = Some((k, deg)),
            Some((j, other)) if other != deg => {
                witness = Some((j, k));
                break;
            }
            Some(_) => {}
        }
    }
    Ok(DegreeCriterionReport { degree_condition: witness.is_none(), hierarchical: space.poset().is_hierarchical(), witness })
}

/// On a hierarchical poset: the multisets of `h_i` over the two dual closures agree.
pub fn hierarchical_block_criterion(space: &AmbientSpace, alpha: &Character, gamma: &Character) -> Result<bool, WeightError> {
    space.validate(alpha)?;
    space.validate(gamma)?;
    if !space.poset().is_hierarchical() {
        return Err(WeightError::NotHierarchical);
    }
    let sizes = |c: &Character| {
        let mut v: Vec<u64> = space.dual_closure(c).iter().map(|i| space.h(i)).collect();
        v.sort_unstable();
        v
    };
    Ok(sizes(alpha) == sizes(gamma))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingMagnitudeReport {
    /// `|X| − |max X| = |V| − |max V|` and `|D| = |B|`.
    pub structural: bool,
    /// The leading coefficients of both `F` polynomials have equal absolute value.
    pub same_magnitude: bool,
}

impl LeadingMagnitudeReport {
    pub fn agrees(&self) -> bool {
        self.structural == self.same_magnitude
    }
}

pub fn leading_magnitude_check(space: &AmbientSpace, alpha: &Character, gamma: &Character) -> Result<LeadingMagnitudeReport, WeightError> {
    space.validate(alpha)?;
    space.validate(gamma)?;
    let sizes = space.sizes();
    if sizes.first().is_some_and(|&a| a < 3 || sizes.iter().any(|&h| h != a)) {
        return Err(WeightError::SizesNotUniformOrTooSmall);
    }
    let p = space.poset();
    let shape = |c: &Character| {
        let d = space.dual_closure(c);
        let x = (p.ground() - d) | p.minimal(d);
        (x.len() - p.maximal(x).len(), d.len())
    };
    let (_, la) = f_degree_leading(space, space.dual_closure(alpha))?;
    let (_, lg) = f_degree_leading(space, space.dual_closure(gamma))?;
    Ok(LeadingMagnitudeReport { structural: shape(alpha) == shape(gamma), same_magnitude: la.abs() == lg.abs() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflexivityClassification {
    /// `Q(H, P)` is Fourier-reflexive.
    pub reflexive: bool,
    /// `Λ = Q(Ĥ, P̄)`.
    pub dual_is_dual_weight: bool,
    /// `P` is hierarchical and `h_i` is constant on each level.
    pub hierarchical_uniform: bool,
}

impl ReflexivityClassification {
    pub fn agrees(&self) -> bool {
        self.reflexive == self.dual_is_dual_weight && self.reflexive == self.hierarchical_uniform
    }
}

/// `P` is hierarchical and `h` is constant on every level.
pub fn hierarchical_with_uniform_levels(space: &AmbientSpace) -> bool {
    let p = space.poset();
    p.is_hierarchical()
        && p.levels().1.iter().all(|w| {
            let mut hs = w.iter().map(|i| space.h(i));
            hs.next().is_none_or(|first| hs.all(|h| h == first))
        })
}

pub fn reflexivity_classification(space: &AmbientSpace) -> Result<ReflexivityClassification, WeightError> {
    require_sizes_at_least_two(space)?;
    let q = partition::weight_partition(space)?;
    let lambda = partition::dual_partition(space, &q)?;
    let bidual = partition::dual_partition(space, &lambda)?;
    let dual_weight = partition::dual_weight_partition(space)?;
    Ok(ReflexivityClassification {
        reflexive: bidual == q,
        dual_is_dual_weight: lambda == dual_weight,
        hierarchical_uniform: hierarchical_with_uniform_levels(space),
    })
}
