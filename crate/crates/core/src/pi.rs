//! The ideal-sum polynomial `π(Y, D) = Σ_{I ∈ I(Y)} φ(D, I) x^{|I|}` over a
//! commutative ring, with per-element parameters `τ` and `η`, together with
//! its recursions, inclusion-exclusion identities, hierarchical closed form,
//! and the order and classification results built on them.
//!
//! With integer coefficients, `τ_i = h_i` and `η_i = h_i − 1`, `π(Ω, D)` equals
//! the character weight enumerator of any character whose support generates `D`
//! in the dual poset.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::poset::{ElementSet, Poset, PosetError};
use crate::ring::{poly_order_cmp, Integers, OrderedRing, Poly, Ring, Symbolic};

pub type RingPoly<R> = Poly<<R as Ring>::El>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("expected {expected} parameter values, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("D is not a subset of Y")]
    NotSubset,
    #[error("D is not up-closed in X")]
    NotUpClosed,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("requires eta = tau - 1 at every element")]
    EtaNotTauMinusOne,
    #[error("requires tau > 0, eta > -1 and eta != 0 at every element")]
    PositivityViolated,
    #[error("A is not a proper subset of D")]
    NotProperSubset,
    #[error("the coefficient ring is not a field")]
    NotAField,
    #[error("a parameter that must be nonzero (or differ from -1) is not")]
    ZeroParameter,
    #[error("poset is not hierarchical")]
    NotHierarchical,
    #[error("D must be nonempty")]
    EmptyD,
}

/// Side conditions on the parameters, always recomputed from the values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamFlags {
    pub tau_nonzero: bool,
    pub eta_nonzero: bool,
    pub eta_not_minus_one: bool,
    pub eta_is_tau_minus_one: bool,
    /// `τ > 0`, `η > −1`, `η ≠ 0`; `None` when the ring has no order.
    pub positivity: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct PiParams<R: Ring> {
    ring: R,
    tau: Vec<R::El>,
    eta: Vec<R::El>,
    flags: ParamFlags,
}

impl<R: Ring> PiParams<R> {
    pub fn new(ring: R, tau: Vec<R::El>, eta: Vec<R::El>) -> Result<Self, PiError> {
        if tau.len() != eta.len() {
            return Err(PiError::ParameterCount { expected: tau.len(), got: eta.len() });
        }
        let one = ring.one();
        let minus_one = ring.neg(&one);
        let flags = ParamFlags {
            tau_nonzero: tau.iter().all(|t| !ring.is_zero(t)),
            eta_nonzero: eta.iter().all(|e| !ring.is_zero(e)),
            eta_not_minus_one: eta.iter().all(|e| *e != minus_one),
            eta_is_tau_minus_one: tau.iter().zip(&eta).all(|(t, e)| *e == ring.sub(t, &one)),
            positivity: tau
                .iter()
                .zip(&eta)
                .map(|(t, e)| {
                    let t_pos = ring.sign(t)? == Ordering::Greater;
                    let e_above = ring.sign(&ring.add(e, &one))? == Ordering::Greater;
                    let e_nonzero = ring.sign(e)? != Ordering::Equal;
                    Some(t_pos && e_above && e_nonzero)
                })
                .try_fold(true, |acc, v| v.map(|v| acc && v)),
        };
        Ok(PiParams { ring, tau, eta, flags })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn tau(&self) -> &[R::El] {
        &self.tau
    }

    pub fn eta(&self) -> &[R::El] {
        &self.eta
    }

    pub fn flags(&self) -> ParamFlags {
        self.flags
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }
}

impl PiParams<Integers> {
    /// `τ_i = h_i`, `η_i = h_i − 1`, the weight-enumerator instantiation.
    pub fn from_sizes(h: &[u64]) -> Self {
        let tau = h.iter().map(|&v| BigInt::from(v)).collect();
        let eta = h.iter().map(|&v| BigInt::from(v) - 1).collect();
        PiParams::new(Integers, tau, eta).expect("equal lengths")
    }
}

impl PiParams<Symbolic> {
    /// Independent indeterminates `τ_i = t_i`, `η_i = e_i`.
    pub fn generic(names: &[String]) -> Self {
        let ring = Symbolic::new(names);
        let tau = (0..names.len()).map(|i| ring.t(i)).collect();
        let eta = (0..names.len()).map(|i| ring.e(i)).collect();
        PiParams::new(ring, tau, eta).expect("equal lengths")
    }

    /// `τ_i = t_i`, `η_i = t_i − 1`.
    pub fn generic_tau_minus_one(names: &[String]) -> Self {
        let ring = Symbolic::new(names);
        let tau: Vec<_> = (0..names.len()).map(|i| ring.t(i)).collect();
        let eta = tau.iter().map(|t| ring.sub(t, &ring.one())).collect();
        PiParams::new(ring, tau, eta).expect("equal lengths")
    }
}

/// `π` bound to a poset and a parameter choice.
#[derive(Debug, Clone)]
pub struct Pi<R: Ring> {
    poset: Poset,
    params: PiParams<R>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeLeading<E> {
    pub degree: usize,
    pub leading: E,
    /// Both values agree with the directly computed polynomial.
    pub matches_direct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualSizeClassification {
    /// Up-sets of equal size have equal `π(Ω, ·)`.
    pub size_determines: bool,
    /// `π(Ω, C) = π(Ω, D)` exactly when `|C| = |D|`.
    pub size_characterizes: bool,
    /// Hierarchical, with `η` constant on every level.
    pub hierarchical_level_eta: bool,
    /// With `η` nonzero: hierarchical, and whether equal-size up-sets give equal degrees.
    pub degree_test: Option<(bool, bool)>,
    /// On a hierarchical poset: equal `π` exactly when the `η` multisets agree.
    pub multiset_test: Option<bool>,
}

impl EqualSizeClassification {
    pub fn agrees(&self) -> bool {
        self.size_determines == self.size_characterizes
            && self.size_determines == self.hierarchical_level_eta
            && self.degree_test.is_none_or(|(h, d)| h == d)
            && self.multiset_test.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    pub size: usize,
    pub n: usize,
    pub at_least_n_plus_one: bool,
    pub exactly_n_plus_one: bool,
    pub size_determines: bool,
    pub size_characterizes: bool,
    pub hierarchical_level_eta: bool,
}

impl ThetaReport {
    pub fn agrees(&self) -> bool {
        self.at_least_n_plus_one
            && self.exactly_n_plus_one == self.size_determines
            && self.size_determines == self.size_characterizes
            && self.size_characterizes == self.hierarchical_level_eta
    }
}

impl<R: Ring> Pi<R> {
    pub fn new(poset: Poset, params: PiParams<R>) -> Result<Self, PiError> {
        if params.len() != poset.size() {
            return Err(PiError::ParameterCount { expected: poset.size(), got: params.len() });
        }
        Ok(Pi { poset, params })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn params(&self) -> &PiParams<R> {
        &self.params
    }

    fn ring(&self) -> &R {
        &self.params.ring
    }

    fn tau_product(&self, set: ElementSet) -> R::El {
        let r = self.ring();
        set.iter().fold(r.one(), |acc, i| r.mul(&acc, &self.params.tau[i]))
    }

    fn eta_product(&self, set: ElementSet) -> R::El {
        let r = self.ring();
        set.iter().fold(r.one(), |acc, i| r.mul(&acc, &self.params.eta[i]))
    }

    /// `c · x^k` as a polynomial.
    fn term(&self, c: R::El, k: usize) -> RingPoly<R> {
        Poly::monomial(self.ring(), c, k)
    }

    fn one_poly(&self) -> RingPoly<R> {
        Poly::constant(self.ring(), self.ring().one())
    }

    /// `(Π_{i ∈ set} τ_i x)`.
    fn tau_x(&self, set: ElementSet) -> RingPoly<R> {
        self.term(self.tau_product(set), set.len())
    }

    /// `φ(D, I)`.
    pub fn phi(&self, d: ElementSet, i: ElementSet) -> R::El {
        let max_i = self.poset.maximal(i);
        if !(i & d).is_subset(max_i) {
            return self.ring().zero();
        }
        let r = self.ring();
        let v = r.mul(&self.tau_product(i - max_i), &self.eta_product(max_i - d));
        if (i & d).len() % 2 == 1 {
            r.neg(&v)
        } else {
            v
        }
    }

    fn sum_over_ideals(&self, y: ElementSet, d: ElementSet) -> RingPoly<R> {
        let r = self.ring();
        let ideals = self.poset.ideals(y).expect("subset of the ground set");
        let mut coeffs = vec![r.zero(); y.len() + 1];
        for i in ideals {
            coeffs[i.len()] = r.add(&coeffs[i.len()], &self.phi(d, i));
        }
        Poly::from_coeffs(r, coeffs)
    }

    /// The defining sum over ideals of the subposet on `Y`.
    pub fn pi_direct(&self, y: ElementSet, d: ElementSet) -> Result<RingPoly<R>, PiError> {
        self.poset.check_set(y)?;
        if !d.is_subset(y) {
            return Err(PiError::NotSubset);
        }
        Ok(self.sum_over_ideals(y, d))
    }

    fn require_up_closed(&self, d: ElementSet, x: ElementSet) -> Result<(), PiError> {
        self.poset.check_set(x)?;
        if self.poset.is_up_set_in(d, x) {
            Ok(())
        } else {
            Err(PiError::NotUpClosed)
        }
    }

    /// `π(X, D)` through `π(Y, min D)` with `Y = min D ∪ (X − D)`.
    pub fn pi_reduced(&self, x: ElementSet, d: ElementSet) -> Result<RingPoly<R>, PiError> {
        self.require_up_closed(d, x)?;
        let min_d = self.poset.minimal(d);
        let y = min_d | (x - d);
        assert!(min_d.is_subset(self.poset.maximal(y)), "minimal elements of D are maximal in the reduced set");
        Ok(self.sum_over_ideals(y, min_d))
    }

    /// Removing a maximal element `e` of `Y`: the three-case identity for
    /// `π(Y, D) − π(Y − {e}, D − {e})`.
    pub fn check_removal_identity(&self, y: ElementSet, d: ElementSet, e: usize) -> Result<bool, PiError> {
        self.require_up_closed(d, y)?;
        if !self.poset.maximal(y).contains(e) {
            return Err(PiError::PreconditionViolated("e must be maximal in Y"));
        }
        let r = self.ring();
        let lhs = self.sum_over_ideals(y, d).sub(&self.sum_over_ideals(y.without(e), d.without(e)), r);
        let u = self.poset.down_closure_in(ElementSet::singleton(e), y);
        let tau_u = self.tau_product(u.without(e));
        let rhs = if !d.contains(e) {
            self.term(r.mul(&self.params.eta[e], &tau_u), u.len()).mul(&self.sum_over_ideals(y - u, d), r)
        } else if !self.poset.minimal(d).contains(e) {
            Poly::zero()
        } else {
            self.term(r.neg(&tau_u), u.len()).mul(&self.sum_over_ideals(y - u, d.without(e)), r)
        };
        Ok(lhs == rhs)
    }

    /// Adding a maximal element `e ∉ L` of `Y` to `L`:
    /// `π(Y, L) − π(Y, L ∪ {e}) = (η_e + 1)(Π τ) x^k π(Y − <e>, L)`.
    pub fn check_addition_identity(&self, y: ElementSet, l: ElementSet, e: usize) -> Result<bool, PiError> {
        self.require_up_closed(l, y)?;
        if !(self.poset.maximal(y) - l).contains(e) {
            return Err(PiError::PreconditionViolated("e must be maximal in Y and outside L"));
        }
        let r = self.ring();
        let lhs = self.sum_over_ideals(y, l).sub(&self.sum_over_ideals(y, l.with(e)), r);
        let u = self.poset.down_closure_in(ElementSet::singleton(e), y);
        let c = r.mul(&r.add(&self.params.eta[e], &r.one()), &self.tau_product(u.without(e)));
        let rhs = self.term(c, u.len()).mul(&self.sum_over_ideals(y - u, l), r);
        Ok(lhs == rhs)
    }

    fn require_tau_minus_one(&self) -> Result<(), PiError> {
        if self.params.flags.eta_is_tau_minus_one {
            Ok(())
        } else {
            Err(PiError::EtaNotTauMinusOne)
        }
    }

    /// With `η = τ − 1` and `D ⊆ max(Y)`, both inclusion-exclusion forms:
    /// `π(Y, D) = Σ_{A ⊆ D} (−1)^{|A|} (Π_{<A>} τx) π(Y − <A>, ∅)` and
    /// `(Π_{<D>} τx) π(Y − <D>, ∅) = Σ_{A ⊆ D} (−1)^{|A|} π(Y, A)`.
    pub fn check_inclusion_exclusion(&self, y: ElementSet, d: ElementSet) -> Result<(bool, bool), PiError> {
        self.require_tau_minus_one()?;
        self.poset.check_set(y)?;
        if !d.is_subset(self.poset.maximal(y)) {
            return Err(PiError::PreconditionViolated("D must consist of maximal elements of Y"));
        }
        let r = self.ring();
        let mut expand = Poly::zero();
        let mut alternating = Poly::zero();
        for a in d.subsets() {
            let closure = self.poset.down_closure_in(a, y);
            let t = self.tau_x(closure).mul(&self.sum_over_ideals(y - closure, ElementSet::EMPTY), r);
            let p = self.sum_over_ideals(y, a);
            if a.len() % 2 == 1 {
                expand = expand.sub(&t, r);
                alternating = alternating.sub(&p, r);
            } else {
                expand = expand.add(&t, r);
                alternating = alternating.add(&p, r);
            }
        }
        let closure = self.poset.down_closure_in(d, y);
        let top = self.tau_x(closure).mul(&self.sum_over_ideals(y - closure, ElementSet::EMPTY), r);
        Ok((expand == self.sum_over_ideals(y, d), top == alternating))
    }

    /// With `η = τ − 1` and `D` up-closed in `X`:
    /// `π(X, D) = Σ_{A ⊆ min D} (−1)^{|A|} (Π_{<A>_X} τx) π((X − <A>_X) − (D − min D), ∅)`.
    pub fn check_reduced_inclusion_exclusion(&self, x: ElementSet, d: ElementSet) -> Result<bool, PiError> {
        self.require_tau_minus_one()?;
        self.require_up_closed(d, x)?;
        let r = self.ring();
        let min_d = self.poset.minimal(d);
        let mut total = Poly::zero();
        for a in min_d.subsets() {
            let closure = self.poset.down_closure_in(a, x);
            let t = self.tau_x(closure).mul(&self.sum_over_ideals((x - closure) - (d - min_d), ElementSet::EMPTY), r);
            total = if a.len() % 2 == 1 { total.sub(&t, r) } else { total.add(&t, r) };
        }
        Ok(total == self.sum_over_ideals(x, d))
    }

    /// Over a field with `τ, η` nonzero: degree `|X| − |D| + |min D|` and
    /// leading coefficient `φ(min D, (X − D) ∪ min D)`.
    pub fn degree_leading(&self, x: ElementSet, d: ElementSet) -> Result<DegreeLeading<R::El>, PiError> {
        if !self.ring().is_field() {
            return Err(PiError::NotAField);
        }
        if !(self.params.flags.tau_nonzero && self.params.flags.eta_nonzero) {
            return Err(PiError::ZeroParameter);
        }
        self.require_up_closed(d, x)?;
        let min_d = self.poset.minimal(d);
        let degree = x.len() - d.len() + min_d.len();
        let leading = self.phi(min_d, (x - d) | min_d);
        let direct = self.sum_over_ideals(x, d);
        let matches_direct = direct.degree() == Some(degree) && direct.leading() == Some(&leading);
        Ok(DegreeLeading { degree, leading, matches_direct })
    }

    /// On a hierarchical poset, `π(Ω, D)` for a nonempty up-set `D` from the
    /// level decomposition, with `r` the lowest level met by `D`.
    pub fn hierarchical_closed_form(&self, d: ElementSet) -> Result<RingPoly<R>, PiError> {
        if !self.poset.is_hierarchical() {
            return Err(PiError::NotHierarchical);
        }
        if d.is_empty() {
            return Err(PiError::EmptyD);
        }
        self.require_up_closed(d, self.poset.ground())?;
        let r = self.ring();
        let sigma = self.poset.sigma(d)?;
        let (_, w) = self.poset.levels();
        let below = |t: usize| w[..t - 1].iter().fold(ElementSet::EMPTY, |acc, &s| acc | s);
        let one_plus_eta_x = |set: ElementSet| {
            set.iter().fold(self.one_poly(), |acc, i| {
                acc.mul(&Poly::from_coeffs(r, vec![r.one(), self.params.eta[i].clone()]), r)
            })
        };
        let one_minus_x = Poly::from_coeffs(r, vec![r.one(), r.neg(&r.one())]);
        let wr = w[sigma - 1];
        let head = one_minus_x.pow((wr & d).len(), r).mul(&one_plus_eta_x(wr - d), r).sub(&self.one_poly(), r);
        let mut total = self.tau_x(below(sigma)).mul(&head, r).add(&self.one_poly(), r);
        for t in 1..sigma {
            let level = one_plus_eta_x(w[t - 1]).sub(&self.one_poly(), r);
            total = total.add(&self.tau_x(below(t)).mul(&level, r), r);
        }
        Ok(total)
    }

    /// `π(Ω, M)` for every up-set `M`, in up-set order.
    pub fn up_set_polys(&self) -> Vec<(ElementSet, RingPoly<R>)> {
        let ground = self.poset.ground();
        self.poset
            .up_sets(ground)
            .expect("ground set")
            .into_iter()
            .map(|m| (m, self.sum_over_ideals(ground, m)))
            .collect()
    }

    /// `η` is constant on every level of a hierarchical poset.
    pub fn hierarchical_level_eta(&self) -> bool {
        let (_, w) = self.poset.levels();
        self.poset.is_hierarchical()
            && w.iter().all(|level| {
                let first = level.first().map(|i| &self.params.eta[i]);
                level.iter().all(|i| Some(&self.params.eta[i]) == first)
            })
    }

    fn size_tests(polys: &[(ElementSet, RingPoly<R>)]) -> (bool, bool) {
        let mut determines = true;
        let mut characterizes = true;
        for (c, pc) in polys {
            for (d, pd) in polys {
                let same_size = c.len() == d.len();
                let same_poly = pc == pd;
                determines &= !same_size || same_poly;
                characterizes &= same_size == same_poly;
            }
        }
        (determines, characterizes)
    }

    /// Over a field with `τ ≠ 0` and `η ≠ −1`, the three equivalent conditions
    /// for equal-size up-sets to give equal `π(Ω, ·)`, each evaluated directly,
    /// plus the degree and `η`-multiset refinements where their hypotheses hold.
    pub fn classify_equal_size(&self) -> Result<EqualSizeClassification, PiError> {
        if !self.ring().is_field() {
            return Err(PiError::NotAField);
        }
        let flags = self.params.flags;
        if !(flags.tau_nonzero && flags.eta_not_minus_one) {
            return Err(PiError::ZeroParameter);
        }
        let polys = self.up_set_polys();
        let (size_determines, size_characterizes) = Self::size_tests(&polys);
        let hierarchical = self.poset.is_hierarchical();
        let degree_test = flags.eta_nonzero.then(|| {
            let degrees_agree = polys
                .iter()
                .all(|(c, pc)| polys.iter().all(|(d, pd)| c.len() != d.len() || pc.degree() == pd.degree()));
            (hierarchical, degrees_agree)
        });
        let multiset_test = hierarchical.then(|| {
            let multiset = |set: ElementSet| {
                let mut v: Vec<&R::El> = set.iter().map(|i| &self.params.eta[i]).collect();
                v.sort();
                v
            };
            polys.iter().all(|(c, pc)| polys.iter().all(|(d, pd)| (pc == pd) == (multiset(*c) == multiset(*d))))
        });
        Ok(EqualSizeClassification {
            size_determines,
            size_characterizes,
            hierarchical_level_eta: self.hierarchical_level_eta(),
            degree_test,
            multiset_test,
        })
    }

    fn require_positivity(&self) -> Result<(), PiError> {
        if self.params.flags.positivity == Some(true) {
            Ok(())
        } else {
            Err(PiError::PositivityViolated)
        }
    }

    /// `Θ = {π(Ω, M) : M an up-set}`, deduplicated and sorted.
    pub fn theta_set(&self) -> Result<Vec<RingPoly<R>>, PiError> {
        self.require_positivity()?;
        let set: BTreeSet<RingPoly<R>> = self.up_set_polys().into_iter().map(|(_, p)| p).collect();
        Ok(set.into_iter().collect())
    }

    pub fn theta_report(&self) -> Result<ThetaReport, PiError> {
        self.require_positivity()?;
        let polys = self.up_set_polys();
        let size = polys.iter().map(|(_, p)| p).collect::<BTreeSet<_>>().len();
        let n = self.poset.size();
        let (size_determines, size_characterizes) = Self::size_tests(&polys);
        Ok(ThetaReport {
            size,
            n,
            at_least_n_plus_one: size > n,
            exactly_n_plus_one: size == n + 1,
            size_determines,
            size_characterizes,
            hierarchical_level_eta: self.hierarchical_level_eta(),
        })
    }
}

impl<R: OrderedRing> Pi<R> {
    /// For up-closed `A ⊊ D` in `X` under positivity:
    /// `π(X, D) ≠ π(X, A)` and `π(X, D) ⋞ π(X, A)`.
    pub fn check_strict_descent(&self, x: ElementSet, a: ElementSet, d: ElementSet) -> Result<bool, PiError> {
        self.require_positivity()?;
        self.require_up_closed(a, x)?;
        self.require_up_closed(d, x)?;
        if !a.is_proper_subset(d) {
            return Err(PiError::NotProperSubset);
        }
        let pd = self.sum_over_ideals(x, d);
        let pa = self.sum_over_ideals(x, a);
        Ok(poly_order_cmp(self.ring(), &pd, &pa) == Ordering::Less)
    }

    /// For `A ⊊ max(Y)` and `e ∈ max(Y) − A` under positivity:
    /// `π(Y, A ∪ {e}) ≠ π(Y, A)` and `π(Y, A ∪ {e}) ⋞ π(Y, A)`.
    pub fn check_maximal_step_descent(&self, y: ElementSet, a: ElementSet, e: usize) -> Result<bool, PiError> {
        self.require_positivity()?;
        self.poset.check_set(y)?;
        let max_y = self.poset.maximal(y);
        if !a.is_proper_subset(max_y) || !(max_y - a).contains(e) {
            return Err(PiError::PreconditionViolated("A must be a proper subset of max(Y) and e in max(Y) - A"));
        }
        let next = self.sum_over_ideals(y, a.with(e));
        let cur = self.sum_over_ideals(y, a);
        Ok(poly_order_cmp(self.ring(), &next, &cur) == Ordering::Less)
    }
}
