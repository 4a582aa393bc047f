//! Commutative rings used as coefficient domains, and dense univariate
//! polynomials over them.
//!
//! A ring is a value (it may carry a modulus or a variable count) and elements
//! are plain data manipulated through it.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("cannot parse `{0}` as a ring element")]
    Parse(String),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
}

pub trait Ring: Clone + Debug + Send + Sync {
    type El: Clone + Debug + PartialEq + Eq + Ord + Hash + Send + Sync;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::El;

    /// Whether every nonzero element is invertible.
    fn is_field(&self) -> bool;

    /// Sign of `a` when the ring is ordered; `None` otherwise.
    fn sign(&self, _a: &Self::El) -> Option<Ordering> {
        None
    }

    fn parse(&self, s: &str) -> Result<Self::El, RingError>;
    fn format(&self, a: &Self::El) -> String;

    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::El) -> bool {
        *a == self.zero()
    }

    fn product<'a, I: IntoIterator<Item = &'a Self::El>>(&self, it: I) -> Self::El
    where
        Self::El: 'a,
    {
        it.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self::El>>(&self, it: I) -> Self::El
    where
        Self::El: 'a,
    {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// Rings with a total order compatible with addition and multiplication by positives.
pub trait OrderedRing: Ring {
    fn compare(&self, a: &Self::El, b: &Self::El) -> Ordering;
}

/// The integers, with arbitrary precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type El = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn is_field(&self) -> bool {
        false
    }
    fn sign(&self, a: &BigInt) -> Option<Ordering> {
        Some(a.cmp(&BigInt::zero()))
    }
    fn parse(&self, s: &str) -> Result<BigInt, RingError> {
        s.trim().parse().map_err(|_| RingError::Parse(s.to_owned()))
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

impl OrderedRing for Integers {
    fn compare(&self, a: &BigInt, b: &BigInt) -> Ordering {
        a.cmp(b)
    }
}

/// The rational numbers, exact.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type El = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_field(&self) -> bool {
        true
    }
    fn sign(&self, a: &BigRational) -> Option<Ordering> {
        Some(a.cmp(&BigRational::zero()))
    }
    fn parse(&self, s: &str) -> Result<BigRational, RingError> {
        let err = || RingError::Parse(s.to_owned());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(BigRational::new(n, d))
            }
            None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| err()),
        }
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

impl OrderedRing for Rationals {
    fn compare(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }
}

/// Integers modulo a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModP {
    p: u64,
}

pub const DEFAULT_PRIME: u64 = 10007;

impl ModP {
    pub fn new(p: u64) -> Result<Self, RingError> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !prime || p > u32::MAX as u64 {
            return Err(RingError::NotPrime(p));
        }
        Ok(ModP { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Default for ModP {
    fn default() -> Self {
        ModP { p: DEFAULT_PRIME }
    }
}

impl Ring for ModP {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_field(&self) -> bool {
        true
    }
    fn parse(&self, s: &str) -> Result<u64, RingError> {
        let v: BigInt = s.trim().parse().map_err(|_| RingError::Parse(s.to_owned()))?;
        Ok(v.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced below p"))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Exponent vector of a monomial in the symbolic ring.
pub type Monomial = Vec<u16>;

/// Multivariate polynomials with integer coefficients.
///
/// Invariant: no zero coefficients are stored, and every exponent vector has
/// exactly `nvars` entries.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MPoly {
    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    fn insert(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }
}

/// Polynomial ring `Z[t_1..t_n, e_1..e_n]` with one `(t, e)` pair per poset
/// element, named after the element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbolic {
    names: Vec<String>,
}

impl Symbolic {
    pub fn new(element_names: &[String]) -> Self {
        Symbolic { names: element_names.to_vec() }
    }

    fn nvars(&self) -> usize {
        2 * self.names.len()
    }

    fn var(&self, index: usize) -> MPoly {
        let mut m = vec![0u16; self.nvars()];
        m[index] = 1;
        let mut p = MPoly::default();
        p.insert(m, BigInt::one());
        p
    }

    /// `t_i`, the generic value of `tau` at element `i`.
    pub fn t(&self, i: usize) -> MPoly {
        self.var(i)
    }

    /// `e_i`, the generic value of `eta` at element `i`.
    pub fn e(&self, i: usize) -> MPoly {
        self.var(self.names.len() + i)
    }

    fn var_name(&self, index: usize) -> String {
        let n = self.names.len();
        if index < n {
            format!("t_{}", self.names[index])
        } else {
            format!("e_{}", self.names[index - n])
        }
    }

    fn constant(&self, c: BigInt) -> MPoly {
        let mut p = MPoly::default();
        p.insert(vec![0u16; self.nvars()], c);
        p
    }
}

impl Ring for Symbolic {
    type El = MPoly;
    fn zero(&self) -> MPoly {
        MPoly::default()
    }
    fn one(&self) -> MPoly {
        self.constant(BigInt::one())
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        MPoly { terms: a.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = MPoly::default();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.insert(m, ca * cb);
            }
        }
        out
    }
    fn from_i64(&self, v: i64) -> MPoly {
        self.constant(BigInt::from(v))
    }
    fn is_field(&self) -> bool {
        false
    }
    /// Accepts integer constants and single variables such as `t_a` or `-e_b`.
    fn parse(&self, s: &str) -> Result<MPoly, RingError> {
        let s = s.trim();
        if let Ok(v) = s.parse::<BigInt>() {
            return Ok(self.constant(v));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, s),
        };
        let found = (0..self.nvars()).find(|&i| self.var_name(i) == body).ok_or_else(|| RingError::Parse(s.to_owned()))?;
        let v = self.var(found);
        Ok(if neg { self.neg(&v) } else { v })
    }
    fn format(&self, a: &MPoly) -> String {
        if a.terms.is_empty() {
            return "0".to_owned();
        }
        let mut out = String::new();
        // Constant term first, then by increasing total degree.
        let mut terms: Vec<(&Monomial, &BigInt)> = a.terms.iter().collect();
        terms.sort_by(|x, y| {
            let dx: u32 = x.0.iter().map(|&e| e as u32).sum();
            let dy: u32 = y.0.iter().map(|&e| e as u32).sum();
            dx.cmp(&dy).then_with(|| y.0.cmp(x.0))
        });
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.var_name(i) } else { format!("{}^{}", self.var_name(i), e) })
                .collect();
            let mag = c.abs();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{}*{}", mag, vars.join("*")),
            };
            match (k, c.is_negative()) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

/// Dense univariate polynomial, lowest degree first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs<R: Ring<El = E>>(ring: &R, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant<R: Ring<El = E>>(ring: &R, c: E) -> Self {
        Self::from_coeffs(ring, vec![c])
    }

    /// `c x^k`.
    pub fn monomial<R: Ring<El = E>>(ring: &R, c: E, k: usize) -> Self {
        let mut v = vec![ring.zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(ring, v)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i`.
    pub fn coeff<R: Ring<El = E>>(&self, ring: &R, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn add<R: Ring<El = E>>(&self, other: &Self, ring: &R) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let v = (0..len).map(|i| ring.add(&self.coeff(ring, i), &other.coeff(ring, i))).collect();
        Self::from_coeffs(ring, v)
    }

    pub fn sub<R: Ring<El = E>>(&self, other: &Self, ring: &R) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let v = (0..len).map(|i| ring.sub(&self.coeff(ring, i), &other.coeff(ring, i))).collect();
        Self::from_coeffs(ring, v)
    }

    pub fn neg<R: Ring<El = E>>(&self, ring: &R) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| ring.neg(c)).collect() }
    }

    pub fn mul<R: Ring<El = E>>(&self, other: &Self, ring: &R) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = ring.add(&v[i + j], &ring.mul(a, b));
            }
        }
        Self::from_coeffs(ring, v)
    }

    pub fn scale<R: Ring<El = E>>(&self, c: &E, ring: &R) -> Self {
        Self::from_coeffs(ring, self.coeffs.iter().map(|a| ring.mul(a, c)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift<R: Ring<El = E>>(&self, k: usize, ring: &R) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![ring.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow<R: Ring<El = E>>(&self, k: usize, ring: &R) -> Self {
        (0..k).fold(Self::constant(ring, ring.one()), |acc, _| acc.mul(self, ring))
    }

    pub fn format<R: Ring<El = E>>(&self, ring: &R) -> Vec<String> {
        self.coeffs.iter().map(|c| ring.format(c)).collect()
    }
}

/// The total order on real polynomials: by degree, then at the lowest index
/// where coefficients differ, the smaller coefficient wins.
pub fn poly_order_leq<R: OrderedRing>(ring: &R, f: &Poly<R::El>, g: &Poly<R::El>) -> bool {
    poly_order_cmp(ring, f, g) != Ordering::Greater
}

pub fn poly_order_cmp<R: OrderedRing>(ring: &R, f: &Poly<R::El>, g: &Poly<R::El>) -> Ordering {
    // The zero polynomial sits below every constant.
    let deg = |p: &Poly<R::El>| p.degree().map_or(-1, |d| d as i64);
    deg(f).cmp(&deg(g)).then_with(|| {
        let len = f.coeffs.len();
        (0..len)
            .map(|k| ring.compare(&f.coeffs[k], &g.coeffs[k]))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    })
}
