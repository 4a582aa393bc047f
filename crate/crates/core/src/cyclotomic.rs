//! Exact arithmetic in `Z[ζ_N]`, the integers adjoined a primitive `N`-th root
//! of unity. Character values of a finite abelian group of exponent `N` live
//! here, so character sums can be compared without floating point.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::ring::{Ring, RingError};

/// `Z[x] / Φ_N(x)` with `ζ_N = x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicRing {
    inner: Arc<Tables>,
}

#[derive(Debug, PartialEq, Eq)]
struct Tables {
    order: u64,
    /// Monic `Φ_N`, lowest degree first.
    phi: Vec<i64>,
    /// `powers[k]` is `ζ^k` reduced, for `k < N`.
    powers: Vec<Vec<i64>>,
}

/// An element of `Z[ζ_N]` in reduced form: exactly `deg Φ_N` coefficients of
/// `1, ζ, …, ζ^{deg-1}`. Reduced forms are canonical, so `==` is equality in the ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cyclotomic(Vec<i64>);

impl Cyclotomic {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<i64> {
        self.0[1..].iter().all(|&c| c == 0).then(|| self.0[0])
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial; panics on a nonzero remainder.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut quo = vec![0i64; rem.len() - dd];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dd];
        quo[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quo
}

/// `Φ_n` by dividing `x^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let divisors: BTreeSet<u64> = (1..n).filter(|d| n.is_multiple_of(*d)).collect();
    let den = divisors.into_iter().map(cyclotomic_polynomial).fold(vec![1i64], |acc, p| poly_mul(&acc, &p));
    poly_div_exact(&num, &den)
}

impl CyclotomicRing {
    pub fn new(order: u64) -> Self {
        assert!(order >= 1, "root of unity order must be positive");
        let phi = cyclotomic_polynomial(order);
        let d = phi.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; d];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // cur *= x, then subtract the overflow times Φ.
            let top = cur[d - 1];
            let mut next = vec![0i64; d];
            next[1..d].copy_from_slice(&cur[..d - 1]);
            for j in 0..d {
                next[j] -= top * phi[j];
            }
            cur = next;
        }
        CyclotomicRing { inner: Arc::new(Tables { order, phi, powers }) }
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn phi(&self) -> &[i64] {
        &self.inner.phi
    }

    pub fn degree(&self) -> usize {
        self.inner.phi.len() - 1
    }

    /// `ζ_N^k`.
    pub fn root_power(&self, k: u64) -> Cyclotomic {
        Cyclotomic(self.inner.powers[(k % self.inner.order) as usize].clone())
    }

    pub fn from_int(&self, v: i64) -> Cyclotomic {
        let mut c = vec![0i64; self.degree()];
        c[0] = v;
        Cyclotomic(c)
    }

    /// `Σ_k counts[k] ζ^k`, with `counts` indexed by exponent mod `N`.
    pub fn from_exponent_counts(&self, counts: &[i64]) -> Cyclotomic {
        let d = self.degree();
        let mut out = vec![0i64; d];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (o, p) in out.iter_mut().zip(&self.inner.powers[k % self.inner.order as usize]) {
                    *o += c * p;
                }
            }
        }
        Cyclotomic(out)
    }
}

impl Ring for CyclotomicRing {
    type El = Cyclotomic;

    fn zero(&self) -> Cyclotomic {
        self.from_int(0)
    }
    fn one(&self) -> Cyclotomic {
        self.from_int(1)
    }
    fn add(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        Cyclotomic(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn neg(&self, a: &Cyclotomic) -> Cyclotomic {
        Cyclotomic(a.0.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        self.from_exponent_counts(&poly_mul(&a.0, &b.0))
    }
    fn from_i64(&self, v: i64) -> Cyclotomic {
        self.from_int(v)
    }
    fn is_field(&self) -> bool {
        false
    }
    fn parse(&self, s: &str) -> Result<Cyclotomic, RingError> {
        s.trim().parse::<i64>().map(|v| self.from_int(v)).map_err(|_| RingError::Parse(s.to_owned()))
    }
    fn format(&self, a: &Cyclotomic) -> String {
        if let Some(v) = a.as_integer() {
            return v.to_string();
        }
        let terms: Vec<String> = a
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            })
            .collect();
        format!("{} (z = zeta_{})", terms.join(" + "), self.order())
    }
}
