//! Irreducible curves with semigroup `<2p, 2q, 2pq + d>`, `gcd(p, q) = 1`,
//! `p < q`, `d` odd, whose Milnor and Tjurina numbers have closed forms.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::numtheory::gcd;
use crate::scalar::IntScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family member: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LpMember<T = BigInt> {
    p: T,
    q: T,
    d: T,
}

impl<T: IntScalar> LpMember<T> {
    /// Requires `2 <= p < q`, `gcd(p, q) = 1` and `d` odd and positive.
    pub fn new(p: T, q: T, d: T) -> Result<Self, FamilyError> {
        if p < T::of(2) || p >= q {
            return Err(FamilyError::Invalid(format!("need 2 <= p < q, got p={p}, q={q}")));
        }
        if !gcd(&p, &q).is_one() {
            return Err(FamilyError::Invalid(format!("p={p} and q={q} are not coprime")));
        }
        if !d.is_positive() || d.is_even_int() {
            return Err(FamilyError::Invalid(format!("d={d} must be odd and positive")));
        }
        Ok(Self { p, q, d })
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    pub fn d(&self) -> &T {
        &self.d
    }
}

/// Semigroup generators `(2p, 2q, 2pq + d)`.
pub fn lp_semigroup<T: IntScalar>(member: &LpMember<T>) -> (T, T, T) {
    let two = T::of(2);
    (
        two.clone() * member.p.clone(),
        two.clone() * member.q.clone(),
        two * member.p.clone() * member.q.clone() + member.d.clone(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpInvariants<T: IntScalar = BigInt> {
    pub mu: T,
    pub tau: T,
    pub ratio: Ratio<T>,
}

/// `mu = (2p-1)(2q-1) + d` and `tau = mu - (p-1)(q-1)`; `tau` is constant on
/// the equisingularity class.
pub fn lp_invariants<T: IntScalar>(member: &LpMember<T>) -> LpInvariants<T> {
    let two = T::of(2);
    let (p, q) = (member.p.clone(), member.q.clone());
    let mu = (two.clone() * p.clone() - T::one()) * (two * q.clone() - T::one()) + member.d.clone();
    let tau = mu.clone() - (p - T::one()) * (q - T::one());
    let ratio = Ratio::new(mu.clone(), tau.clone());
    LpInvariants { mu, tau, ratio }
}

/// Every valid member with `p <= pmax`, `q <= qmax`, `d <= dmax`, ordered by
/// `(p, q, d)`.
pub fn lp_members<T: IntScalar>(pmax: i64, qmax: i64, dmax: i64) -> Vec<LpMember<T>> {
    let mut out = Vec::new();
    for p in 2..=pmax {
        for q in p + 1..=qmax {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            for d in (1..=dmax).step_by(2) {
                out.push(LpMember {
                    p: T::of(p),
                    q: T::of(q),
                    d: T::of(d),
                });
            }
        }
    }
    out
}
