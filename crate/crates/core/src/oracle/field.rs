//! Coefficient fields for the colength linear algebra.
//!
//! A field is a context object: prime fields carry their modulus, so element
//! operations go through the field rather than through operator traits.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub trait ScalarField: Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    /// `None` when the rational has no image (denominator divisible by `p`).
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a - c * b`.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse of a non-zero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl ScalarField for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn sub_mul(&self, a: &BigRational, c: &BigRational, b: &BigRational) -> BigRational {
        a - c * b
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// Integers modulo a prime `p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Option<Self> {
        (p < (1 << 32) && is_prime(p)).then_some(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((v % &p) + &p) % &p;
        r.to_u64().expect("residue fits in u64")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl ScalarField for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.reduce(q.denom());
        if den == 0 {
            return None;
        }
        Some(self.reduce(q.numer()) * self.inv(&den) % self.p)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn sub_mul(&self, a: &u64, c: &u64, b: &u64) -> u64 {
        (a + self.p - c * b % self.p) % self.p
    }

    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        self.pow(*a, self.p - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Where the colength linear algebra runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalarDomain {
    Rational,
    PrimeField(u64),
}

impl ScalarDomain {
    /// A prime in `[10^6, 10^9]` derived deterministically from `seed`.
    pub fn random_prime(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let mut candidate = rng.random_range(1_000_000u64..=999_999_000) | 1;
        while !is_prime(candidate) {
            candidate += 2;
        }
        ScalarDomain::PrimeField(candidate)
    }
}

impl Default for ScalarDomain {
    fn default() -> Self {
        ScalarDomain::random_prime(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = PrimeField::new(101).unwrap();
        assert!(PrimeField::new(100).is_none());
        let half = f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(f.mul(&half, &2), 1);
        assert_eq!(f.mul(&f.inv(&7), &7), 1);
        assert_eq!(f.sub_mul(&3, &2, &5), 101 - 7);
        let neg = f.from_rational(&BigRational::from_integer((-3).into())).unwrap();
        assert_eq!(neg, 98);
        assert!(f.from_rational(&BigRational::new(1.into(), 202.into())).is_none());
    }

    #[test]
    fn random_prime_is_deterministic_and_in_range() {
        for seed in 0..20 {
            let a = ScalarDomain::random_prime(seed);
            assert_eq!(a, ScalarDomain::random_prime(seed));
            let ScalarDomain::PrimeField(p) = a else { panic!() };
            assert!((1_000_000..=1_000_000_000).contains(&p));
            assert!(is_prime(p));
        }
    }
}
