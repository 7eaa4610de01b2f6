//! Integer utilities: gcd, canonical continued fractions, range-constrained
//! Bezout witnesses and integer parts.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::IntScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("domain error: {0}")]
    Domain(String),
}

pub fn gcd<T: IntScalar>(a: &T, b: &T) -> T {
    a.gcd(b)
}

/// `floor(m / n)` for `n >= 1`.
pub fn integer_part<T: IntScalar>(m: &T, n: &T) -> T {
    m.div_floor(n)
}

/// Simple continued fraction `[h_1, ..., h_k]` of `numerator / denominator`,
/// stored in canonical form (last term at least 2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction<T> {
    numerator: T,
    denominator: T,
    terms: Vec<T>,
}

impl<T: IntScalar> ContinuedFraction<T> {
    pub fn numerator(&self) -> &T {
        &self.numerator
    }

    pub fn denominator(&self) -> &T {
        &self.denominator
    }

    pub fn terms(&self) -> &[T] {
        &self.terms
    }

    /// Number of terms `k`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term `h_i`, 1-based.
    pub fn h(&self, i: usize) -> &T {
        &self.terms[i - 1]
    }

    /// Successive convergents `p_i / q_i`, the last one equal to the value.
    pub fn convergents(&self) -> Vec<Ratio<T>> {
        let (mut p_prev, mut p) = (T::one(), self.terms[0].clone());
        let (mut q_prev, mut q) = (T::zero(), T::one());
        let mut out = vec![Ratio::new(p.clone(), q.clone())];
        for h in &self.terms[1..] {
            let p_next = h.clone() * p.clone() + p_prev;
            let q_next = h.clone() * q.clone() + q_prev;
            p_prev = p;
            q_prev = q;
            p = p_next;
            q = q_next;
            out.push(Ratio::new(p.clone(), q.clone()));
        }
        out
    }

    /// Folds the terms back into a rational, innermost first.
    pub fn evaluate(&self) -> Ratio<T> {
        let mut acc = Ratio::from_integer(self.terms.last().expect("non-empty").clone());
        for h in self.terms.iter().rev().skip(1) {
            acc = Ratio::from_integer(h.clone()) + acc.recip();
        }
        acc
    }
}

/// Canonical continued fraction of `m / n` for coprime `m > n >= 2`.
pub fn continued_fraction<T: IntScalar>(m: &T, n: &T) -> Result<ContinuedFraction<T>, NumTheoryError> {
    if *n < T::of(2) || n >= m {
        return Err(NumTheoryError::Domain(format!(
            "continued fraction needs m > n >= 2, got m={m}, n={n}"
        )));
    }
    if !gcd(m, n).is_one() {
        return Err(NumTheoryError::Domain(format!("{m} and {n} are not coprime")));
    }
    let mut terms = Vec::new();
    let (mut a, mut b) = (m.clone(), n.clone());
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        terms.push(q);
        a = b;
        b = r;
    }
    // Euclid on a coprime pair with n >= 2 ends with a quotient >= 2.
    debug_assert!(terms.len() >= 2 && *terms.last().unwrap() >= T::of(2));
    Ok(ContinuedFraction {
        numerator: m.clone(),
        denominator: n.clone(),
        terms,
    })
}

/// Which range the Bezout coefficient `u` must fall in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BezoutRange {
    /// `2 <= u < a`, used by the coprime recursion step.
    CaseA,
    /// `1 <= u < a`, used by the non-coprime recursion step.
    CaseB,
}

/// Integers with `u*b - v*a = 1` and `u` inside the prescribed range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BezoutWitness<T> {
    pub u: T,
    pub v: T,
    pub a: T,
    pub b: T,
    pub range_kind: BezoutRange,
}

/// Finds the unique `u` in range with `u*b ≡ 1 (mod a)` and the matching `v`.
pub fn bezout_constrained<T: IntScalar>(
    a: &T,
    b: &T,
    kind: BezoutRange,
) -> Result<BezoutWitness<T>, NumTheoryError> {
    if *a < T::of(2) || *b < T::one() {
        return Err(NumTheoryError::Domain(format!(
            "bezout needs a >= 2 and b >= 1, got a={a}, b={b}"
        )));
    }
    let ext = b.extended_gcd(a);
    if !ext.gcd.is_one() {
        return Err(NumTheoryError::Domain(format!("{a} and {b} are not coprime")));
    }
    let u = ext.x.mod_floor(a);
    let low = match kind {
        BezoutRange::CaseA => T::of(2),
        BezoutRange::CaseB => T::one(),
    };
    if u < low {
        return Err(NumTheoryError::Domain(format!(
            "no Bezout coefficient for a={a}, b={b} in the {kind:?} range"
        )));
    }
    let v = (u.clone() * b.clone() - T::one()) / a.clone();
    debug_assert!(u.clone() * b.clone() - v.clone() * a.clone() == T::one());
    Ok(BezoutWitness {
        u,
        v,
        a: a.clone(),
        b: b.clone(),
        range_kind: kind,
    })
}
