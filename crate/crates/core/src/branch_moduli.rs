//! Plane branches with a single characteristic pair `(n, m)`.
//!
//! The minimal Tjurina number is obtained from the dimension `q` of the
//! generic component of the moduli space (Delorme's recursion over the
//! continued fraction of `m/n`) and from `tau_minus`, the dimension of the
//! constant-semigroup deformation of the monomial curve:
//!
//! ```text
//! q = tau_minus - (mu - tau_min)
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::numtheory::{continued_fraction, gcd, integer_part, ContinuedFraction, NumTheoryError};
use crate::scalar::{as_integer, frac, whole, IntScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("invalid characteristic pair: {0}")]
    Domain(String),
    /// A formula that must produce a non-negative integer did not.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
}

/// Characteristic pair `(n, m)` with `2 <= n < m` and `gcd(n, m) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharPair<T = BigInt> {
    n: T,
    m: T,
}

impl<T: IntScalar> CharPair<T> {
    pub fn new(n: T, m: T) -> Result<Self, BranchError> {
        if n < T::of(2) || n >= m {
            return Err(BranchError::Domain(format!("need 2 <= n < m, got ({n}, {m})")));
        }
        if !gcd(&n, &m).is_one() {
            return Err(BranchError::Domain(format!("({n}, {m}) is not coprime")));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> &T {
        &self.n
    }

    pub fn m(&self) -> &T {
        &self.m
    }

    /// The ordinary cusp `(2, 3)`, excluded from Delorme's formula.
    pub fn is_cusp(&self) -> bool {
        self.n == T::of(2) && self.m == T::of(3)
    }

    /// Milnor number `(n-1)(m-1)`.
    pub fn mu(&self) -> T {
        (self.n.clone() - T::one()) * (self.m.clone() - T::one())
    }

    fn require_not_cusp(&self) -> Result<(), BranchError> {
        if self.is_cusp() {
            Err(BranchError::Domain("(2, 3) is excluded here".into()))
        } else {
            Ok(())
        }
    }
}

impl<T: fmt::Display> fmt::Display for CharPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

/// The numbers `r_i`, `t_i` of Delorme's recursion, indexed `0..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DelormeTrace<T = BigInt> {
    pub cf: ContinuedFraction<T>,
    r: Vec<T>,
    t: Vec<u8>,
}

impl<T: IntScalar> DelormeTrace<T> {
    fn build(cf: ContinuedFraction<T>) -> Self {
        let k = cf.len();
        let mut r = vec![T::zero(); k + 1];
        let mut t = vec![0u8; k + 1];
        t[k] = 1;
        for i in (1..=k).rev() {
            r[i - 1] = if t[i] == 1 {
                r[i].clone() + cf.h(i).clone()
            } else {
                r[i].clone()
            };
            t[i - 1] = if t[i] == 1 && r[i - 1].is_even_int() { 0 } else { 1 };
        }
        Self { cf, r, t }
    }

    pub fn k(&self) -> usize {
        self.cf.len()
    }

    pub fn r(&self, i: usize) -> &T {
        &self.r[i]
    }

    /// `t_i`; `t_0` is produced by the same rule but never used.
    pub fn t(&self, i: usize) -> u8 {
        self.t[i]
    }

    pub fn digest(&self) -> String {
        let terms: Vec<String> = self.cf.terms().iter().map(|h| h.to_string()).collect();
        format!(
            "cf=[{}];r0={};t1={};t2={}",
            terms.join(","),
            self.r(0),
            self.t(1),
            self.t(2)
        )
    }
}

/// Dimension `q` of the generic component, with the recursion that produced it.
pub fn delorme_q<T: IntScalar>(pair: &CharPair<T>) -> Result<(T, DelormeTrace<T>), BranchError> {
    pair.require_not_cusp()?;
    let (n, m) = (pair.n.clone(), pair.m.clone());
    let trace = DelormeTrace::build(continued_fraction(&m, &n)?);
    let four = T::of(4);
    let two = T::of(2);
    let t1 = T::of(trace.t(1) as i64);
    let t2 = T::of(trace.t(2) as i64);
    let h1 = trace.cf.h(1).clone();

    let q = frac((n - four.clone()) * (m - four.clone()), four.clone())
        + frac(trace.r(0).clone(), four)
        + frac((two.clone() - t1.clone()) * (h1 - two.clone()), two.clone())
        - frac(t1 * t2, two);

    match as_integer(&q) {
        Some(v) if !v.is_negative() => Ok((v, trace)),
        _ => Err(BranchError::Inconsistent(format!(
            "q for {pair} evaluated to {q}, not a non-negative integer"
        ))),
    }
}

/// Both sides of `(n-4)(m-4)/4 <= q <= (n-3)(m-3)/2`.
pub fn q_bounds<T: IntScalar>(pair: &CharPair<T>) -> Result<(Ratio<T>, Ratio<T>), BranchError> {
    pair.require_not_cusp()?;
    let (n, m) = (pair.n.clone(), pair.m.clone());
    let lower = frac((n.clone() - T::of(4)) * (m.clone() - T::of(4)), T::of(4));
    let upper = frac((n - T::of(3)) * (m - T::of(3)), T::of(2));
    Ok((lower, upper))
}

/// Closed form `(n-3)(m-3)/2 + [m/n] - 1`.
pub fn tau_minus<T: IntScalar>(pair: &CharPair<T>) -> Result<T, BranchError> {
    let (n, m) = (pair.n.clone(), pair.m.clone());
    let half = frac((n.clone() - T::of(3)) * (m.clone() - T::of(3)), T::of(2));
    let value = half + whole(integer_part(&m, &n) - T::one());
    match as_integer(&value) {
        Some(v) if !v.is_negative() => Ok(v),
        _ => Err(BranchError::Inconsistent(format!(
            "tau_minus for {pair} evaluated to {value}"
        ))),
    }
}

/// Counts lattice points strictly inside the triangle cut out by
/// `alpha = m-1`, `beta = n-1` and `alpha*n + beta*m = n*m`.
pub fn lattice_tau_minus<T: IntScalar>(pair: &CharPair<T>) -> T {
    let (n, m) = (pair.n.clone(), pair.m.clone());
    let nm = n.clone() * m.clone();
    let alpha_end = m.clone() - T::one();
    let beta_end = n.clone() - T::one();
    let mut count = T::zero();
    let mut alpha = T::zero();
    while alpha < alpha_end {
        let mut beta = T::zero();
        while beta < beta_end {
            if alpha.clone() * n.clone() + beta.clone() * m.clone() > nm {
                count = count + T::one();
            }
            beta = beta + T::one();
        }
        alpha = alpha + T::one();
    }
    count
}

/// Invariants of the generic branch with characteristic pair `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchInvariants<T: IntScalar = BigInt> {
    pub pair: CharPair<T>,
    pub mu: T,
    pub q: T,
    pub tau_minus: T,
    pub tau_min: T,
    pub ratio: Ratio<T>,
    /// `None` for the cusp, which bypasses the recursion.
    pub trace: Option<DelormeTrace<T>>,
}

pub fn branch_invariants<T: IntScalar>(pair: &CharPair<T>) -> Result<BranchInvariants<T>, BranchError> {
    let mu = pair.mu();
    if pair.is_cusp() {
        // Quasi-homogeneous: tau = mu = 2.
        return Ok(BranchInvariants {
            pair: pair.clone(),
            mu: mu.clone(),
            q: T::zero(),
            tau_minus: T::zero(),
            tau_min: mu,
            ratio: Ratio::one(),
            trace: None,
        });
    }
    let (q, trace) = delorme_q(pair)?;
    let tau_minus = tau_minus(pair)?;
    let tau_min = mu.clone() - tau_minus.clone() + q.clone();
    if !tau_min.is_positive() {
        return Err(BranchError::Inconsistent(format!("tau_min for {pair} is {tau_min}")));
    }
    let ratio = Ratio::new(mu.clone(), tau_min.clone());
    Ok(BranchInvariants {
        pair: pair.clone(),
        mu,
        q,
        tau_minus,
        tau_min,
        ratio,
        trace: Some(trace),
    })
}

/// Lower bound for `tau_min` obtained from the left side of the `q` sandwich:
/// `(n-4)(m-4)/4 + (n-1)(m-1) - (n-3)(m-3)/2 - m/n + 1`.
pub fn eq3_lower_bound<T: IntScalar>(pair: &CharPair<T>) -> Result<Ratio<T>, BranchError> {
    let (lower_q, _) = q_bounds(pair)?;
    let (n, m) = (pair.n.clone(), pair.m.clone());
    Ok(lower_q + whole(pair.mu())
        - frac((n.clone() - T::of(3)) * (m.clone() - T::of(3)), T::of(2))
        - frac(m, n)
        + Ratio::one())
}

/// `4n(n-1)(m-1) / (3n^2 m - 2n^2 - 2nm + 6n - 4m)`, which is `mu` divided by
/// [`eq3_lower_bound`].
pub fn eq4_ratio_bound<T: IntScalar>(pair: &CharPair<T>) -> Result<Ratio<T>, BranchError> {
    pair.require_not_cusp()?;
    let (n, m) = (pair.n.clone(), pair.m.clone());
    let num = T::of(4) * n.clone() * pair.mu();
    let den = T::of(3) * n.clone() * n.clone() * m.clone()
        - T::of(2) * n.clone() * n.clone()
        - T::of(2) * n.clone() * m.clone()
        + T::of(6) * n
        - T::of(4) * m;
    if !den.is_positive() {
        return Err(BranchError::Inconsistent(format!("ratio bound denominator {den} for {pair}")));
    }
    Ok(Ratio::new(num, den))
}

/// Upper bound for `mu / tau_min` that is strictly below 4/3 on every pair:
/// the rational bound above when `n >= 4`, `(6m-6)/(5m-3)` when `n = 3`, and
/// the exact value 1 when `n = 2`.
pub fn prop1_ratio_bound<T: IntScalar>(pair: &CharPair<T>) -> Result<Ratio<T>, BranchError> {
    pair.require_not_cusp()?;
    let n = pair.n.clone();
    let m = pair.m.clone();
    if n == T::of(2) {
        Ok(Ratio::one())
    } else if n == T::of(3) {
        Ok(Ratio::new(T::of(6) * m.clone() - T::of(6), T::of(5) * m - T::of(3)))
    } else {
        eq4_ratio_bound(pair)
    }
}

/// All coprime pairs `2 <= n < m <= max`, ordered by `(n, m)`.
pub fn coprime_pairs<T: IntScalar>(max: i64) -> Vec<CharPair<T>> {
    let mut out = Vec::new();
    for n in 2..max {
        for m in n + 1..=max {
            if num_integer::gcd(n, m) == 1 {
                out.push(CharPair {
                    n: T::of(n),
                    m: T::of(m),
                });
            }
        }
    }
    out
}
