//! Lower bound for `tau_min` that needs no closed-form base values.
//!
//! Only the shape of the recursion matters: which family the terminal pair
//! `(a_k, b_k)` belongs to fixes the correction term `kappa` in
//!
//! ```text
//! (n-1)(m-1) - (m-2)(n-2)/4 - kappa(n, m) <= tau_min
//! ```

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use super::{walk, BaseKind, SigmaError, WalkEnd, WeightPair};
use crate::scalar::{frac, whole, IntScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KappaEnding {
    /// `Sigma_0`, `Sigma_1` or `Sigma_{b-1}` with `b` odd: `kappa = m/(4n)`.
    SigmaFamilyOddB,
    /// Those families with `b` even, or `Sigma_{b/2}` with `b/2` odd: `5/4`.
    SigmaFamilyEvenBOrHalfOdd,
    /// `Sigma_{b/2}` with `b/2` even, or the BP case: `0`.
    HalfEvenOrBP,
    /// Terminal pair with both entries at most 2: `0`.
    TrivialBase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaClass<T: IntScalar> {
    pub ending: KappaEnding,
    pub kappa: Ratio<T>,
    /// Terminal pair, absent for BP endings.
    pub terminal: Option<(T, T)>,
    /// Closed-form family of the terminal pair with the `a, b <= 2` base rule.
    pub terminal_kind: Option<BaseKind>,
}

/// Classifies the ending of `sigma(m, n)` and returns its `kappa`.
///
/// A terminal pair `(a, b)` with `b <= 2 < a` evaluates to zero, but for the
/// bound it is read as the `Sigma_0` (`b | a`) or `Sigma_1` family with that
/// `b`; only pairs with both entries at most 2 count as trivial. Treating
/// e.g. `(5, 1)` as trivial with `kappa = 0` overshoots `tau_min`.
pub fn kappa<T: IntScalar>(pair: &WeightPair<T>) -> Result<KappaClass<T>, SigmaError> {
    let (big, small) = pair.normalized();
    let w = walk(&big, &small)?;
    let (a, b, kind) = match w.end {
        WalkEnd::Bp => {
            return Ok(KappaClass {
                ending: KappaEnding::HalfEvenOrBP,
                kappa: Ratio::zero(),
                terminal: None,
                terminal_kind: None,
            })
        }
        WalkEnd::Base { pair: (a, b), kind } => (a, b, kind),
    };
    let two = T::of(2);
    let kind = if kind != BaseKind::Trivial {
        kind
    } else if a <= two && b <= two {
        return Ok(KappaClass {
            ending: KappaEnding::TrivialBase,
            kappa: Ratio::zero(),
            terminal: Some((a, b)),
            terminal_kind: Some(BaseKind::Trivial),
        });
    } else if a.mod_floor(&b).is_zero() {
        BaseKind::Sigma0
    } else {
        BaseKind::Sigma1
    };
    let b_odd = !b.is_even_int();
    let (ending, kappa) = match kind {
        BaseKind::SigmaHalf => {
            let half = b.clone() / two;
            if half.is_even_int() {
                (KappaEnding::HalfEvenOrBP, Ratio::zero())
            } else {
                (KappaEnding::SigmaFamilyEvenBOrHalfOdd, frac(T::of(5), T::of(4)))
            }
        }
        _ if b_odd => (KappaEnding::SigmaFamilyOddB, frac(big, T::of(4) * small)),
        _ => (KappaEnding::SigmaFamilyEvenBOrHalfOdd, frac(T::of(5), T::of(4))),
    };
    Ok(KappaClass {
        ending,
        kappa,
        terminal: Some((a, b)),
        terminal_kind: Some(kind),
    })
}

/// `(n-1)(m-1) - (m-2)(n-2)/4 - kappa(n, m)`.
pub fn prop2_lower_bound<T: IntScalar>(pair: &WeightPair<T>) -> Result<Ratio<T>, SigmaError> {
    let k = kappa(pair)?;
    let (n, m) = (pair.n().clone(), pair.m().clone());
    Ok(whole(pair.mu()) - frac((m - T::of(2)) * (n - T::of(2)), T::of(4)) - k.kappa)
}

/// `4(n-1)(m-1) / (3nm - 2n - 2m - 4 kappa)`, an upper bound for `mu/tau_min`.
pub fn ratio_bound_sqh<T: IntScalar>(pair: &WeightPair<T>) -> Result<Ratio<T>, SigmaError> {
    let k = kappa(pair)?;
    let (n, m) = (pair.n().clone(), pair.m().clone());
    let den = whole(T::of(3) * n.clone() * m.clone() - T::of(2) * n - T::of(2) * m)
        - k.kappa * whole(T::of(4));
    if den <= Ratio::zero() {
        return Err(SigmaError::Inconsistent(format!(
            "ratio bound denominator {den} for {pair}"
        )));
    }
    Ok(whole(T::of(4) * pair.mu()) / den)
}

/// The two readings of when [`ratio_bound_sqh`] is below 4/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundConditions {
    /// `n + m + kappa > 3`, as stated alongside the bound.
    pub stated: bool,
    /// `n + m > 3 + 4 kappa`, obtained by clearing denominators.
    pub derived: bool,
}

impl BoundConditions {
    pub fn evaluate<T: IntScalar>(pair: &WeightPair<T>, kappa: &Ratio<T>) -> Self {
        let sum = whole(pair.n().clone() + pair.m().clone());
        let three = whole(T::of(3));
        Self {
            stated: sum.clone() + kappa.clone() > three,
            derived: sum > three + kappa.clone() * whole(T::of(4)),
        }
    }
}
