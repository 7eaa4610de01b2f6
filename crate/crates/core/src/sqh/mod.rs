//! Semi-quasi-homogeneous germs `f = y^n - x^m + g` with `deg_w(g) > nm`.
//!
//! The minimal Tjurina number of the class is `(n-1)(m-1) - sigma(m, n)`,
//! where `sigma` unwinds a finite sequence of pairs `(a_i, b_i)` until it
//! reaches a pair with a closed form. Those closed forms are not computed
//! here; they are supplied by a [`BaseCaseProvider`].

mod kappa;
mod provider;

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::branch_moduli::BranchError;
use crate::numtheory::{bezout_constrained, gcd, BezoutRange, NumTheoryError};
use crate::scalar::{as_integer, frac, IntScalar};

pub use kappa::{kappa, prop2_lower_bound, ratio_bound_sqh, BoundConditions, KappaClass, KappaEnding};
pub use provider::{
    BaseCaseProvider, DelormeTier, Provenance, SigmaTable, TableEntry, TableError,
};

/// Recursion steps allowed before giving up.
pub const MAX_STEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("no base case available for sigma{kind} at ({a}, {b})")]
    BaseCaseUnavailable { a: String, b: String, kind: BaseKind },
    #[error("sigma recursion exceeded {0} steps")]
    NonTermination(usize),
    #[error("invalid recursion step: {0}")]
    InvalidStep(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("invalid weights: {0}")]
    Domain(String),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error(transparent)]
    Branch(#[from] BranchError),
}

/// Weights `(n, m)` of the initial term `y^n - x^m`; both at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightPair<T = BigInt> {
    n: T,
    m: T,
}

impl<T: IntScalar> WeightPair<T> {
    pub fn new(n: T, m: T) -> Result<Self, SigmaError> {
        if n < T::of(2) || m < T::of(2) {
            return Err(SigmaError::Domain(format!("need n, m >= 2, got ({n}, {m})")));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> &T {
        &self.n
    }

    pub fn m(&self) -> &T {
        &self.m
    }

    pub fn mu(&self) -> T {
        (self.n.clone() - T::one()) * (self.m.clone() - T::one())
    }

    /// `(max, min)` of the weights.
    pub fn normalized(&self) -> (T, T) {
        normalize(self.m.clone(), self.n.clone())
    }

    pub fn is_coprime(&self) -> bool {
        gcd(&self.n, &self.m).is_one()
    }
}

impl<T: fmt::Display> fmt::Display for WeightPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

fn normalize<T: IntScalar>(a: T, b: T) -> (T, T) {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// How the recursion treats a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairClass {
    BaseTrivial,
    NeedsSigma0,
    NeedsSigma1,
    NeedsSigmaBm1,
    NeedsSigmaHalf,
    StepA,
    StepB,
}

/// Closed-form families that end a recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BaseKind {
    Trivial,
    Sigma0,
    Sigma1,
    SigmaBm1,
    SigmaHalf,
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BaseKind::Trivial => "_trivial",
            BaseKind::Sigma0 => "_0",
            BaseKind::Sigma1 => "_1",
            BaseKind::SigmaBm1 => "_(b-1)",
            BaseKind::SigmaHalf => "_(b/2)",
        };
        f.write_str(s)
    }
}

impl PairClass {
    pub fn base_kind(self) -> Option<BaseKind> {
        match self {
            PairClass::BaseTrivial => Some(BaseKind::Trivial),
            PairClass::NeedsSigma0 => Some(BaseKind::Sigma0),
            PairClass::NeedsSigma1 => Some(BaseKind::Sigma1),
            PairClass::NeedsSigmaBm1 => Some(BaseKind::SigmaBm1),
            PairClass::NeedsSigmaHalf => Some(BaseKind::SigmaHalf),
            PairClass::StepA | PairClass::StepB => None,
        }
    }
}

/// Classifies `(a, b)` after swapping so that `a >= b`.
///
/// Pairs with `min(a, b) <= 2` are trivial: the germ `y^b - x^a` is then
/// smooth or of type `A_{a-1}`, where `tau = mu`.
pub fn classify<T: IntScalar>(a: &T, b: &T) -> PairClass {
    let (a, b) = normalize(a.clone(), b.clone());
    if b <= T::of(2) {
        return PairClass::BaseTrivial;
    }
    let r = a.mod_floor(&b);
    if r.is_zero() {
        PairClass::NeedsSigma0
    } else if r.is_one() {
        PairClass::NeedsSigma1
    } else if r == b.clone() - T::one() {
        PairClass::NeedsSigmaBm1
    } else if r.clone() + r == b {
        PairClass::NeedsSigmaHalf
    } else if gcd(&a, &b).is_one() {
        PairClass::StepA
    } else {
        PairClass::StepB
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepCase {
    /// Coprime pair, `gamma` even.
    AE,
    /// Coprime pair, `gamma` odd.
    AO,
    /// Common factor `alpha`, even; terminal.
    BP,
    /// Common factor `alpha`, odd.
    BO,
}

/// One step of the recursion on the normalized pair `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaStep<T: IntScalar = BigInt> {
    pub a: T,
    pub b: T,
    pub case: StepCase,
    pub u: T,
    pub v: T,
    /// `gamma` for the A cases, `alpha` for the B cases.
    pub gamma_or_alpha: T,
    pub contribution: Ratio<T>,
    /// Next pair exactly as produced by the step, before normalization.
    pub next: Option<(T, T)>,
}

impl<T: IntScalar> SigmaStep<T> {
    /// `a * b_next > b * a_next`, i.e. the ratio `a/b` strictly drops.
    /// `None` for terminal steps.
    pub fn ratio_decreases(&self) -> Option<bool> {
        self.next
            .as_ref()
            .map(|(an, bn)| self.a.clone() * bn.clone() > self.b.clone() * an.clone())
    }

    /// `a * b > a_next * b_next`.
    pub fn product_decreases(&self) -> Option<bool> {
        self.next
            .as_ref()
            .map(|(an, bn)| self.a.clone() * self.b.clone() > an.clone() * bn.clone())
    }

    fn tag(&self) -> &'static str {
        match self.case {
            StepCase::AE => "AE",
            StepCase::AO => "AO",
            StepCase::BP => "BP",
            StepCase::BO => "BO",
        }
    }
}

/// Which provider tier resolved a terminal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProviderTier {
    Trivial,
    CoprimeDelorme,
    Table(Provenance),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TerminalBase<T = BigInt> {
    pub pair: (T, T),
    pub kind: BaseKind,
    pub value: T,
    pub provider_tier: ProviderTier,
}

/// Full transcript of one `sigma(a, b)` evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaTrace<T: IntScalar = BigInt> {
    pub top: (T, T),
    pub steps: Vec<SigmaStep<T>>,
    /// `None` when the recursion ends in the BP case.
    pub terminal_base: Option<TerminalBase<T>>,
    pub sigma: T,
}

impl<T: IntScalar> SigmaTrace<T> {
    /// Compact one-line description, e.g. `AE(7,5)>T(1,1)=0`.
    pub fn digest(&self) -> String {
        let mut parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("{}({},{})", s.tag(), s.a, s.b))
            .collect();
        if let Some(base) = &self.terminal_base {
            let tier = match base.provider_tier {
                ProviderTier::Trivial => "T".to_string(),
                ProviderTier::CoprimeDelorme => format!("S{}:delorme", base.kind),
                ProviderTier::Table(p) => format!("S{}:{}", base.kind, p),
            };
            parts.push(format!("{}({},{})={}", tier, base.pair.0, base.pair.1, base.value));
        }
        parts.join(">")
    }
}

/// How a structural walk ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum WalkEnd<T> {
    Base { pair: (T, T), kind: BaseKind },
    Bp,
}

/// The recursion without base values: every step and how it ended.
#[derive(Debug, Clone)]
pub(crate) struct Walk<T: IntScalar> {
    pub steps: Vec<SigmaStep<T>>,
    pub end: WalkEnd<T>,
}

fn quarter_area<T: IntScalar>(a: &T, b: &T) -> Ratio<T> {
    frac((a.clone() - T::of(2)) * (b.clone() - T::of(2)), T::of(4))
}

fn step_a<T: IntScalar>(a: &T, b: &T) -> Result<SigmaStep<T>, SigmaError> {
    let w = bezout_constrained(a, b, BezoutRange::CaseA)?;
    let (u, v) = (w.u, w.v);
    let gamma = (a.clone() - T::one()).div_floor(&u);
    let (case, an, bn, drop) = if gamma.is_even_int() {
        (
            StepCase::AE,
            a.clone() - gamma.clone() * u.clone(),
            b.clone() - gamma.clone() * v.clone(),
            gamma.clone(),
        )
    } else {
        let g1 = gamma.clone() + T::one();
        (
            StepCase::AO,
            g1.clone() * u.clone() - a.clone(),
            g1.clone() * v.clone() - b.clone(),
            g1,
        )
    };
    check_positive(a, b, &an, &bn)?;
    let contribution = quarter_area(a, b) - quarter_area(&an, &bn) - frac(drop, T::of(4));
    Ok(SigmaStep {
        a: a.clone(),
        b: b.clone(),
        case,
        u,
        v,
        gamma_or_alpha: gamma,
        contribution,
        next: Some((an, bn)),
    })
}

fn step_b<T: IntScalar>(a: &T, b: &T) -> Result<SigmaStep<T>, SigmaError> {
    let alpha = gcd(a, b);
    let (ap, bp) = (a.clone() / alpha.clone(), b.clone() / alpha.clone());
    let w = bezout_constrained(&ap, &bp, BezoutRange::CaseB)?;
    let (u, v) = (w.u, w.v);
    let head = quarter_area(a, b) - frac(alpha.clone(), T::of(2));
    if alpha.is_even_int() {
        return Ok(SigmaStep {
            a: a.clone(),
            b: b.clone(),
            case: StepCase::BP,
            u,
            v,
            gamma_or_alpha: alpha,
            contribution: head,
            next: None,
        });
    }
    let an = (ap - T::of(2) * u.clone()).abs();
    let bn = (bp - T::of(2) * v.clone()).abs();
    check_positive(a, b, &an, &bn)?;
    let contribution = head - quarter_area(&an, &bn);
    Ok(SigmaStep {
        a: a.clone(),
        b: b.clone(),
        case: StepCase::BO,
        u,
        v,
        gamma_or_alpha: alpha,
        contribution,
        next: Some((an, bn)),
    })
}

fn check_positive<T: IntScalar>(a: &T, b: &T, an: &T, bn: &T) -> Result<(), SigmaError> {
    if an.is_positive() && bn.is_positive() {
        Ok(())
    } else {
        Err(SigmaError::InvalidStep(format!("({a}, {b}) -> ({an}, {bn})")))
    }
}

/// Runs the recursion from `(a, b)` without resolving the terminal value.
pub(crate) fn walk<T: IntScalar>(a: &T, b: &T) -> Result<Walk<T>, SigmaError> {
    let (mut a, mut b) = normalize(a.clone(), b.clone());
    let mut steps = Vec::new();
    loop {
        if steps.len() > MAX_STEPS {
            return Err(SigmaError::NonTermination(MAX_STEPS));
        }
        let class = classify(&a, &b);
        if let Some(kind) = class.base_kind() {
            return Ok(Walk {
                steps,
                end: WalkEnd::Base { pair: (a, b), kind },
            });
        }
        let step = if class == PairClass::StepA {
            step_a(&a, &b)?
        } else {
            step_b(&a, &b)?
        };
        let next = step.next.clone();
        steps.push(step);
        match next {
            Some((an, bn)) => (a, b) = normalize(an, bn),
            None => return Ok(Walk { steps, end: WalkEnd::Bp }),
        }
    }
}

/// Evaluates `sigma(a, b)` with a full trace.
pub fn sigma<T: IntScalar>(
    a: &T,
    b: &T,
    provider: &BaseCaseProvider<T>,
) -> Result<SigmaTrace<T>, SigmaError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(SigmaError::Domain(format!("sigma needs a, b >= 1, got ({a}, {b})")));
    }
    let Walk { steps, end } = walk(a, b)?;
    let mut total: Ratio<T> = steps
        .iter()
        .fold(Ratio::zero(), |acc, s| acc + s.contribution.clone());
    let terminal_base = match end {
        WalkEnd::Bp => None,
        WalkEnd::Base { pair, kind } => {
            let base = provider.resolve(&pair.0, &pair.1, kind, steps.len())?;
            total = total + Ratio::from_integer(base.value.clone());
            Some(base)
        }
    };
    let sigma = match as_integer(&total) {
        Some(v) if !v.is_negative() => v,
        _ => {
            return Err(SigmaError::Inconsistent(format!(
                "sigma({a}, {b}) accumulated to {total}"
            )))
        }
    };
    Ok(SigmaTrace {
        top: normalize(a.clone(), b.clone()),
        steps,
        terminal_base,
        sigma,
    })
}

/// Terminal pair and its family reached from `(a, b)`, or `None` for a BP
/// ending. Needs no base values.
pub fn terminal_pair<T: IntScalar>(a: &T, b: &T) -> Result<Option<((T, T), BaseKind)>, SigmaError> {
    Ok(match walk(a, b)?.end {
        WalkEnd::Base { pair, kind } => Some((pair, kind)),
        WalkEnd::Bp => None,
    })
}

/// Terminal pairs reached from weights up to `max` that only a table can
/// resolve (non-coprime Sigma endings), restricted to `(a-1)(b-1) <= max_mu`.
/// Sorted and without repeats.
pub fn table_candidates(max: i64, max_mu: i64) -> Result<Vec<(i64, i64)>, SigmaError> {
    let mut out = std::collections::BTreeSet::new();
    for pair in weight_pairs::<i64>(max) {
        let (a, b) = pair.normalized();
        if let Some(((ta, tb), kind)) = terminal_pair(&a, &b)? {
            if kind != BaseKind::Trivial && tb > 2 && gcd(&ta, &tb) != 1 && (ta - 1) * (tb - 1) <= max_mu {
                out.insert((ta, tb));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// `tau_min = (m-1)(n-1) - sigma(m, n)`.
pub fn tau_min_sqh<T: IntScalar>(
    pair: &WeightPair<T>,
    provider: &BaseCaseProvider<T>,
) -> Result<(T, SigmaTrace<T>), SigmaError> {
    let trace = sigma(&pair.m, &pair.n, provider)?;
    let tau = pair.mu() - trace.sigma.clone();
    if !tau.is_positive() {
        return Err(SigmaError::Inconsistent(format!("tau_min for {pair} is {tau}")));
    }
    Ok((tau, trace))
}

/// All weight pairs `2 <= n <= m <= max`, ordered by `(n, m)`.
pub fn weight_pairs<T: IntScalar>(max: i64) -> Vec<WeightPair<T>> {
    let mut out = Vec::new();
    for n in 2..=max {
        for m in n..=max {
            out.push(WeightPair { n: T::of(n), m: T::of(m) });
        }
    }
    out
}
