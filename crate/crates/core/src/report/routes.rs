//! One `BoundReport` per route.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::{bound_verdict, exact_verdict, BoundReport, Route, TauSource, Verdict};
use crate::branch_moduli::{branch_invariants, BranchError, CharPair};
use crate::families::{lp_invariants, lp_semigroup, FamilyError, LpMember};
use crate::oracle::{tau_min_estimate, DeformationSpec, OracleError, ScalarDomain};
use crate::sqh::{
    kappa, prop2_lower_bound, ratio_bound_sqh, tau_min_sqh, BaseCaseProvider, BoundConditions, SigmaError,
    WeightPair,
};
use crate::{Int, Rational};

#[derive(Debug, Error)]
pub enum RouteError {
    /// The input is outside the route's domain.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<BranchError> for RouteError {
    fn from(e: BranchError) -> Self {
        RouteError::Input(e.to_string())
    }
}

impl From<FamilyError> for RouteError {
    fn from(e: FamilyError) -> Self {
        RouteError::Input(e.to_string())
    }
}

fn blank(n: Int, m: Int, route: Route, mu: Int) -> BoundReport {
    BoundReport {
        n,
        m,
        route,
        mu,
        tau_min: None,
        q: None,
        tau_minus: None,
        sigma: None,
        kappa: None,
        lower_bound: None,
        conditions: None,
        ratio: None,
        verdict: Verdict::Unavailable,
        tau_source: TauSource::None,
        trace_digest: String::new(),
        reason: None,
        family: None,
    }
}

/// Generic branch with characteristic pair `(n, m)`, through `q`.
pub fn delorme_report(n: &Int, m: &Int) -> Result<BoundReport, RouteError> {
    let pair = CharPair::new(n.clone(), m.clone())?;
    let mut row = blank(n.clone(), m.clone(), Route::Delorme, pair.mu());
    match branch_invariants(&pair) {
        Ok(inv) => {
            row.verdict = exact_verdict(&inv.ratio);
            row.tau_min = Some(inv.tau_min);
            row.q = Some(inv.q);
            row.tau_minus = Some(inv.tau_minus);
            row.ratio = Some(inv.ratio);
            row.tau_source = TauSource::Delorme;
            row.trace_digest = match &inv.trace {
                Some(t) => t.digest(),
                None => "cusp".into(),
            };
        }
        Err(e) => row.reason = Some(e.to_string()),
    }
    Ok(row)
}

/// Semi-quasi-homogeneous class with weights `(n, m)`, through `sigma`.
///
/// When the terminal base value is missing and `bound_only` is set, the row
/// is settled by the kappa lower bound instead.
pub fn bgm_report(
    n: &Int,
    m: &Int,
    provider: &BaseCaseProvider<Int>,
    bound_only: bool,
) -> Result<BoundReport, RouteError> {
    let pair = WeightPair::new(n.clone(), m.clone()).map_err(|e| RouteError::Input(e.to_string()))?;
    let mut row = blank(n.clone(), m.clone(), Route::Bgm, pair.mu());
    let class = match kappa(&pair) {
        Ok(k) => k,
        Err(e) => {
            row.reason = Some(e.to_string());
            return Ok(row);
        }
    };
    row.conditions = Some(BoundConditions::evaluate(&pair, &class.kappa));
    row.kappa = Some(class.kappa.clone());
    row.lower_bound = prop2_lower_bound(&pair).ok();
    match tau_min_sqh(&pair, provider) {
        Ok((tau, trace)) => {
            let ratio = Rational::new(pair.mu(), tau.clone());
            row.verdict = exact_verdict(&ratio);
            row.tau_min = Some(tau);
            row.sigma = Some(trace.sigma.clone());
            row.ratio = Some(ratio);
            row.tau_source = TauSource::Sigma;
            row.trace_digest = trace.digest();
        }
        Err(e @ SigmaError::BaseCaseUnavailable { .. }) if bound_only => match ratio_bound_sqh(&pair) {
            Ok(bound) => {
                row.verdict = bound_verdict(&bound);
                if row.verdict == Verdict::Unavailable {
                    row.reason = Some(format!("{e}; kappa bound {bound} is not below 4/3"));
                }
                row.ratio = Some(bound);
                row.tau_source = TauSource::Prop2LowerBound;
                row.trace_digest = kappa_digest(&class);
            }
            Err(b) => row.reason = Some(format!("{e}; {b}")),
        },
        Err(e) => {
            row.reason = Some(e.to_string());
            row.trace_digest = kappa_digest(&class);
        }
    }
    Ok(row)
}

fn kappa_digest(class: &crate::sqh::KappaClass<Int>) -> String {
    match &class.terminal {
        Some((a, b)) => format!("kappa={};ending={:?};terminal=({a},{b})", class.kappa, class.ending),
        None => format!("kappa={};ending={:?}", class.kappa, class.ending),
    }
}

/// Minimal Tjurina number of `y^n - x^m` plus generic terms above the weight
/// line, estimated by sampling.
pub fn oracle_report(n: &Int, m: &Int, samples: usize, seed: u64) -> Result<BoundReport, RouteError> {
    let (nn, mm) = match (n.to_u32(), m.to_u32()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(RouteError::Input(format!("weights ({n}, {m}) out of range"))),
    };
    let spec = DeformationSpec::new(nn, mm, samples, seed)?;
    let domain = ScalarDomain::random_prime(seed);
    let est = tau_min_estimate(&spec, domain)?;
    let mu: Int = (n - 1u32) * (m - 1u32);
    let tau = BigInt::from(est.value);
    let ratio = Rational::new(mu.clone(), tau.clone());
    let mut row = blank(n.clone(), m.clone(), Route::Oracle, mu);
    row.verdict = exact_verdict(&ratio);
    row.tau_min = Some(tau);
    row.ratio = Some(ratio);
    row.tau_source = TauSource::Oracle;
    let field = match domain {
        ScalarDomain::PrimeField(p) => format!("p={p}"),
        ScalarDomain::Rational => "Q".into(),
    };
    row.trace_digest = format!(
        "{field};samples={};hits={};order={}{}",
        spec.samples,
        est.hits,
        est.witness_colength.truncation_order,
        if est.weak_genericity { ";weak" } else { "" }
    );
    Ok(row)
}

/// Closed-form family member `<2p, 2q, 2pq + d>`; `n`, `m` carry `p`, `q`.
pub fn lp_report(p: &Int, q: &Int, d: &Int) -> Result<BoundReport, RouteError> {
    let member = LpMember::new(p.clone(), q.clone(), d.clone())?;
    let inv = lp_invariants(&member);
    let (g0, g1, g2) = lp_semigroup(&member);
    let mut row = blank(p.clone(), q.clone(), Route::LPFamily, inv.mu);
    row.verdict = exact_verdict(&inv.ratio);
    row.tau_min = Some(inv.tau);
    row.ratio = Some(inv.ratio);
    row.tau_source = TauSource::ClosedForm;
    row.trace_digest = format!("d={d};semigroup=<{g0},{g1},{g2}>");
    row.family = Some((p.clone(), q.clone(), d.clone()));
    Ok(row)
}
