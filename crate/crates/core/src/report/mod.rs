//! Per-pair verdict rows, range scans and their CSV/JSON rendering.
//!
//! Every verdict compares an exact rational against 4/3; the decimal column
//! is informational.

mod output;
mod routes;
mod scan;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::sqh::BoundConditions;
use crate::{Int, Rational};

pub use output::{write_crosscheck_csv, write_csv, write_json, CSV_HEADER};
pub use routes::{bgm_report, delorme_report, lp_report, oracle_report, RouteError};
pub use scan::{
    crosscheck, lp_sweep, scan_bgm, scan_delorme, summarize, CrossRow, CrossStatus, CrosscheckOptions,
    CrosscheckSummary, ScanOptions,
    with_jobs,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    Delorme,
    #[serde(rename = "BGM")]
    Bgm,
    Oracle,
    LPFamily,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Delorme => "Delorme",
            Route::Bgm => "BGM",
            Route::Oracle => "Oracle",
            Route::LPFamily => "LPFamily",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Violated,
    Unavailable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "Holds",
            Verdict::Violated => "Violated",
            Verdict::Unavailable => "Unavailable",
        })
    }
}

/// Where the `tau_min` of a row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauSource {
    Delorme,
    Sigma,
    /// Only the lower bound is known; `ratio` is then an upper bound.
    Prop2LowerBound,
    Oracle,
    ClosedForm,
    None,
}

/// One verdict row.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: Int,
    pub m: Int,
    pub route: Route,
    pub mu: Int,
    pub tau_min: Option<Int>,
    pub q: Option<Int>,
    pub tau_minus: Option<Int>,
    pub sigma: Option<Int>,
    pub kappa: Option<Rational>,
    pub lower_bound: Option<Rational>,
    pub conditions: Option<BoundConditions>,
    /// `mu / tau_min`, or its upper bound on lower-bound rows.
    pub ratio: Option<Rational>,
    pub verdict: Verdict,
    pub tau_source: TauSource,
    pub trace_digest: String,
    /// Why the row is `Unavailable`.
    pub reason: Option<String>,
    /// `(p, q, d)` for family rows.
    pub family: Option<(Int, Int, Int)>,
}

impl BoundReport {
    pub fn pair(&self) -> (Int, Int) {
        (self.n.clone(), self.m.clone())
    }

    pub fn ratio_decimal(&self) -> Option<String> {
        self.ratio.as_ref().map(|r| decimal(r, DECIMAL_DIGITS))
    }

    /// True when `ratio` is the exact `mu / tau`.
    pub fn is_exact(&self) -> bool {
        self.ratio.is_some() && !matches!(self.tau_source, TauSource::Prop2LowerBound | TauSource::None)
    }
}

pub const DECIMAL_DIGITS: usize = 15;

pub fn four_thirds() -> Rational {
    Rational::new(BigInt::from(4), BigInt::from(3))
}

/// Verdict for an exact ratio.
pub fn exact_verdict(ratio: &Rational) -> Verdict {
    if *ratio < four_thirds() {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// Verdict for an upper bound of the ratio: a bound at or above 4/3 proves
/// nothing either way.
pub fn bound_verdict(bound: &Rational) -> Verdict {
    if *bound < four_thirds() {
        Verdict::Holds
    } else {
        Verdict::Unavailable
    }
}

/// `r` with `digits` fractional digits, rounded half to even.
pub fn decimal(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let (num, den) = (r.numer().abs(), r.denom().clone());
    let scale = BigInt::from(10u32).pow(digits as u32);
    let (mut q, rem) = (num * &scale).div_rem(&den);
    let twice = rem * 2u32;
    if twice > den || (twice == den && q.is_odd()) {
        q += 1u32;
    }
    let (int, fracpart) = q.div_rem(&scale);
    let mut s = String::new();
    if neg && !(int.is_zero() && fracpart.is_zero()) {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", fracpart.to_string(), width = digits));
    }
    s
}

/// Aggregate of a batch of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub range: String,
    pub count: usize,
    /// Largest exact ratio and the first pair attaining it.
    pub max_ratio: Option<(Rational, (Int, Int))>,
    pub violations: Vec<(Int, Int)>,
    pub unavailable: Vec<((Int, Int), String)>,
    /// Rows settled through the lower bound only.
    pub bound_only: usize,
}

impl ScanSummary {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "range: {}", self.range)?;
        writeln!(f, "count: {}", self.count)?;
        match &self.max_ratio {
            Some((r, (n, m))) => writeln!(f, "max_ratio: {r} ({}) at ({n}, {m})", decimal(r, DECIMAL_DIGITS))?,
            None => writeln!(f, "max_ratio: none")?,
        }
        writeln!(f, "bound_only: {}", self.bound_only)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for (n, m) in &self.violations {
            writeln!(f, "  ({n}, {m})")?;
        }
        writeln!(f, "unavailable: {}", self.unavailable.len())?;
        for ((n, m), why) in &self.unavailable {
            writeln!(f, "  ({n}, {m}): {why}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&r(70, 57), 15), "1.228070175438596");
        assert_eq!(decimal(&r(1, 1), 15), "1.000000000000000");
        assert_eq!(decimal(&r(4, 3), 3), "1.333");
        assert_eq!(decimal(&r(2, 3), 3), "0.667");
        // exact ties go to the even neighbour
        assert_eq!(decimal(&r(1, 8), 2), "0.12");
        assert_eq!(decimal(&r(3, 8), 2), "0.38");
        assert_eq!(decimal(&r(-1, 8), 2), "-0.12");
        assert_eq!(decimal(&r(5, 2), 0), "2");
    }

    #[test]
    fn verdicts_are_exact() {
        assert_eq!(exact_verdict(&r(70, 57)), Verdict::Holds);
        assert_eq!(exact_verdict(&r(4, 3)), Verdict::Violated);
        assert_eq!(bound_verdict(&r(4, 3)), Verdict::Unavailable);
        // either side of 4/3
        assert_eq!(exact_verdict(&r(400_000_000_001, 300_000_000_000)), Verdict::Violated);
        assert_eq!(exact_verdict(&r(399_999_999_999, 300_000_000_000)), Verdict::Holds);
    }
}
