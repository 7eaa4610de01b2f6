//! Estimates of `tau_min` by sampling random deformations `y^n - x^m + g`
//! with `g` supported strictly above the weight line.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::colength::{ColengthOptions, ColengthResult};
use super::field::ScalarDomain;
use super::poly::LocalPolynomial;
use super::{tjurina_with, OracleError};
use crate::scalar::IntScalar;
use crate::sqh::{Provenance, SigmaTable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationSpec {
    pub n: u32,
    pub m: u32,
    /// Exponents `(i, j)` of the deformation monomials `x^i y^j`.
    pub support: Vec<(u32, u32)>,
    pub coefficient_bound: u64,
    pub samples: usize,
    pub seed: u64,
}

pub const DEFAULT_SAMPLES: usize = 8;
pub const DEFAULT_COEFFICIENT_BOUND: u64 = 1000;

impl DeformationSpec {
    /// Default support: `i <= m-2`, `j <= n-2`, `i*n + j*m > n*m`.
    pub fn new(n: u32, m: u32, samples: usize, seed: u64) -> Result<Self, OracleError> {
        if n < 2 || m < 2 {
            return Err(OracleError::Invalid(format!("weights must be >= 2, got ({n}, {m})")));
        }
        if samples == 0 {
            return Err(OracleError::Invalid("need at least one sample".into()));
        }
        let support = Self::default_support(n, m);
        Ok(Self {
            n,
            m,
            support,
            coefficient_bound: DEFAULT_COEFFICIENT_BOUND,
            samples,
            seed,
        })
    }

    pub fn default_support(n: u32, m: u32) -> Vec<(u32, u32)> {
        let weight = n as u64 * m as u64;
        let mut out = Vec::new();
        for i in 0..=m.saturating_sub(2) {
            for j in 0..=n.saturating_sub(2) {
                if i as u64 * n as u64 + j as u64 * m as u64 > weight {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Every support monomial has weighted degree above `n*m`.
    pub fn is_above_weight_line(&self) -> bool {
        let weight = self.n as u64 * self.m as u64;
        self.support
            .iter()
            .all(|&(i, j)| i as u64 * self.n as u64 + j as u64 * self.m as u64 > weight)
    }

    /// Deformation for sample `index`; its RNG stream depends only on the
    /// seed and the index.
    pub fn sample(&self, index: usize) -> LocalPolynomial {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let bound = self.coefficient_bound.max(1) as i64;
        let mut f = LocalPolynomial::initial_term(self.n, self.m);
        for &(i, j) in &self.support {
            let draw = rng.random_range(1..=2 * bound);
            let c = if draw > bound { bound - draw } else { draw };
            f.add_term(i, j, BigRational::from_integer(BigInt::from(c)));
        }
        f
    }

    fn colength_options(&self, domain: ScalarDomain) -> ColengthOptions {
        ColengthOptions::for_weights(self.n, self.m, domain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauMinEstimate {
    pub value: usize,
    pub witness: LocalPolynomial,
    pub witness_index: usize,
    /// Number of samples attaining the minimum.
    pub hits: usize,
    /// Set when fewer than two samples attain the minimum.
    pub weak_genericity: bool,
    pub per_sample: Vec<usize>,
    pub domain: ScalarDomain,
    /// Colength diagnostics of the witness.
    pub witness_colength: ColengthResult,
}

/// Minimum Tjurina number over `spec.samples` random deformations.
pub fn tau_min_estimate(spec: &DeformationSpec, domain: ScalarDomain) -> Result<TauMinEstimate, OracleError> {
    if !spec.is_above_weight_line() {
        return Err(OracleError::Invalid("support meets or lies below the weight line".into()));
    }
    let opts = spec.colength_options(domain);
    let results: Vec<(LocalPolynomial, ColengthResult)> = (0..spec.samples)
        .into_par_iter()
        .map(|idx| {
            let f = spec.sample(idx);
            tjurina_with(&f, &opts).map(|res| (f, res))
        })
        .collect::<Result<_, _>>()?;
    let per_sample: Vec<usize> = results.iter().map(|(_, r)| r.value).collect();
    let value = *per_sample.iter().min().expect("at least one sample");
    let witness_index = per_sample.iter().position(|&v| v == value).expect("minimum present");
    let hits = per_sample.iter().filter(|&&v| v == value).count();
    let (witness, witness_colength) = results.into_iter().nth(witness_index).expect("index in range");
    Ok(TauMinEstimate {
        value,
        witness,
        witness_index,
        hits,
        weak_genericity: hits < 2,
        per_sample,
        domain,
        witness_colength,
    })
}

/// Oracle values `sigma(a, b) = (a-1)(b-1) - tau_min` for initial terms
/// `y^b - x^a`, with provenance `oracle`.
pub fn build_sigma_table<T: IntScalar>(
    pairs: &[(u32, u32)],
    samples: usize,
    seed: u64,
    domain: ScalarDomain,
) -> Result<SigmaTable<T>, OracleError> {
    let values: Vec<(u32, u32, i64)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let spec = DeformationSpec::new(b, a, samples, seed)?;
            let est = tau_min_estimate(&spec, domain)?;
            let mu = (a as i64 - 1) * (b as i64 - 1);
            Ok((a, b, mu - est.value as i64))
        })
        .collect::<Result<_, OracleError>>()?;
    let mut table = SigmaTable::new();
    for (a, b, sigma) in values {
        table.insert(T::of(a as i64), T::of(b as i64), T::of(sigma), Provenance::Oracle);
    }
    Ok(table)
}
