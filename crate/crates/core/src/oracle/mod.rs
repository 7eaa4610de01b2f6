//! Independent ground truth: Milnor and Tjurina numbers of explicit germs as
//! colengths of the Jacobian and Tjurina ideals in `C{x, y}`.

mod colength;
mod deform;
mod field;
mod poly;

use thiserror::Error;

pub use colength::{local_colength, ColengthOptions, ColengthResult};
pub use deform::{
    build_sigma_table, tau_min_estimate, DeformationSpec, TauMinEstimate, DEFAULT_COEFFICIENT_BOUND,
    DEFAULT_SAMPLES,
};
pub use field::{PrimeField, Rationals, ScalarDomain, ScalarField};
pub use poly::{LocalPolynomial, Variable};

/// Order cap used when the germ has no known weights.
pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("colength did not stabilize up to order {max_order} (history {history:?})")]
    NoStabilization {
        max_order: usize,
        history: Vec<(usize, usize)>,
    },
    #[error("coefficient has no image modulo {prime}")]
    UnreducibleCoefficient { prime: u64 },
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Colength of `(df/dx, df/dy)`.
pub fn milnor_with(f: &LocalPolynomial, opts: &ColengthOptions) -> Result<ColengthResult, OracleError> {
    local_colength(
        &[f.partial_derivative(Variable::X), f.partial_derivative(Variable::Y)],
        opts,
    )
}

/// Colength of `(f, df/dx, df/dy)`.
pub fn tjurina_with(f: &LocalPolynomial, opts: &ColengthOptions) -> Result<ColengthResult, OracleError> {
    local_colength(
        &[
            f.clone(),
            f.partial_derivative(Variable::X),
            f.partial_derivative(Variable::Y),
        ],
        opts,
    )
}

/// Milnor number over the default prime field with the default order cap.
pub fn milnor(f: &LocalPolynomial) -> Result<usize, OracleError> {
    milnor_with(f, &ColengthOptions::general(DEFAULT_MAX_ORDER, ScalarDomain::default())).map(|r| r.value)
}

/// Tjurina number over the default prime field with the default order cap.
pub fn tjurina(f: &LocalPolynomial) -> Result<usize, OracleError> {
    tjurina_with(f, &ColengthOptions::general(DEFAULT_MAX_ORDER, ScalarDomain::default())).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weighted(n: u32, m: u32, domain: ScalarDomain) -> ColengthOptions {
        ColengthOptions::for_weights(n, m, domain)
    }

    #[test]
    fn cusp() {
        let f = LocalPolynomial::initial_term(2, 3);
        assert_eq!(milnor(&f).unwrap(), 2);
        assert_eq!(tjurina(&f).unwrap(), 2);
    }

    #[test]
    fn milnor_examples() {
        let f = LocalPolynomial::initial_term(4, 5).with_term(3, 2, 1);
        for domain in [ScalarDomain::Rational, ScalarDomain::default()] {
            assert_eq!(milnor_with(&f, &weighted(4, 5, domain)).unwrap().value, 12);
            assert_eq!(milnor_with(&f, &ColengthOptions::general(30, domain)).unwrap().value, 12);
        }
        let g = LocalPolynomial::initial_term(6, 14);
        assert_eq!(milnor_with(&g, &weighted(6, 14, ScalarDomain::default())).unwrap().value, 65);
    }

    #[test]
    fn tjurina_drops_under_generic_deformation() {
        let f = LocalPolynomial::initial_term(4, 5).with_term(3, 2, 1);
        assert_eq!(tjurina_with(&f, &weighted(4, 5, ScalarDomain::Rational)).unwrap().value, 11);
    }

    #[test]
    fn quasi_homogeneous_tau_equals_mu() {
        for (n, m) in [(2, 3), (3, 4), (3, 3), (4, 6), (5, 7)] {
            let f = LocalPolynomial::initial_term(n, m);
            let opts = weighted(n, m, ScalarDomain::default());
            let mu = milnor_with(&f, &opts).unwrap().value;
            let tau = tjurina_with(&f, &opts).unwrap().value;
            assert_eq!(mu, tau);
            assert_eq!(mu as u32, (n - 1) * (m - 1));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        // Small random deformations of y^n - x^m: tau <= mu, and the prime
        // field agrees with the rationals.
        #[test]
        fn tau_below_mu_and_domains_agree(
            n in 2u32..5,
            m in 3u32..7,
            coeffs in proptest::collection::vec(-9i64..=9, 12),
            seed in 0u64..1000,
        ) {
            let mut f = LocalPolynomial::initial_term(n, m);
            for (k, &(i, j)) in DeformationSpec::default_support(n, m).iter().enumerate() {
                f = f.with_term(i, j, coeffs[k % coeffs.len()]);
            }
            let q = weighted(n, m, ScalarDomain::Rational);
            let p = weighted(n, m, ScalarDomain::random_prime(seed));
            let mu_q = milnor_with(&f, &q).unwrap().value;
            let tau_q = tjurina_with(&f, &q).unwrap().value;
            prop_assert!(tau_q <= mu_q);
            prop_assert_eq!(mu_q as u32, (n - 1) * (m - 1));
            prop_assert_eq!(tjurina_with(&f, &p).unwrap().value, tau_q);
            prop_assert_eq!(milnor_with(&f, &p).unwrap().value, mu_q);
        }
    }
}
