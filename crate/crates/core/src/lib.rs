//! Exact Milnor and Tjurina invariants of isolated plane curve singularities.
//!
//! Three independent routes compute the minimal Tjurina number of a
//! singularity class:
//!
//! * [`branch_moduli`]: one characteristic pair, via the dimension of the
//!   generic component of the moduli space;
//! * [`sqh`]: semi-quasi-homogeneous germs `y^n - x^m + ...`, via the
//!   `sigma(a, b)` recursion;
//! * [`oracle`]: brute-force colength of the Jacobian and Tjurina ideals of
//!   explicit polynomials, sampled over random generic deformations.
//!
//! [`families`] adds a two-pair family with closed forms, and [`report`]
//! drives range scans that check `mu / tau < 4/3` with exact rationals.
//!
//! Formula routes are generic over [`IntScalar`]; the aliases below fix the
//! arbitrary-precision instantiation used by reports and the CLI.

pub mod branch_moduli;
pub mod families;
pub mod numtheory;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod sqh;

pub use scalar::IntScalar;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Arbitrary-precision integer used by the default instantiations.
pub type Int = BigInt;
/// Exact rational over [`Int`].
pub type Rational = BigRational;

pub type CharPair = branch_moduli::CharPair<Int>;
pub type BranchInvariants = branch_moduli::BranchInvariants<Int>;
pub type WeightPair = sqh::WeightPair<Int>;
pub type SigmaTrace = sqh::SigmaTrace<Int>;
pub type BaseCaseProvider = sqh::BaseCaseProvider<Int>;
pub type LpMember = families::LpMember<Int>;

/// Machine-word instantiations for enumeration-heavy checks.
pub mod small {
    pub type CharPair = crate::branch_moduli::CharPair<i64>;
    pub type WeightPair = crate::sqh::WeightPair<i64>;
    pub type BaseCaseProvider = crate::sqh::BaseCaseProvider<i64>;
}
