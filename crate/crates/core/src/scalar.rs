//! Integer scalar abstraction shared by every formula route.
//!
//! All closed forms and recursions are written once against [`IntScalar`]
//! and instantiated either with [`num_bigint::BigInt`] (the default, used by
//! the reports and the CLI) or with a machine integer such as `i64` where a
//! brute-force enumeration needs raw speed.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait IntScalar:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lift a small literal. Every literal used by the formulas fits in `i64`.
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("literal out of range for scalar type")
    }

    fn is_even_int(&self) -> bool {
        Integer::is_even(self)
    }
}

impl<T> IntScalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// `num / den` as an exact rational.
pub(crate) fn frac<T: IntScalar>(num: T, den: T) -> Ratio<T> {
    Ratio::new(num, den)
}

pub(crate) fn whole<T: IntScalar>(v: T) -> Ratio<T> {
    Ratio::from_integer(v)
}

/// Returns the integer value of `r` if it is one.
pub(crate) fn as_integer<T: IntScalar>(r: &Ratio<T>) -> Option<T> {
    if r.is_integer() {
        Some(r.to_integer())
    } else {
        None
    }
}
