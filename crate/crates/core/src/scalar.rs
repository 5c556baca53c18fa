//! Coefficient abstraction.
//!
//! The whole algebra layer is generic over the scalar ring; the decision
//! procedures need an exact field, which the crate-root aliases pin to
//! arbitrary-precision rationals. f32/f64 satisfy the bound for the
//! generic layer.

use num_traits::{FromPrimitive, Signed};
use std::fmt::{Debug, Display};
use std::str::FromStr;

pub trait Scalar:
    Signed + Clone + PartialEq + Debug + Display + FromStr + FromPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Signed + Clone + PartialEq + Debug + Display + FromStr + FromPrimitive + Send + Sync + 'static
{
}

/// Exact fraction n/d lifted into the scalar type.
pub fn ratio<C: Scalar>(n: i64, d: i64) -> C {
    assert!(d != 0, "zero denominator");
    C::from_i64(n).expect("scalar from i64") / C::from_i64(d).expect("scalar from i64")
}

pub fn int<C: Scalar>(n: i64) -> C {
    C::from_i64(n).expect("scalar from i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn ratio_is_exact_for_rationals() {
        let half: BigRational = ratio(1, 2);
        let third: BigRational = ratio(1, 3);
        assert_eq!(half + third, ratio::<BigRational>(5, 6));
    }

    #[test]
    fn floats_satisfy_the_bound() {
        fn sum<C: Scalar>(a: C, b: C) -> C {
            a + b
        }
        assert_eq!(sum(1.5f64, 2.5f64), 4.0);
        assert_eq!(sum(1.5f32, 2.5f32), 4.0);
    }
}
