//! Exact scalar fields the linear algebra is generic over.
//!
//! Every subspace comparison in this crate is an equality of reduced row
//! echelon matrices, so only exact fields are admitted. The provided
//! implementations are `Ratio<i64>`, `Ratio<i128>` and `BigRational`;
//! machine-width ratios panic on overflow in debug builds.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive};

/// An exact ordered field with enough integer plumbing for lattice work.
pub trait Field:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Greatest integer not exceeding `self`.
    fn floor_i64(&self) -> i64;

    /// Least integer not below `self`.
    fn ceil_i64(&self) -> i64;

    fn to_big(&self) -> BigRational;

    /// `None` when the value does not fit the representation.
    fn from_big(q: &BigRational) -> Option<Self>;

    fn is_integer(&self) -> bool {
        let q = self.to_big();
        q.denom().is_one()
    }

    /// The value as an `i64`, when it is an integer in range.
    fn to_i64(&self) -> Option<i64> {
        let q = self.to_big();
        if q.denom().is_one() {
            q.numer().to_i64()
        } else {
            None
        }
    }

    /// Parse an integer or `p/q` literal. A leading `-` (or U+2212) is allowed on `p`.
    fn parse(text: &str) -> Option<Self> {
        let text = text.trim().replace('\u{2212}', "-");
        let (num, den) = match text.split_once('/') {
            Some((p, q)) => (p.trim().to_string(), q.trim().to_string()),
            None => (text.clone(), "1".to_string()),
        };
        let p: BigInt = num.parse().ok()?;
        let q: BigInt = den.parse().ok()?;
        if !q.is_positive() {
            return None;
        }
        Self::from_big(&BigRational::new(p, q))
    }
}

macro_rules! machine_ratio_field {
    ($int:ty) => {
        impl Field for Ratio<$int> {
            fn from_i64(n: i64) -> Self {
                Ratio::from_integer(<$int>::from(n))
            }

            fn floor_i64(&self) -> i64 {
                self.floor().to_integer().to_i64().expect("floor out of i64 range")
            }

            fn ceil_i64(&self) -> i64 {
                self.ceil().to_integer().to_i64().expect("ceil out of i64 range")
            }

            fn to_big(&self) -> BigRational {
                BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn from_big(q: &BigRational) -> Option<Self> {
                let n: $int = num_traits::ToPrimitive::to_i128(q.numer())?.try_into().ok()?;
                let d: $int = num_traits::ToPrimitive::to_i128(q.denom())?.try_into().ok()?;
                Some(Ratio::new(n, d))
            }
        }
    };
}

machine_ratio_field!(i64);
machine_ratio_field!(i128);

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn floor_i64(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor out of i64 range")
    }

    fn ceil_i64(&self) -> i64 {
        self.ceil().to_integer().to_i64().expect("ceil out of i64 range")
    }

    fn to_big(&self) -> BigRational {
        self.clone()
    }

    fn from_big(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
}

/// Integer pairing between a character and a lattice vector.
pub fn pairing(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn to_field<F: Field>(v: &[i64]) -> Vec<F> {
    v.iter().map(|&x| F::from_i64(x)).collect()
}

pub(crate) fn zero_vec<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(BigRational::parse("3"), Some(BigRational::from_i64(3)));
        let q = BigRational::parse("-6/4").unwrap();
        assert_eq!(q, BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert_eq!(Ratio::<i64>::parse("\u{2212}1/2"), Some(Ratio::new(-1, 2)));
        assert_eq!(BigRational::parse("1/0"), None);
        assert_eq!(BigRational::parse("1/-2"), None);
        assert_eq!(BigRational::parse("x"), None);
    }

    #[test]
    fn floor_and_ceil_round_toward_the_right_side() {
        let q = Ratio::<i64>::new(-7, 2);
        assert_eq!(q.floor_i64(), -4);
        assert_eq!(q.ceil_i64(), -3);
        let b = BigRational::from_i64(5);
        assert_eq!(b.floor_i64(), 5);
        assert_eq!(b.ceil_i64(), 5);
        assert_eq!(Field::to_i64(&b), Some(5));
        assert_eq!(Field::to_i64(&q), None);
    }

    #[test]
    fn big_conversion_round_trips_and_rejects_overflow() {
        let q = Ratio::<i128>::new(5, 3);
        assert_eq!(Ratio::<i128>::from_big(&q.to_big()), Some(q));
        let huge = BigRational::from_integer(BigInt::from(i64::MAX) * 4);
        assert_eq!(Ratio::<i64>::from_big(&huge), None);
    }
}
