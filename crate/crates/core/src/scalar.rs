use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;

/// Numeric type used for measures, test functions and energies.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact, so comparisons use equality instead of a tolerance.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Equality for exact types, `|a - b| <= tol` otherwise.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).abs().as_f64() <= tol
        }
    }

    /// Weights below this value may be moved to a defect bucket. `None` disables pruning.
    fn prune_threshold() -> Option<Self> {
        None
    }

    fn pow_p(&self, p: u8) -> Self {
        match p {
            1 => self.abs(),
            _ => self.clone() * self.clone(),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn prune_threshold() -> Option<Self> {
        Some(1e-15)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
    fn prune_threshold() -> Option<Self> {
        Some(1e-12)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Natural log of `n!`, exact summation of logs.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `n!` when it fits in a `u128` (`n <= 34`).
pub fn factorial(n: u64) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

/// Log-space comparison `exp(lhs_ln) <= exp(rhs_ln)` with a small relative slack.
pub fn factorial_le(lhs_ln: f64, rhs_ln: f64) -> bool {
    lhs_ln <= rhs_ln + 1e-9 * rhs_ln.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip() {
        let q = Rational::from_ratio(6, 8);
        assert_eq!(q, Rational::from_ratio(3, 4));
        assert!((q.as_f64() - 0.75).abs() < 1e-15);
        assert!(q.close_to(&Rational::from_ratio(3, 4), 0.0));
        assert!(!q.close_to(&Rational::from_ratio(3, 5), 1.0));
    }

    #[test]
    fn float_tolerance() {
        assert!(0.1f64.close_to(&(0.3 - 0.2), 1e-12));
        assert_eq!(2.0f64.pow_p(2), 4.0);
        assert_eq!((-2.0f64).pow_p(1), 2.0);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(5), Some(120));
        assert_eq!(factorial(20), Some(2432902008176640000));
        assert!((ln_factorial(10) - (3628800f64).ln()).abs() < 1e-9);
        assert!(factorial_le(ln_factorial(5), ln_factorial(6)));
        assert!(!factorial_le(ln_factorial(7), ln_factorial(6)));
    }
}
