//! Fixed-point decimals with a certified truncation bound, used for energies
//! with non-integer exponents.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A non-negative value known to lie in `[scaled, scaled + slack) * 10^-digits`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decimal {
    scaled: BigUint,
    digits: u32,
    slack: u64,
}

impl Decimal {
    pub fn zero(digits: u32) -> Self {
        Decimal {
            scaled: BigUint::zero(),
            digits,
            slack: 0,
        }
    }

    /// `floor(base^alpha * 10^digits)` for a non-negative integer base and a
    /// positive rational exponent.
    pub fn power(base: u64, alpha: &Rational, digits: u32) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::domain("exponent must be positive"));
        }
        let p = alpha
            .numer()
            .to_u32()
            .ok_or_else(|| Error::domain("exponent numerator too large"))?;
        let q = alpha
            .denom()
            .to_u32()
            .ok_or_else(|| Error::domain("exponent denominator too large"))?;
        let radicand = BigUint::from(base).pow(p) * BigUint::from(10u32).pow(q * digits);
        let root = radicand.nth_root(q);
        let exact = root.pow(q) == radicand;
        Ok(Decimal {
            scaled: root,
            digits,
            slack: if exact { 0 } else { 1 },
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Upper bound on `true value - displayed value`.
    pub fn error_bound(&self) -> f64 {
        self.slack as f64 * 10f64.powi(-(self.digits as i32))
    }

    pub fn is_exact(&self) -> bool {
        self.slack == 0
    }

    /// Integer value, when exact and integral.
    pub fn to_integer(&self) -> Option<BigUint> {
        let unit = BigUint::from(10u32).pow(self.digits);
        (self.is_exact() && (&self.scaled % &unit).is_zero()).then(|| &self.scaled / &unit)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    pub fn checked_add(&self, other: &Decimal) -> Result<Decimal> {
        if self.digits != other.digits {
            return Err(Error::domain("decimal precision mismatch"));
        }
        Ok(Decimal {
            scaled: &self.scaled + &other.scaled,
            digits: self.digits,
            slack: self.slack + other.slack,
        })
    }
}

impl std::iter::Sum for Decimal {
    fn sum<I: Iterator<Item = Decimal>>(iter: I) -> Self {
        let mut acc: Option<Decimal> = None;
        for d in iter {
            acc = Some(match acc {
                None => d,
                Some(a) => a.checked_add(&d).expect("mixed precision in sum"),
            });
        }
        acc.unwrap_or_else(|| Decimal::zero(0))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits == 0 {
            return write!(f, "{}", self.scaled);
        }
        let unit = BigUint::from(10u32).pow(self.digits);
        let int = &self.scaled / &unit;
        let frac = &self.scaled % &unit;
        write!(f, "{int}.{frac:0>width$}", width = self.digits as usize)
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn integer_powers_are_exact() {
        let d = Decimal::power(3, &q("2"), 5).unwrap();
        assert_eq!(d.to_string(), "9.00000");
        assert!(d.is_exact());
        assert_eq!(d.to_integer(), Some(BigUint::from(9u32)));
        let d = Decimal::power(4, &q("3/2"), 10).unwrap();
        assert_eq!(d.to_integer(), Some(BigUint::from(8u32)));
    }

    #[test]
    fn irrational_power_truncates() {
        let d = Decimal::power(2, &q("3/2"), 30).unwrap();
        // 2^{3/2} = 2.828427124746190097603377448419...
        assert_eq!(d.to_string(), "2.828427124746190097603377448419");
        assert!(!d.is_exact());
        assert!(d.error_bound() <= 1e-30);
    }

    #[test]
    fn sums_accumulate_slack() {
        let terms = (1..=4).map(|r| Decimal::power(r, &q("3/2"), 40).unwrap());
        let s: Decimal = terms.sum();
        // 1 + 2.828.. + 5.196.. + 8 ; two inexact terms
        assert!((s.to_f64() - 17.024579547133).abs() < 1e-9);
        assert!(s.error_bound() <= 2e-40);
    }

    #[test]
    fn rejects_nonpositive_exponent() {
        assert!(Decimal::power(2, &q("0"), 10).is_err());
        assert!(Decimal::power(2, &q("-1"), 10).is_err());
    }
}
