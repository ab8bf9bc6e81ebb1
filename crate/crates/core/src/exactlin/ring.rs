use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient ring: the integers or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    PrimeField(u32),
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    /// Builds `F_p`, rejecting composites and prime powers.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring::PrimeField(p as u32))
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Ring::PrimeField(_))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Ring::Integers => 0,
            Ring::PrimeField(p) => *p,
        }
    }

    /// Canonical representative of `x` in this ring.
    pub fn reduce(&self, x: &BigInt) -> BigInt {
        match self {
            Ring::Integers => x.clone(),
            Ring::PrimeField(p) => x.mod_floor(&BigInt::from(*p)),
        }
    }

    pub fn is_unit(&self, x: &BigInt) -> bool {
        match self {
            Ring::Integers => x.abs().is_one(),
            Ring::PrimeField(_) => !self.reduce(x).is_zero(),
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self, x: &BigInt) -> Option<BigInt> {
        match self {
            Ring::Integers => {
                if x.is_one() || (-x).is_one() {
                    Some(x.clone())
                } else {
                    None
                }
            }
            Ring::PrimeField(p) => {
                let p = BigInt::from(*p);
                let a = x.mod_floor(&p);
                if a.is_zero() {
                    return None;
                }
                let e = a.extended_gcd(&p);
                Some(e.x.mod_floor(&p))
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        let s = s.trim();
        if s == "Z" {
            return Ok(Ring::Integers);
        }
        let digits = s
            .strip_prefix('F')
            .or_else(|| s.strip_prefix("Fp"))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown ring {s:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown ring {s:?}")))?;
        Ring::prime_field(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_only() {
        assert!(Ring::prime_field(2).is_ok());
        assert!(Ring::prime_field(3).is_ok());
        assert_eq!(Ring::prime_field(4), Err(Error::NotPrime(4)));
        assert_eq!(Ring::prime_field(9), Err(Error::NotPrime(9)));
        assert_eq!(Ring::prime_field(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn parse_and_display() {
        for r in [Ring::Integers, Ring::PrimeField(2), Ring::PrimeField(7)] {
            assert_eq!(r.to_string().parse::<Ring>().unwrap(), r);
        }
        assert!("F6".parse::<Ring>().is_err());
    }

    #[test]
    fn field_inverse() {
        let f5 = Ring::PrimeField(5);
        for a in 1..5 {
            let inv = f5.inverse(&BigInt::from(a)).unwrap();
            assert_eq!(f5.reduce(&(inv * a)), BigInt::one());
        }
        assert!(f5.inverse(&BigInt::from(10)).is_none());
    }
}
