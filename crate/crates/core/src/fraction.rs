use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative exact ratio of counts, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    numer: u64,
    denom: u64,
}

impl Fraction {
    /// `numer / denom`, or an undefined-statistic error when `denom == 0`.
    pub fn new(numer: u64, denom: u64, what: &str) -> Result<Self> {
        if denom == 0 {
            return Err(Error::undefined(what));
        }
        let g = numer.gcd(&denom);
        Ok(Fraction {
            numer: numer / g,
            denom: denom / g,
        })
    }

    pub(crate) fn from_u128(numer: u128, denom: u128, what: &str) -> Result<Self> {
        if denom == 0 {
            return Err(Error::undefined(what));
        }
        let g = numer.gcd(&denom);
        let (n, d) = (numer / g, denom / g);
        match (u64::try_from(n), u64::try_from(d)) {
            (Ok(numer), Ok(denom)) => Ok(Fraction { numer, denom }),
            _ => Err(Error::InvalidArgument(format!(
                "ratio {n}/{d} does not fit in 64 bits"
            ))),
        }
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    pub fn is_zero(&self) -> bool {
        self.numer == 0
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numer as u128 * other.denom as u128).cmp(&(other.numer as u128 * self.denom as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.to_f64())
    }
}
