use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Angular parameter `k` of the TTW and PW families.
///
/// A rational `k = m/n` is kept as an exact fraction; anything else is an
/// `Irrational` real carried without rational approximation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, bound = "T: Scalar")]
pub enum RationalOrReal<T: Scalar = f64> {
    ReducedFraction { m: u64, n: u64 },
    Irrational { value: T },
}

impl<T: Scalar> RationalOrReal<T> {
    /// Builds `m/n` in lowest terms.
    pub fn fraction(m: u64, n: u64) -> Result<Self> {
        Self::ReducedFraction { m, n }.normalized()
    }

    pub fn integer(m: u64) -> Result<Self> {
        Self::fraction(m, 1)
    }

    pub fn irrational(value: T) -> Result<Self> {
        Self::Irrational { value }.normalized()
    }

    /// Reduces a fraction by its gcd and rejects `k = 0`.
    pub fn normalized(self) -> Result<Self> {
        match self {
            Self::ReducedFraction { m, n } => {
                if n == 0 {
                    return Err(Error::InvalidFraction { m, n });
                }
                if m == 0 {
                    return Err(Error::ZeroK);
                }
                let g = m.gcd(&n);
                Ok(Self::ReducedFraction { m: m / g, n: n / g })
            }
            Self::Irrational { value } => {
                if value == T::zero() {
                    Err(Error::ZeroK)
                } else if !num_traits::Float::is_finite(value) {
                    Err(Error::NonFinite { name: "k" })
                } else {
                    Ok(self)
                }
            }
        }
    }

    pub fn value(&self) -> T {
        match *self {
            Self::ReducedFraction { m, n } => T::lit(m as f64) / T::lit(n as f64),
            Self::Irrational { value } => value,
        }
    }

    /// `(m, n)` for a rational `k`.
    pub fn as_fraction(&self) -> Option<(u64, u64)> {
        match *self {
            Self::ReducedFraction { m, n } => Some((m, n)),
            Self::Irrational { .. } => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_fraction().is_some()
    }

    /// Half of `k`, as used in the angular arguments of the PW family.
    pub fn halved(&self) -> Self {
        match *self {
            Self::ReducedFraction { m, n } => {
                let g = m.gcd(&(2 * n));
                Self::ReducedFraction { m: m / g, n: 2 * n / g }
            }
            Self::Irrational { value } => Self::Irrational {
                value: value / T::lit(2.0),
            },
        }
    }
}

impl<T: Scalar> std::fmt::Display for RationalOrReal<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ReducedFraction { m, n } if *n == 1 => write!(f, "{m}"),
            Self::ReducedFraction { m, n } => write!(f, "{m}/{n}"),
            Self::Irrational { value } => write!(f, "{value}"),
        }
    }
}
