//! Exact arithmetic substrate: extended rationals, small finite fields and
//! truncated Laurent series over them.

mod field;
mod series;
mod text;

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use field::{Fq, ResidueField};
pub use series::{LaurentSeries, DEFAULT_WINDOW};
pub use text::{format_series, parse_series};

/// Exact rational with 128-bit numerator and denominator.
pub type Rat = Ratio<i128>;

/// A rational number or `+inf`. `Finite < Infinity` for every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    Finite(Rat),
    Infinity,
}

impl ExtRational {
    pub fn int(n: i128) -> Self {
        ExtRational::Finite(Rat::from_integer(n))
    }

    pub fn frac(num: i128, den: i128) -> Self {
        ExtRational::Finite(Rat::new(num, den))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn finite(&self) -> Option<Rat> {
        match self {
            ExtRational::Finite(r) => Some(*r),
            ExtRational::Infinity => None,
        }
    }

    /// The value as an integer, if it is a finite integer.
    pub fn as_integer(&self) -> Option<i128> {
        self.finite().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Multiplies by a positive rational; `inf` stays `inf`.
    pub fn scale(&self, k: Rat) -> Self {
        assert!(k.is_positive(), "ExtRational::scale needs a positive factor");
        match self {
            ExtRational::Finite(r) => ExtRational::Finite(r * k),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }
}

impl From<Rat> for ExtRational {
    fn from(r: Rat) -> Self {
        ExtRational::Finite(r)
    }
}

impl From<i64> for ExtRational {
    fn from(n: i64) -> Self {
        ExtRational::int(n as i128)
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl Add<Rat> for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: Rat) -> ExtRational {
        self + ExtRational::Finite(rhs)
    }
}

impl Sub<Rat> for ExtRational {
    type Output = ExtRational;
    fn sub(self, rhs: Rat) -> ExtRational {
        self + ExtRational::Finite(-rhs)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Infinity => f.write_str("inf"),
            ExtRational::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ExtRational::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "+inf" || s == "∞" {
            return Ok(ExtRational::Infinity);
        }
        let bad = || Error::invalid(format!("not a rational or 'inf': {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i128>().map(ExtRational::int).map_err(|_| bad()),
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: i128 = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(ExtRational::frac(n, d))
            }
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapters writing [`Rat`] values in the same string form as
/// [`ExtRational`].
pub mod rat_serde {
    use super::{ExtRational, Rat};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        ExtRational::Finite(*r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        ExtRational::deserialize(d)?
            .finite()
            .ok_or_else(|| serde::de::Error::custom("expected a finite rational"))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|r| ExtRational::Finite(*r)))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
            Vec::<ExtRational>::deserialize(d)?
                .into_iter()
                .map(|x| x.finite().ok_or_else(|| serde::de::Error::custom("expected a finite rational")))
                .collect()
        }
    }
}

/// Runs `f` with precision `start`, doubling on every insufficient-precision
/// error until `max` is exceeded. Other errors are returned immediately.
pub fn with_precision_retry<T>(
    start: i64,
    max: i64,
    mut f: impl FnMut(i64) -> Result<T>,
) -> Result<T> {
    let mut prec = start.max(1);
    loop {
        match f(prec) {
            Err(e) if e.is_precision() && prec < max => prec = (prec * 2).min(max),
            other => return other,
        }
    }
}
