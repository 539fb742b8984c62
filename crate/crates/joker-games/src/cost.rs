//! Natural numbers extended with infinity.
//!
//! Ranks, distances and Joker costs all live in the same domain: a play that
//! never reaches the goal has cost `Inf`, everything else is a finite count.

use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// A natural number or infinity. `Fin(n) < Inf` for every `n`.
///
/// Infinity is a proper variant, never a sentinel integer, so arithmetic and
/// comparisons cannot silently overflow into bogus finite values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Fin(u64),
    Inf,
}

impl Cost {
    pub const ZERO: Cost = Cost::Fin(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Fin(_))
    }

    /// The finite payload, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Fin(n) => Some(n),
            Cost::Inf => None,
        }
    }

    /// Saturating check against a cap: anything above `cap` collapses to `Inf`.
    /// Used by value iteration, where finite values are bounded by the state
    /// count and larger intermediate results can only mean "unreachable".
    pub fn capped(self, cap: u64) -> Cost {
        match self {
            Cost::Fin(n) if n > cap => Cost::Inf,
            c => c,
        }
    }
}

impl Add<u64> for Cost {
    type Output = Cost;

    fn add(self, rhs: u64) -> Cost {
        match self {
            Cost::Fin(n) => Cost::Fin(n + rhs),
            Cost::Inf => Cost::Inf,
        }
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Fin(a), Cost::Fin(b)) => Cost::Fin(a + b),
            _ => Cost::Inf,
        }
    }
}

impl From<u64> for Cost {
    fn from(n: u64) -> Cost {
        Cost::Fin(n)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Fin(n) => write!(f, "{n}"),
            Cost::Inf => write!(f, "inf"),
        }
    }
}

// Machine-readable outputs spell infinity as the string "inf"; finite values
// stay plain JSON numbers.
impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cost::Fin(n) => serializer.serialize_u64(*n),
            Cost::Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Cost, D::Error> {
        struct CostVisitor;

        impl Visitor<'_> for CostVisitor {
            type Value = Cost;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Cost, E> {
                Ok(Cost::Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Cost, E> {
                u64::try_from(v)
                    .map(Cost::Fin)
                    .map_err(|_| E::custom("negative cost"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Cost, E> {
                match v {
                    "inf" => Ok(Cost::Inf),
                    other => other
                        .parse()
                        .map(Cost::Fin)
                        .map_err(|_| E::custom(format!("bad cost {other:?}"))),
                }
            }
        }

        deserializer.deserialize_any(CostVisitor)
    }
}
