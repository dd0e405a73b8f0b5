//! Cardinality intervals shared by restrictions, attributes and relationships.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A closed interval `min..max` of allowed occurrence counts; `max = None`
/// is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub min: u32,
    pub max: Option<u32>,
}

impl Bounds {
    pub const ANY: Bounds = Bounds { min: 0, max: None };
    pub const OPTIONAL: Bounds = Bounds { min: 0, max: Some(1) };
    pub const AT_LEAST_ONE: Bounds = Bounds { min: 1, max: None };
    pub const EXACTLY_ONE: Bounds = Bounds { min: 1, max: Some(1) };

    pub fn new(min: u32, max: Option<u32>) -> Self {
        Bounds { min, max }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.max, Some(max) if self.min > max)
    }

    /// Tightest bounds satisfying both intervals. May be empty.
    pub fn intersect(self, other: Bounds) -> Bounds {
        let max = match (self.max, other.max) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Bounds { min: self.min.max(other.min), max }
    }

    pub fn with_max_one(self) -> Bounds {
        self.intersect(Bounds::new(0, Some(1)))
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::ANY
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            None => write!(f, "{}..*", self.min),
            Some(max) if max == self.min => write!(f, "{max}"),
            Some(max) => write!(f, "{}..{}", self.min, max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cardinality '{0}' (expected 'n', 'n..m', 'n..*' or '*')")]
pub struct ParseBoundsError(pub String);

impl FromStr for Bounds {
    type Err = ParseBoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseBoundsError(s.to_string());
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| err());
        let s = s.trim();
        if s == "*" {
            return Ok(Bounds::ANY);
        }
        match s.split_once("..") {
            None => {
                let n = num(s)?;
                Ok(Bounds::new(n, Some(n)))
            }
            Some((lo, hi)) => {
                let min = num(lo)?;
                let max = if hi.trim() == "*" { None } else { Some(num(hi)?) };
                Ok(Bounds::new(min, max))
            }
        }
    }
}

impl Serialize for Bounds {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bounds {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
