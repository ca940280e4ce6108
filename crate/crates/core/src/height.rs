use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A quasi-`F^e`-split height.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeightResult {
    /// Split at `n` and not at `n - 1`.
    Finite(u32),
    /// Not split at any level up to the bound.
    ExceedsBound(u32),
    /// Never split; the reason names the certifying argument.
    Infinite(String),
}

impl HeightResult {
    pub fn finite(&self) -> Option<u32> {
        match self {
            HeightResult::Finite(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, HeightResult::Infinite(_))
    }

    /// Same height, ignoring the reason attached to `Infinite`.
    pub fn same_value(&self, other: &HeightResult) -> bool {
        match (self, other) {
            (HeightResult::Infinite(_), HeightResult::Infinite(_)) => true,
            _ => self == other,
        }
    }

    /// Order for monotonicity checks: a finite height is below every unresolved or infinite one.
    /// `ExceedsBound(b)` only says the height is above `b`.
    pub fn lower_bound(&self) -> u64 {
        match self {
            HeightResult::Finite(n) => *n as u64,
            HeightResult::ExceedsBound(b) => *b as u64 + 1,
            HeightResult::Infinite(_) => u64::MAX,
        }
    }
}

impl fmt::Display for HeightResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightResult::Finite(n) => write!(f, "{n}"),
            HeightResult::ExceedsBound(b) => write!(f, ">{b}"),
            HeightResult::Infinite(_) => write!(f, "inf"),
        }
    }
}

impl FromStr for HeightResult {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("bad height {s:?}"));
        if s == "inf" {
            Ok(HeightResult::Infinite(String::new()))
        } else if let Some(b) = s.strip_prefix('>') {
            Ok(HeightResult::ExceedsBound(b.parse().map_err(|_| bad())?))
        } else {
            Ok(HeightResult::Finite(s.parse().map_err(|_| bad())?))
        }
    }
}
