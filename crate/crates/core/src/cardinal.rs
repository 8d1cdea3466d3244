//! The three cardinalities a presentation can express.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

/// A cardinal number restricted to the naturals, countable infinity and the
/// first uncountable cardinal.
///
/// The derived order places every `Finite(n)` below `Aleph0`, which sits
/// below `Aleph1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Finite(u64),
    Aleph0,
    Aleph1,
}

impl Cardinal {
    pub const ZERO: Cardinal = Cardinal::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinal::Finite(n) => Some(n),
            _ => None,
        }
    }

    /// Cardinal addition. Saturates at `u64::MAX` for finite overflow.
    pub fn sum(self, other: Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => Cardinal::Finite(a.saturating_add(b)),
            (a, b) => a.max(b),
        }
    }

    pub fn max(self, other: Cardinal) -> Cardinal {
        Ord::max(self, other)
    }

    pub fn cmp_card(self, other: Cardinal) -> Ordering {
        self.cmp(&other)
    }

    /// `min(self, n)` as a finite count, used when materializing copies.
    pub fn clamp_to(self, n: u64) -> u64 {
        match self {
            Cardinal::Finite(m) => m.min(n),
            _ => n,
        }
    }

    /// Whether an index lies below this cardinal.
    pub fn admits(self, index: u64) -> bool {
        match self {
            Cardinal::Finite(m) => index < m,
            _ => true,
        }
    }
}

impl Add for Cardinal {
    type Output = Cardinal;

    fn add(self, rhs: Cardinal) -> Cardinal {
        self.sum(rhs)
    }
}

impl Sum for Cardinal {
    fn sum<I: Iterator<Item = Cardinal>>(iter: I) -> Cardinal {
        iter.fold(Cardinal::ZERO, Cardinal::sum)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph0 => f.write_str("aleph0"),
            Cardinal::Aleph1 => f.write_str("aleph1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cardinal `{0}`")]
pub struct ParseCardinalError(pub String);

impl FromStr for Cardinal {
    type Err = ParseCardinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aleph0" | "nat" => Ok(Cardinal::Aleph0),
            "aleph1" => Ok(Cardinal::Aleph1),
            _ => s
                .parse::<u64>()
                .map(Cardinal::Finite)
                .map_err(|_| ParseCardinalError(s.to_owned())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(Cardinal::Finite(3) + Cardinal::Finite(4), Cardinal::Finite(7));
        for n in [0, 1, 17] {
            assert_eq!(Cardinal::Aleph0 + Cardinal::Finite(n), Cardinal::Aleph0);
            assert_eq!(Cardinal::Finite(n) + Cardinal::Aleph1, Cardinal::Aleph1);
        }
        assert_eq!(Cardinal::Aleph0.max(Cardinal::Aleph1), Cardinal::Aleph1);
        assert_eq!(Cardinal::Aleph1 + Cardinal::Aleph0, Cardinal::Aleph1);
        let total: Cardinal = [Cardinal::Finite(2), Cardinal::Finite(5)].into_iter().sum();
        assert_eq!(total, Cardinal::Finite(7));
    }

    #[test]
    fn order() {
        assert!(Cardinal::Finite(u64::MAX) < Cardinal::Aleph0);
        assert!(Cardinal::Aleph0 < Cardinal::Aleph1);
        assert_eq!(Cardinal::Finite(2).cmp_card(Cardinal::Finite(2)), Ordering::Equal);
        assert_ne!(Cardinal::Finite(2), Cardinal::Finite(3));
    }

    #[test]
    fn parse_and_display() {
        for c in [Cardinal::Finite(0), Cardinal::Finite(12), Cardinal::Aleph0, Cardinal::Aleph1] {
            assert_eq!(c.to_string().parse::<Cardinal>().unwrap(), c);
        }
        assert!("aleph2".parse::<Cardinal>().is_err());
    }
}
