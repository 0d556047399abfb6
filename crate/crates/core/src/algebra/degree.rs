use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

/// Integer logarithm of an absolute value: `|a| = e^deg(a)`, with `|0| = 0`
/// represented by [`Degree::NegInf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == Degree::NegInf
    }

    pub fn from_opt(d: Option<i64>) -> Degree {
        d.map_or(Degree::NegInf, Degree::Finite)
    }
}

impl From<i64> for Degree {
    fn from(d: i64) -> Self {
        Degree::Finite(d)
    }
}

impl Add<i64> for Degree {
    type Output = Degree;
    fn add(self, rhs: i64) -> Degree {
        match self {
            Degree::NegInf => Degree::NegInf,
            Degree::Finite(d) => Degree::Finite(d + rhs),
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::NegInf => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_i64(*d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_inf_is_smallest() {
        assert!(Degree::NegInf < Degree::Finite(i64::MIN));
        assert_eq!(Degree::NegInf + 5, Degree::NegInf);
        assert_eq!(Degree::Finite(2) + Degree::Finite(3), Degree::Finite(5));
        assert_eq!(Degree::Finite(-1).max(Degree::NegInf), Degree::Finite(-1));
    }
}
