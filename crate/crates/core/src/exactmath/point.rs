use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::Gq;
use crate::error::MathError;

/// A point of the Riemann sphere: a finite chart value or `∞`.
///
/// Finite points use the local coordinate `z − p`; `∞` uses `w = 1/z`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Gq),
    Infinity,
}

impl Point {
    pub fn finite(v: impl Into<Gq>) -> Self {
        Point::Finite(v.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn value(&self) -> Option<&Gq> {
        match self {
            Point::Finite(v) => Some(v),
            Point::Infinity => None,
        }
    }
}

impl From<i64> for Point {
    fn from(v: i64) -> Self {
        Point::Finite(Gq::from_int(v))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(v) => write!(f, "{v}"),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Point {
    type Err = MathError;
    fn from_str(s: &str) -> Result<Self, MathError> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Point::Infinity),
            t => Ok(Point::Finite(t.parse()?)),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
