use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactmath::Point;

/// A finite formal sum `Σ n_p·[p]`. Zero multiplicities are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Divisor {
    support: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(p: Point, n: i64) -> Self {
        let mut d = Self::zero();
        d.add_at(&p, n);
        d
    }

    pub fn from_pairs<I: IntoIterator<Item = (Point, i64)>>(pairs: I) -> Self {
        let mut d = Self::zero();
        for (p, n) in pairs {
            d.add_at(&p, n);
        }
        d
    }

    pub fn add_at(&mut self, p: &Point, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.support.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.support.remove(p);
        }
    }

    pub fn get(&self, p: &Point) -> i64 {
        self.support.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.support.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, i64)> {
        self.support.iter().map(|(p, &n)| (p, n))
    }

    pub fn is_effective(&self) -> bool {
        self.support.values().all(|&n| n >= 0)
    }

    /// `self ≥ other` pointwise.
    pub fn dominates(&self, other: &Divisor) -> bool {
        (self - other).is_effective()
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, n) in rhs.iter() {
            d.add_at(p, n);
        }
        d
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &(-rhs)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor { support: self.support.iter().map(|(p, &n)| (p.clone(), -n)).collect() }
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(p, n)| format!("{n}[{p}]")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    point: Point,
    multiplicity: i64,
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = self
            .iter()
            .map(|(p, n)| Entry { point: p.clone(), multiplicity: n })
            .collect();
        entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Vec::<Entry>::deserialize(deserializer)?;
        Ok(Divisor::from_pairs(entries.into_iter().map(|e| (e.point, e.multiplicity))))
    }
}

/// Genus-0 Riemann–Roch for `r`-vector valued functions: `r·max(0, deg D + 1)`.
pub fn rr_dim(d: &Divisor, r: usize) -> usize {
    r * (d.degree() + 1).max(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rr_examples() {
        let d = Divisor::from_pairs([(Point::from(0), 2), (Point::Infinity, 1)]);
        assert_eq!(rr_dim(&d, 1), 4);
        assert_eq!(rr_dim(&Divisor::point(Point::from(3), -1), 1), 0);
        assert_eq!(rr_dim(&Divisor::zero(), 3), 3);
    }

    #[test]
    fn zero_multiplicities_vanish() {
        let mut d = Divisor::point(Point::from(1), 2);
        d.add_at(&Point::from(1), -2);
        assert_eq!(d, Divisor::zero());
        let json = serde_json::to_string(&Divisor::point(Point::Infinity, 3)).unwrap();
        assert_eq!(json, r#"[{"point":"inf","multiplicity":3}]"#);
    }
}
