use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactmath::{laurent_expand, ord_at, Gq, Mat, Point, Polynomial, RationalFunction};

/// A square matrix of rational functions in `z`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaxElement {
    size: usize,
    entries: Vec<RationalFunction>,
}

impl LaxElement {
    pub fn new(size: usize, entries: Vec<RationalFunction>) -> Self {
        assert_eq!(entries.len(), size * size, "entry count does not match size");
        Self { size, entries }
    }

    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Self {
        let size = rows.len();
        assert!(rows.iter().all(|r| r.len() == size), "matrix must be square");
        Self { size, entries: rows.into_iter().flatten().collect() }
    }

    pub fn zero(size: usize) -> Self {
        Self { size, entries: vec![RationalFunction::zero(); size * size] }
    }

    /// The constant element `x`.
    pub fn constant(x: &Mat) -> Self {
        Self::times(x, &RationalFunction::one())
    }

    /// `x · f` for a constant matrix `x`.
    pub fn times(x: &Mat, f: &RationalFunction) -> Self {
        Self {
            size: x.rows(),
            entries: x.entries().iter().map(|c| f.scale(c)).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.size + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|f| f.is_zero())
    }

    pub fn trace(&self) -> RationalFunction {
        (0..self.size).fold(RationalFunction::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        Self { size: n, entries: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect() }
    }

    pub fn scale(&self, c: &Gq) -> Self {
        Self { size: self.size, entries: self.entries.iter().map(|f| f.scale(c)).collect() }
    }

    /// Pointwise multiplication by a scalar function.
    pub fn mul_fn(&self, f: &RationalFunction) -> Self {
        Self { size: self.size, entries: self.entries.iter().map(|g| g * f).collect() }
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul(&self, x: &Mat) -> Self {
        &LaxElement::constant(x) * self
    }

    pub fn derivative(&self) -> Self {
        Self { size: self.size, entries: self.entries.iter().map(|f| f.derivative()).collect() }
    }

    pub fn commutator(&self, other: &LaxElement) -> Self {
        &(self * other) - &(other * self)
    }

    /// Order at `p`: the minimum over entries, `None` for the zero matrix.
    pub fn ord_at(&self, p: &Point) -> Option<i64> {
        self.entries.iter().filter_map(|f| ord_at(f, p)).min()
    }

    /// Jet coefficient matrices at `p` for orders `lo..=hi`.
    pub fn jet(&self, p: &Point, lo: i64, hi: i64) -> Vec<Mat> {
        let n = self.size;
        let jets: Vec<_> = self.entries.iter().map(|f| laurent_expand(f, p, lo, hi)).collect();
        (lo..=hi)
            .map(|k| Mat::from_rows((0..n).map(|i| (0..n).map(|j| jets[i * n + j].coeff(k)).collect()).collect()))
            .collect()
    }

    /// The coefficient matrix of order `k` at `p`.
    pub fn jet_coeff(&self, p: &Point, k: i64) -> Mat {
        self.jet(p, k, k).pop().unwrap()
    }

    pub fn eval(&self, x: &Gq) -> Option<Mat> {
        let n = self.size;
        let vals: Option<Vec<Gq>> = self.entries.iter().map(|f| f.eval(x)).collect();
        vals.map(|v| Mat::from_rows(v.chunks(n).map(|r| r.to_vec()).collect()))
    }
}

impl Add for &LaxElement {
    type Output = LaxElement;
    fn add(self, rhs: &LaxElement) -> LaxElement {
        assert_eq!(self.size, rhs.size);
        LaxElement { size: self.size, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &LaxElement {
    type Output = LaxElement;
    fn sub(self, rhs: &LaxElement) -> LaxElement {
        assert_eq!(self.size, rhs.size);
        LaxElement { size: self.size, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &LaxElement {
    type Output = LaxElement;
    fn neg(self) -> LaxElement {
        LaxElement { size: self.size, entries: self.entries.iter().map(|a| -a).collect() }
    }
}

impl LaxElement {
    /// Entries over a common denominator: `(d, p)` with `entries[k] = p[k]/d`.
    fn over_common_denominator(&self) -> (Polynomial, Vec<Polynomial>) {
        let mut d = Polynomial::one();
        for f in &self.entries {
            if !f.den().is_one() {
                let g = Polynomial::gcd(&d, f.den());
                d = &d * &f.den().div_exact(&g).unwrap();
            }
        }
        let nums = self.entries.iter().map(|f| f.num() * &d.div_exact(f.den()).unwrap()).collect();
        (d, nums)
    }
}

impl Mul for &LaxElement {
    type Output = LaxElement;
    /// Multiplies numerator matrices and reduces each entry once.
    fn mul(self, rhs: &LaxElement) -> LaxElement {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        let (da, pa) = self.over_common_denominator();
        let (db, pb) = rhs.over_common_denominator();
        let den = &da * &db;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Polynomial::zero();
                for k in 0..n {
                    let (a, b) = (&pa[i * n + k], &pb[k * n + j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(RationalFunction::new(acc, den.clone()).unwrap());
            }
        }
        LaxElement { size: n, entries }
    }
}

impl fmt::Debug for LaxElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl Serialize for LaxElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&RationalFunction>> =
            (0..self.size).map(|i| (0..self.size).map(|j| self.get(i, j)).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaxElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<RationalFunction>>::deserialize(d)?;
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(serde::de::Error::custom("Lax element must be a square matrix"));
        }
        Ok(LaxElement::from_rows(rows))
    }
}

/// A meromorphic vector field `f(z)·d/dz`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VectorField {
    pub coefficient: RationalFunction,
}

impl VectorField {
    pub fn new(coefficient: RationalFunction) -> Self {
        Self { coefficient }
    }

    /// Order in the local chart; at `∞` the field reads `−w²f(1/w) d/dw`.
    pub fn ord_at(&self, p: &Point) -> Option<i64> {
        let o = ord_at(&self.coefficient, p)?;
        Some(if p.is_infinite() { o + 2 } else { o })
    }

    /// Leading coefficient of order `k` in the local chart at `p`.
    pub fn jet_coeff(&self, p: &Point, k: i64) -> Gq {
        match p {
            Point::Infinity => -laurent_expand(&self.coefficient, p, k - 2, k - 2).coeff(k - 2),
            _ => laurent_expand(&self.coefficient, p, k, k).coeff(k),
        }
    }

    pub fn scale(&self, c: &Gq) -> Self {
        Self::new(self.coefficient.scale(c))
    }

    pub fn mul_fn(&self, f: &RationalFunction) -> Self {
        Self::new(&self.coefficient * f)
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField::new(&self.coefficient + &rhs.coefficient)
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField::new(&self.coefficient - &rhs.coefficient)
    }
}

/// `e.f = e·f′`.
pub fn vf_action(e: &VectorField, f: &RationalFunction) -> RationalFunction {
    &e.coefficient * &f.derivative()
}

/// `[e₁, e₂] = (e₁e₂′ − e₂e₁′) d/dz`.
pub fn vf_bracket(e1: &VectorField, e2: &VectorField) -> VectorField {
    let a = &e1.coefficient * &e2.coefficient.derivative();
    let b = &e2.coefficient * &e1.coefficient.derivative();
    VectorField::new(&a - &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn witt_relations() {
        let e = VectorField::new(rf("z"));
        assert_eq!(vf_action(&e, &rf("z^5")), rf("5*z^5"));
        let f = VectorField::new(rf("z^2"));
        assert_eq!(vf_bracket(&e, &f), f);
    }

    #[test]
    fn chart_at_infinity() {
        // z^{m+1} d/dz has order −m at ∞ with leading coefficient −1.
        let e = VectorField::new(rf("z^3"));
        assert_eq!(e.ord_at(&Point::Infinity), Some(-1));
        assert_eq!(e.jet_coeff(&Point::Infinity, -1), -Gq::from_int(1));
        assert_eq!(e.ord_at(&Point::from(0)), Some(3));
    }

    #[test]
    fn jacobi_for_fields() {
        let (a, b, c) = (
            VectorField::new(rf("1/(z-1)")),
            VectorField::new(rf("z^2+i*z")),
            VectorField::new(rf("(z+2)/z^2")),
        );
        let j = &(&vf_bracket(&a, &vf_bracket(&b, &c)) + &vf_bracket(&b, &vf_bracket(&c, &a)))
            + &vf_bracket(&c, &vf_bracket(&a, &b));
        assert!(j.coefficient.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let l = LaxElement::from_rows(vec![vec![rf("1/z"), rf("0")], vec![rf("z^2-i"), rf("(z+1)/(z-1)")]]);
        let s = serde_json::to_string(&l).unwrap();
        let back: LaxElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }
}
