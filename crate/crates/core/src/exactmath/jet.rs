//! Truncated Laurent expansions of rational functions and the residue.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::point::Point;
use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::scalar::Gq;

/// Coefficients `c_k` for `min_order ≤ k ≤ max_order` of a Laurent expansion
/// in the local coordinate at `base_point`.
///
/// The jet is *faithful*: every coefficient in the window is the true one,
/// so an expansion whose true order lies above `min_order` simply starts with
/// zeros. Coefficients below `min_order` are not represented and may be nonzero
/// only if the caller asked for a truncated window.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LaurentJet {
    pub base_point: Point,
    pub min_order: i64,
    pub max_order: i64,
    pub coefficients: BTreeMap<i64, Gq>,
}

impl LaurentJet {
    pub fn coeff(&self, k: i64) -> Gq {
        assert!(
            (self.min_order..=self.max_order).contains(&k),
            "order {k} outside jet window [{}, {}]",
            self.min_order,
            self.max_order
        );
        self.coefficients.get(&k).cloned().unwrap_or_else(Gq::zero)
    }

    /// Product of jets, valid on the window both factors determine.
    ///
    /// Both inputs must have no terms below their `min_order`.
    pub fn mul(&self, other: &LaurentJet) -> LaurentJet {
        assert_eq!(self.base_point, other.base_point);
        let lo = self.min_order + other.min_order;
        let hi = (self.max_order + other.min_order).min(other.max_order + self.min_order);
        let mut coefficients = BTreeMap::new();
        for (&a, ca) in &self.coefficients {
            for (&b, cb) in &other.coefficients {
                if a + b <= hi {
                    *coefficients.entry(a + b).or_insert_with(Gq::zero) += &(ca * cb);
                }
            }
        }
        coefficients.retain(|_, v| !v.is_zero());
        LaurentJet { base_point: self.base_point.clone(), min_order: lo, max_order: hi, coefficients }
    }
}

/// Leading order `v` and the first `count` coefficients of the series `t^v·(c_0 + c_1 t + …)`
/// for `num/den`, where both are given in the local variable `t`.
/// Returns `None` for the zero function.
fn series(num: &Polynomial, den: &Polynomial, count: usize) -> Option<(i64, Vec<Gq>)> {
    if num.is_zero() {
        return None;
    }
    let a = num.coeffs().iter().take_while(|c| c.is_zero()).count();
    let b = den.coeffs().iter().take_while(|c| c.is_zero()).count();
    let n1 = &num.coeffs()[a..];
    let d1 = &den.coeffs()[b..];
    let d0_inv = d1[0].inv().expect("stripped denominator has nonzero constant term");
    let mut q: Vec<Gq> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = n1.get(k).cloned().unwrap_or_else(Gq::zero);
        for j in 1..=k.min(d1.len().saturating_sub(1)) {
            if !d1[j].is_zero() && !q[k - j].is_zero() {
                acc -= &(&d1[j] * &q[k - j]);
            }
        }
        q.push(&acc * &d0_inv);
    }
    Some((a as i64 - b as i64, q))
}

/// Numerator, denominator in the local coordinate at `p`, and the extra power of
/// the local coordinate pulled out (nonzero only at `∞`).
fn local_parts(f: &RationalFunction, p: &Point) -> (Polynomial, Polynomial, i64) {
    match p {
        Point::Finite(a) => (f.num().taylor_shift(a), f.den().taylor_shift(a), 0),
        Point::Infinity => {
            let dn = f.num().degree().unwrap_or(0) as i64;
            let dd = f.den().degree().unwrap_or(0) as i64;
            (f.num().reversed(), f.den().reversed(), dd - dn)
        }
    }
}

/// Order of `f` at `p` in the local coordinate; `None` is the `+∞` order of `f = 0`.
pub fn ord_at(f: &RationalFunction, p: &Point) -> Option<i64> {
    if f.is_zero() {
        return None;
    }
    match p {
        Point::Infinity => {
            Some(f.den().degree().unwrap() as i64 - f.num().degree().unwrap() as i64)
        }
        Point::Finite(a) => Some(
            f.num().root_multiplicity(a).unwrap() as i64
                - f.den().root_multiplicity(a).unwrap() as i64,
        ),
    }
}

/// Coefficients of `f` at `p` for orders `min_order..=max_order`.
pub fn laurent_expand(f: &RationalFunction, p: &Point, min_order: i64, max_order: i64) -> LaurentJet {
    assert!(max_order >= min_order, "empty jet window");
    let mut coefficients = BTreeMap::new();
    let (num, den, shift) = local_parts(f, p);
    let count = |v: i64| (max_order - v + 1).max(0) as usize;
    // First pass finds the order; second computes exactly what the window needs.
    if let Some((v0, _)) = series(&num, &den, 0) {
        let v = v0 + shift;
        if let Some((_, q)) = series(&num, &den, count(v)) {
            for (j, c) in q.into_iter().enumerate() {
                let k = v + j as i64;
                if k >= min_order && !c.is_zero() {
                    coefficients.insert(k, c);
                }
            }
        }
    }
    LaurentJet { base_point: p.clone(), min_order, max_order, coefficients }
}

/// Residue of the 1-form `f·dz` at `p`.
///
/// At `∞`, `dz = −w⁻²dw`, so the residue is minus the coefficient of `w¹` in `f`.
pub fn residue_at(f: &RationalFunction, p: &Point) -> Gq {
    match p {
        Point::Finite(_) => match ord_at(f, p) {
            Some(v) if v <= -1 => laurent_expand(f, p, -1, -1).coeff(-1),
            _ => Gq::zero(),
        },
        Point::Infinity => match ord_at(f, p) {
            Some(v) if v <= 1 => -laurent_expand(f, p, 1, 1).coeff(1),
            _ => Gq::zero(),
        },
    }
}
