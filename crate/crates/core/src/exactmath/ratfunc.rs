//! Rational functions over ℚ(i) in canonical form: monic denominator,
//! numerator and denominator coprime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Polynomial;
use super::scalar::Gq;
use crate::error::{MathError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = if den.is_constant() {
            Polynomial::one()
        } else {
            Polynomial::gcd(&num, &den)
        };
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::normalize_lead(num, den)
    }

    fn normalize_lead(num: Polynomial, den: Polynomial) -> Self {
        let lead = den.leading().unwrap().clone();
        if lead.is_one() {
            Self { num, den }
        } else {
            let inv = lead.inv().unwrap();
            Self { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        Self { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(Gq::one())
    }

    pub fn constant(c: Gq) -> Self {
        Self { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Gq::from_int(n))
    }

    pub fn z() -> Self {
        Self::from_poly(Polynomial::z())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    /// `(z − a)^k` for any integer `k`.
    pub fn power_at(a: &Gq, k: i64) -> Self {
        let base = Polynomial::linear_root(a).pow(k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(base)
        } else {
            Self { num: Polynomial::one(), den: base }
        }
    }

    /// `z^k` for any integer `k`.
    pub fn monomial(k: i64) -> Self {
        Self::power_at(&Gq::zero(), k)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Gq> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Value at a finite point; `None` at a pole.
    pub fn eval(&self, x: &Gq) -> Option<Gq> {
        self.num.eval(x).checked_div(&self.den.eval(x))
    }

    pub fn derivative(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        // With g = gcd(d, d'): (n/d)' = (n'·(d/g) − n·(d'/g)) / (d·d/g).
        let g = Polynomial::gcd(&self.den, &self.den.derivative());
        let d_over_g = self.den.div_exact(&g).unwrap();
        let dprime_over_g = self.den.derivative().div_exact(&g).unwrap();
        let num = &(&self.num.derivative() * &d_over_g) - &(&self.num * &dprime_over_g);
        let den = &self.den * &d_over_g;
        Self::reduce(num, den)
    }

    /// The function `z ↦ f(1/z)`.
    pub fn invert_variable(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let shift = Self::monomial(dd - dn);
        let base = Self::reduce(self.num.reversed(), self.den.reversed());
        &base * &shift
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

fn add_impl(a: &RationalFunction, b: &RationalFunction, negate_b: bool) -> RationalFunction {
    let bn = if negate_b { -&b.num } else { b.num.clone() };
    if a.is_zero() {
        return RationalFunction { num: bn, den: b.den.clone() };
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        let num = &a.num + &bn;
        if a.den.is_one() {
            return RationalFunction { num, den: a.den.clone() };
        }
        return RationalFunction::reduce(num, a.den.clone());
    }
    let g = Polynomial::gcd(&a.den, &b.den);
    let (ad, bd) = if g.is_one() {
        (a.den.clone(), b.den.clone())
    } else {
        (a.den.div_exact(&g).unwrap(), b.den.div_exact(&g).unwrap())
    };
    let num = &(&a.num * &bd) + &(&bn * &ad);
    let den = &a.den * &bd;
    if g.is_one() {
        // Coprime denominators: num shares no factor with den.
        if num.is_zero() {
            return RationalFunction::zero();
        }
        return RationalFunction { num, den };
    }
    RationalFunction::reduce(num, den)
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        add_impl(self, rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        add_impl(self, rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel so the product is already reduced.
        let g1 = Polynomial::gcd(&self.num, &rhs.den);
        let g2 = Polynomial::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RationalFunction::normalize_lead(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &'a RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

/// `p(z)` or `(p(z))/(q(z))`.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Recursive-descent parser for expressions in `z` with integer literals,
/// `i`, `+ - * / ^` and parentheses.
struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> MathError {
        MathError::Parse(format!("{msg} at byte {} of rational function", self.pos))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.power()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let f = self.power()?;
            acc = if c == b'*' { &acc * &f } else { acc.checked_div(&f)? };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = self.peek() == Some(b'-');
            if neg {
                self.pos += 1;
            }
            let e = self.integer()? as i64;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected integer"))
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(RationalFunction::z())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(RationalFunction::constant(Gq::i()))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                Ok(RationalFunction::constant(text.parse()?))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

impl FromStr for RationalFunction {
    type Err = MathError;

    fn from_str(s: &str) -> Result<Self> {
        let clean: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { s: clean.as_bytes(), pos: 0 };
        let out = p.expr()?;
        if p.pos != clean.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_examples() {
        let a = rf("z/(z-1)");
        assert!((&a + &rf("-z/(z-1)")).is_zero());
        assert_eq!(&rf("z") * &rf("1/z"), RationalFunction::one());
        assert_eq!(rf("(z^2-1)/(z-1)"), rf("z+1"));
        assert!(rf("1").checked_div(&RationalFunction::zero()).is_err());
    }

    #[test]
    fn monic_denominator() {
        let a = rf("1/(2*z-4)");
        assert_eq!(a.den(), &Polynomial::linear_root(&Gq::from_int(2)));
        assert_eq!(a.num().coeff(0), Gq::from_frac(1, 2));
    }

    #[test]
    fn derivative_of_quotient() {
        assert_eq!(rf("1/z").derivative(), rf("-1/z^2"));
        assert_eq!(rf("z^3/(z-1)^2").derivative(), rf("(z^3-3*z^2)/(z-1)^3"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["(1/2+i)*z^2/(z-3)", "z^-2", "(z-i)^3/(4*z+1)", "0", "7/3"] {
            let a = rf(s);
            assert_eq!(rf(&a.to_string()), a);
        }
    }

    #[test]
    fn invert_variable() {
        assert_eq!(rf("z^2/(z-1)").invert_variable(), rf("1/(z-z^2)"));
    }
}
