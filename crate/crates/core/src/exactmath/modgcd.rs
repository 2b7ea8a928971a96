//! Fast path for gcds over ℚ(i): the gcd is computed in 𝔽_p[i] with
//! p = 2⁶¹ − 1 (p ≡ 3 mod 4, so 𝔽_p[i] is a field), lifted coefficientwise by
//! rational reconstruction and accepted only after exact division checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::Polynomial;
use super::scalar::Gq;

const P: u64 = (1 << 61) - 1;

fn mulp(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addp(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn subp(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn invp(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulp(acc, base);
        }
        base = mulp(base, base);
        e >>= 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Fp2(u64, u64);

impl Fp2 {
    const ZERO: Fp2 = Fp2(0, 0);

    fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    fn sub(self, o: Fp2) -> Fp2 {
        Fp2(subp(self.0, o.0), subp(self.1, o.1))
    }

    fn mul(self, o: Fp2) -> Fp2 {
        Fp2(
            subp(mulp(self.0, o.0), mulp(self.1, o.1)),
            addp(mulp(self.0, o.1), mulp(self.1, o.0)),
        )
    }

    fn inv(self) -> Fp2 {
        let n = invp(addp(mulp(self.0, self.0), mulp(self.1, self.1)));
        Fp2(mulp(self.0, n), mulp(subp(0, self.1), n))
    }
}

fn int_mod(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().unwrap()
}

fn rat_mod(r: &BigRational) -> Option<u64> {
    let d = int_mod(r.denom());
    (d != 0).then(|| mulp(int_mod(r.numer()), invp(d)))
}

fn gq_mod(x: &Gq) -> Option<Fp2> {
    Some(Fp2(rat_mod(x.re())?, rat_mod(x.im())?))
}

fn monic(mut v: Vec<Fp2>) -> Vec<Fp2> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if let Some(&l) = v.last() {
        let li = l.inv();
        for c in &mut v {
            *c = c.mul(li);
        }
    }
    v
}

/// Remainder of monic-divisor division.
fn rem(mut a: Vec<Fp2>, b: &[Fp2]) -> Vec<Fp2> {
    let db = b.len() - 1;
    while a.len() > db {
        let c = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if !c.is_zero() {
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = a[shift + j].sub(c.mul(bj));
            }
        }
        a.pop();
    }
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn gcd_mod(a: Vec<Fp2>, b: Vec<Fp2>) -> Vec<Fp2> {
    let (mut a, mut b) = (monic(a), monic(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = monic(rem(a, &b));
        a = b;
        b = r;
    }
    a
}

/// `n/d` with `|n|, d ≤ √(p/2)` and `n ≡ u·d (mod p)`, if one exists.
fn reconstruct(u: u64) -> Option<BigRational> {
    let bound: i128 = 1 << 30;
    let (mut r0, mut r1) = (P as i128, u as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(BigInt::from(r1), BigInt::from(t1)))
}

/// The monic gcd of two nonzero polynomials, or `None` when the modular image
/// is inconclusive and the caller must fall back to the Euclidean algorithm.
pub(super) fn modular_gcd(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let am: Vec<Fp2> = a.coeffs().iter().map(gq_mod).collect::<Option<_>>()?;
    let bm: Vec<Fp2> = b.coeffs().iter().map(gq_mod).collect::<Option<_>>()?;
    if am.last()?.is_zero() || bm.last()?.is_zero() {
        return None;
    }
    let g = gcd_mod(am, bm);
    if g.len() == 1 {
        // Both inputs are p-integral with unit leading coefficients, so the
        // true gcd cannot have larger degree than its image.
        return Some(Polynomial::one());
    }
    let coeffs: Vec<Gq> = g
        .iter()
        .map(|c| Some(Gq::new(reconstruct(c.0)?, reconstruct(c.1)?)))
        .collect::<Option<_>>()?;
    let cand = Polynomial::new(coeffs);
    (a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some()).then_some(cand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn poly(roots: &[i64]) -> Polynomial {
        roots.iter().fold(Polynomial::one(), |acc, r| &acc * &Polynomial::linear_root(&Gq::from_int(*r)))
    }

    #[test]
    fn common_factor_is_recovered() {
        let a = &poly(&[1, 2, 2]) * &Polynomial::constant(Gq::from_frac(3, 7));
        let b = poly(&[2, 2, -5]);
        assert_eq!(modular_gcd(&a, &b), Some(poly(&[2, 2])));
    }

    #[test]
    fn coprime_gives_one() {
        assert_eq!(modular_gcd(&poly(&[1, 3]), &poly(&[0, 4])), Some(Polynomial::one()));
    }

    #[test]
    fn reconstruction_round_trip() {
        let x = BigRational::new((-355).into(), 113.into());
        assert_eq!(reconstruct(rat_mod(&x).unwrap()), Some(x));
        assert!(BigRational::zero() == reconstruct(0).unwrap());
    }
}
