use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::divisor::Divisor;
use crate::error::{MathError, Result};
use crate::laxalgebra::MarkedConfig;

/// `(D_m)_O = Σ_i (a_i·m + b_{m,i})·Q_i` with `b_{m,i}` periodic in `m`:
/// `b_{m,i} = b_table[m mod period][i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingPrescription {
    #[serde(with = "rat_list")]
    pub a: Vec<BigRational>,
    #[serde(with = "rat_table")]
    pub b_table: Vec<Vec<BigRational>>,
    #[serde(with = "rat_single")]
    pub bound: BigRational,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GradingPrescription {
    /// The standard choice for `N ≥ M`: poles `m+1` at `Q_1..Q_{M−1}` and
    /// `(N−M+1)(m+1)+g−1` at `Q_M`.
    pub fn standard(n: usize, m: usize, g: u32) -> Result<Self> {
        if n < m {
            return Err(MathError::Prescription(format!("standard prescription needs N >= M (N = {n}, M = {m})")));
        }
        let (n, mm, g) = (n as i64, m as i64, g as i64);
        let mut a = vec![int(1); m - 1];
        a.push(int(n - mm + 1));
        let mut b = vec![int(1); m - 1];
        b.push(int(n - mm + g));
        Ok(Self::with_bound(a, vec![b]))
    }

    /// The unique prescription for a single out-point: `(N·m + N + g − 1)·Q`.
    pub fn single_out(n: usize, g: u32) -> Self {
        let n = n as i64;
        Self::with_bound(vec![int(n)], vec![vec![int(n + g as i64 - 1)]])
    }

    /// Vector fields `e = f·d/dz` (divisor of `e` = divisor of `f` + 2·[∞]):
    /// poles `m+2` at `Q_1..Q_{M−1}` and `(N−M+1)(m+2)+3(g−1)` at `Q_M`, so that
    /// the O-degree is `N(m+2) + 3g − 3`.
    pub fn vector_fields(n: usize, m: usize, g: u32) -> Result<Self> {
        if n < m {
            return Err(MathError::Prescription(format!("vector field prescription needs N >= M (N = {n}, M = {m})")));
        }
        let (n, mm, g) = (n as i64, m as i64, g as i64);
        let mut a = vec![int(1); m - 1];
        a.push(int(n - mm + 1));
        let mut b = vec![int(2); m - 1];
        b.push(int(2 * (n - mm + 1) + 3 * (g - 1)));
        Ok(Self::with_bound(a, vec![b]))
    }

    pub fn custom(a: Vec<BigRational>, b_table: Vec<Vec<BigRational>>) -> Self {
        Self::with_bound(a, b_table)
    }

    fn with_bound(a: Vec<BigRational>, b_table: Vec<Vec<BigRational>>) -> Self {
        let max = b_table.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero);
        Self { a, b_table, bound: max + BigRational::one() }
    }

    pub fn period(&self) -> usize {
        self.b_table.len()
    }

    pub fn b(&self, m: i64, i: usize) -> &BigRational {
        &self.b_table[m.rem_euclid(self.period() as i64) as usize][i]
    }

    /// Coefficients `a_i·m + b_{m,i}`; validity is checked separately.
    pub fn o_coefficients(&self, m: i64) -> Vec<i64> {
        (0..self.a.len())
            .map(|i| {
                let v = &self.a[i] * int(m) + self.b(m, i);
                v.to_integer().to_i64().expect("coefficient fits in i64")
            })
            .collect()
    }

    /// Checks the defining conditions for `N` in-points, `M` out-points and genus `g`.
    pub fn validate(&self, n: usize, m: usize, g: u32) -> Result<()> {
        let fail = |c: String| Err(MathError::Prescription(c));
        if self.a.len() != m {
            return fail(format!("a has {} entries, expected M = {m}", self.a.len()));
        }
        if self.b_table.is_empty() || self.b_table.iter().any(|r| r.len() != m) {
            return fail(format!("every row of b must have M = {m} entries"));
        }
        let sum_a: BigRational = self.a.iter().sum();
        if sum_a != int(n as i64) {
            return fail(format!("sum of a_i = N violated: sum is {sum_a}, N = {n}"));
        }
        for (i, ai) in self.a.iter().enumerate() {
            if !ai.is_positive() {
                return fail(format!("a_i > 0 violated at i = {}", i + 1));
            }
        }
        let target = int(n as i64 + g as i64 - 1);
        for (k, row) in self.b_table.iter().enumerate() {
            let s: BigRational = row.iter().sum();
            if s != target {
                return fail(format!("sum of b_(m,i) = N+g-1 violated for m = {k} mod {}: sum is {s}", self.period()));
            }
            for (i, b) in row.iter().enumerate() {
                if b.abs() >= self.bound {
                    return fail(format!("|b_(m,i)| < B violated at m = {k} mod {}, i = {}", self.period(), i + 1));
                }
            }
        }
        // Integrality and monotonicity are periodic in m with period lcm(period, denominators).
        let mut l = BigInt::from(self.period());
        for ai in &self.a {
            l = l.lcm(ai.denom());
        }
        let l = l.to_i64().ok_or_else(|| MathError::Prescription("period too large".into()))?;
        for mm in 0..=l {
            for i in 0..m {
                let v = &self.a[i] * int(mm) + self.b(mm, i);
                if !v.is_integer() {
                    return fail(format!("a_i m + b_(m,i) integral violated at m = {mm}, i = {}", i + 1));
                }
            }
        }
        for mm in 0..l {
            let (c0, c1) = (self.o_coefficients(mm), self.o_coefficients(mm + 1));
            if let Some(i) = (0..m).find(|&i| c1[i] < c0[i]) {
                return fail(format!("(D_(m+1))_O > (D_m)_O violated at m = {mm}, i = {}", i + 1));
            }
        }
        Ok(())
    }

    /// `(D_m)_O` for the given out-points.
    pub fn o_part(&self, m: i64, out_points: &[crate::exactmath::Point]) -> Divisor {
        Divisor::from_pairs(out_points.iter().cloned().zip(self.o_coefficients(m)))
    }
}

/// `(D_m)_I + (D_m)_O = −m·Σ P_s + (D_m)_O`.
pub fn grading_divisor_io(m: i64, config: &MarkedConfig, prescription: &GradingPrescription) -> Divisor {
    let mut d = prescription.o_part(m, &config.out_points);
    for p in &config.in_points {
        d.add_at(p, -m);
    }
    d
}

/// `D_m = −m·Σ P_s + ε·Σ γ_s + Σ (a_i m + b_{m,i}) Q_i`; only points with `α_s ≠ 0` enter `D_W`.
pub fn grading_divisor(m: i64, config: &MarkedConfig, prescription: &GradingPrescription) -> Result<Divisor> {
    prescription.validate(config.n_in(), config.n_out(), config.genus)?;
    let mut d = grading_divisor_io(m, config, prescription);
    let eps = config.algebra.epsilon();
    for t in config.active_tyurin() {
        d.add_at(&t.gamma, eps);
    }
    Ok(d)
}

mod rat_single {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        String::deserialize(d)?.trim().parse().map_err(serde::de::Error::custom)
    }
}

mod rat_list {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(|v| v.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|v| v.trim().parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

mod rat_table {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        x.iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|r| r.iter().map(|v| v.trim().parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}
