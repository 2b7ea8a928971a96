//! Algebra families, Tyurin data and marked configurations.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::classify::chevalley_basis;
use crate::error::{MathError, Result};
use crate::exactmath::linalg::rref;
use crate::exactmath::{Gq, Mat, Point, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl,
    Sl,
    S,
    So,
    Sp,
}

/// `g ⊂ gl(size)`. For sp, `n` is half the matrix size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_matrix")]
    pub sigma: Option<Mat>,
}

impl AlgebraSpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self { family, n, sigma: None }
    }

    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::Sp => 2 * self.n,
            _ => self.n,
        }
    }

    /// Maximal pole order allowed at a weak singularity.
    pub fn epsilon(&self) -> i64 {
        if self.family == Family::Sp {
            2
        } else {
            1
        }
    }

    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.family {
            Family::Gl => n * n,
            Family::Sl => n * n - 1,
            Family::S => 1,
            Family::So => n * (n - 1) / 2,
            Family::Sp => n * (2 * n + 1),
        }
    }

    /// The symplectic form; the block form `[[0, I], [−I, 0]]` unless overridden.
    pub fn sigma(&self) -> Mat {
        if let Some(s) = &self.sigma {
            return s.clone();
        }
        standard_sigma(self.n)
    }

    /// `T` with `T^t σ T` the standard block form, or `None` when σ is standard.
    pub fn symplectic_change(&self) -> Option<Mat> {
        let s = self.sigma.as_ref()?;
        if *s == standard_sigma(self.n) {
            return None;
        }
        Some(darboux_basis(s))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(MathError::Config(m.to_string()));
        match self.family {
            Family::Sl if self.n < 2 => return bad("sl(n) needs n >= 2"),
            Family::So if self.n < 3 => return bad("so(n) needs n >= 3"),
            _ if self.n == 0 => return bad("matrix size must be positive"),
            _ => {}
        }
        if self.family == Family::Sp {
            let s = self.sigma();
            let m = self.matrix_size();
            if s.rows() != m || s.cols() != m {
                return bad("sigma has the wrong size");
            }
            if s.transpose() != -&s {
                return bad("sigma is not skew-symmetric");
            }
            if s.inverse().is_none() {
                return bad("sigma is singular");
            }
        } else if self.sigma.is_some() {
            return bad("sigma is only meaningful for sp");
        }
        Ok(())
    }

    /// Whether a constant matrix lies in `g`.
    pub fn contains(&self, x: &Mat) -> bool {
        let m = self.matrix_size();
        if x.rows() != m || x.cols() != m {
            return false;
        }
        match self.family {
            Family::Gl => true,
            Family::Sl => x.trace().is_zero(),
            Family::S => *x == Mat::identity(m).scale(x.get(0, 0)),
            Family::So => x.transpose() == -x,
            Family::Sp => {
                let s = self.sigma();
                (&(&x.transpose() * &s) + &(&s * x)).is_zero()
            }
        }
    }

    /// The ordered basis `{X^u}` of `g`: the Chevalley basis for simple families,
    /// `I` for `s`, and `I` followed by the sl(n) Chevalley basis for gl.
    pub fn basis(&self) -> Result<GBasis> {
        let m = self.matrix_size();
        let (elements, labels) = match self.family {
            Family::S => (vec![Mat::identity(m)], vec!["I".to_string()]),
            Family::Gl if self.n == 1 => (vec![Mat::identity(1)], vec!["I".to_string()]),
            Family::Gl => {
                let sl = AlgebraSpec::new(Family::Sl, self.n).basis()?;
                let mut e = vec![Mat::identity(m)];
                e.extend(sl.elements);
                let mut l = vec!["I".to_string()];
                l.extend(sl.labels);
                (e, l)
            }
            _ => {
                let c = chevalley_basis(self)?;
                let mut labels = Vec::new();
                for r in &c.positive_roots {
                    labels.push(format!("E{r:?}"));
                }
                for r in &c.positive_roots {
                    labels.push(format!("F{r:?}"));
                }
                for i in 0..c.h_simple.len() {
                    labels.push(format!("H{}", i + 1));
                }
                (c.elements(), labels)
            }
        };
        GBasis::new(elements, labels)
    }

    /// Basis of the space the connection form takes values in: all of gl for
    /// gl, sl and s (the residue has trace one), and `g` itself for so and sp.
    pub fn connection_basis(&self) -> Result<GBasis> {
        match self.family {
            Family::So | Family::Sp => self.basis(),
            _ => {
                let m = self.matrix_size();
                let mut e = Vec::new();
                let mut l = Vec::new();
                for i in 0..m {
                    for j in 0..m {
                        e.push(Mat::unit(m, i, j));
                        l.push(format!("E{}{}", i + 1, j + 1));
                    }
                }
                GBasis::new(e, l)
            }
        }
    }
}

fn standard_sigma(n: usize) -> Mat {
    let mut s = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        s.set(k, n + k, Gq::one());
        s.set(n + k, k, -Gq::one());
    }
    s
}

/// Symplectic Gram–Schmidt: columns `e_1..e_n, f_1..f_n` with `e_k^t σ f_k = 1`
/// and all other pairings zero.
fn darboux_basis(sigma: &Mat) -> Mat {
    let m = sigma.rows();
    let n = m / 2;
    let form = |u: &[Gq], v: &[Gq]| -> Gq {
        let sv = sigma.mul_vec(v);
        u.iter().zip(&sv).map(|(a, b)| a * b).sum()
    };
    let mut pool: Vec<Vec<Gq>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Gq::one() } else { Gq::zero() }).collect())
        .collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    while es.len() < n {
        let e = pool.remove(0);
        let k = pool.iter().position(|v| !form(&e, v).is_zero()).expect("nondegenerate form");
        let f0 = pool.remove(k);
        let c = form(&e, &f0);
        let f: Vec<Gq> = f0.iter().map(|x| x / &c).collect();
        // Project the rest onto the σ-complement of span(e, f).
        pool = pool
            .into_iter()
            .map(|v| {
                let a = form(&v, &f);
                let b = form(&e, &v);
                v.iter()
                    .zip(e.iter().zip(&f))
                    .map(|(x, (ei, fi))| &(x - &(&a * ei)) - &(&b * fi))
                    .collect()
            })
            .collect();
        es.push(e);
        fs.push(f);
    }
    let mut t = Mat::zeros(m, m);
    for (k, v) in es.iter().chain(&fs).enumerate() {
        for (i, x) in v.iter().enumerate() {
            t.set(i, k, x.clone());
        }
    }
    t
}

/// An ordered basis of a matrix Lie algebra with a coordinate map.
#[derive(Clone, Debug)]
pub struct GBasis {
    pub elements: Vec<Mat>,
    pub labels: Vec<String>,
    size: usize,
    /// Entry positions read to recover coordinates.
    pivots: Vec<(usize, usize)>,
    /// Inverse of the basis restricted to `pivots`.
    inverse: Mat,
}

impl GBasis {
    pub fn new(elements: Vec<Mat>, labels: Vec<String>) -> Result<Self> {
        let r = elements.len();
        let size = elements[0].rows();
        let mut rows: Vec<Vec<Gq>> = elements.iter().map(|x| x.entries().to_vec()).collect();
        let piv = rref(&mut rows, size * size);
        if piv.len() != r {
            return Err(MathError::Family("basis elements are linearly dependent".into()));
        }
        let pivots: Vec<(usize, usize)> = piv.iter().map(|&k| (k / size, k % size)).collect();
        let sub = Mat::from_rows(
            pivots
                .iter()
                .map(|&(i, j)| elements.iter().map(|x| x.get(i, j).clone()).collect())
                .collect(),
        );
        let inverse = sub.inverse().expect("pivot minor is invertible");
        Ok(Self { elements, labels, size, pivots, inverse })
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.size
    }

    /// Coordinates of `x`, or `None` if `x` is outside the span.
    pub fn coords(&self, x: &Mat) -> Option<Vec<Gq>> {
        let v: Vec<Gq> = self.pivots.iter().map(|&(i, j)| x.get(i, j).clone()).collect();
        let c = self.inverse.mul_vec(&v);
        (self.combine(&c) == *x).then_some(c)
    }

    pub fn combine(&self, c: &[Gq]) -> Mat {
        let mut out = Mat::zeros(self.size, self.size);
        for (x, e) in c.iter().zip(&self.elements) {
            if !x.is_zero() {
                out = &out + &e.scale(x);
            }
        }
        out
    }

    /// Coordinates of a matrix of functions assumed to lie in the span pointwise.
    pub fn coords_fn(&self, entries: &[RationalFunction]) -> Vec<RationalFunction> {
        (0..self.dim())
            .map(|u| {
                self.pivots.iter().enumerate().fold(RationalFunction::zero(), |acc, (k, &(i, j))| {
                    let c = self.inverse.get(u, k);
                    if c.is_zero() {
                        acc
                    } else {
                        &acc + &entries[i * self.size + j].scale(c)
                    }
                })
            })
            .collect()
    }

    /// The matrix entries of `Σ_u f_u X^u`.
    pub fn combine_fn(&self, coords: &[RationalFunction]) -> Vec<RationalFunction> {
        let m = self.size;
        (0..m * m)
            .map(|k| {
                coords.iter().zip(&self.elements).fold(RationalFunction::zero(), |acc, (f, e)| {
                    let c = &e.entries()[k];
                    if c.is_zero() || f.is_zero() {
                        acc
                    } else {
                        &acc + &f.scale(c)
                    }
                })
            })
            .collect()
    }
}

/// A weak singularity `γ` with its Tyurin vector `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TyurinPoint {
    pub gamma: Point,
    pub alpha: Vec<Gq>,
}

impl TyurinPoint {
    pub fn is_active(&self) -> bool {
        self.alpha.iter().any(|x| !x.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedConfig {
    #[serde(default)]
    pub genus: u32,
    pub in_points: Vec<Point>,
    pub out_points: Vec<Point>,
    #[serde(default)]
    pub tyurin: Vec<TyurinPoint>,
    pub algebra: AlgebraSpec,
}

impl MarkedConfig {
    pub fn n_in(&self) -> usize {
        self.in_points.len()
    }

    pub fn n_out(&self) -> usize {
        self.out_points.len()
    }

    /// `A = I ∪ O`.
    pub fn marked_points(&self) -> impl Iterator<Item = &Point> {
        self.in_points.iter().chain(&self.out_points)
    }

    /// Tyurin points with `α ≠ 0`.
    pub fn active_tyurin(&self) -> impl Iterator<Item = &TyurinPoint> {
        self.tyurin.iter().filter(|t| t.is_active())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(MathError::Config(m));
        if self.genus != 0 {
            return bad(format!("genus must be 0, got {}", self.genus));
        }
        if self.in_points.is_empty() {
            return bad("in_points must be non-empty".into());
        }
        if self.out_points.is_empty() {
            return bad("out_points must be non-empty".into());
        }
        self.algebra.validate()?;
        let mut seen = BTreeSet::new();
        for p in self.marked_points().chain(self.tyurin.iter().map(|t| &t.gamma)) {
            if !seen.insert(p.clone()) {
                return bad(format!("point {p} appears twice among I, O and the Tyurin points"));
            }
        }
        let m = self.algebra.matrix_size();
        for (k, t) in self.tyurin.iter().enumerate() {
            if t.alpha.len() != m {
                return bad(format!("tyurin[{k}].alpha has length {}, expected {m}", t.alpha.len()));
            }
            if self.algebra.family == Family::So {
                let q: Gq = t.alpha.iter().map(|x| x * x).sum();
                if !q.is_zero() {
                    return bad(format!("tyurin[{k}].alpha is not isotropic (alpha^t alpha = {q})"));
                }
            }
        }
        Ok(())
    }
}

mod opt_matrix {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactmath::{Gq, Mat};

    pub fn serialize<S: Serializer>(m: &Option<Mat>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref()
            .map(|m| {
                (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect::<Vec<Gq>>())
                    .collect::<Vec<_>>()
            })
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Mat>, D::Error> {
        let rows = Option::<Vec<Vec<Gq>>>::deserialize(d)?;
        match rows {
            None => Ok(None),
            Some(r) => {
                if r.is_empty() || r.iter().any(|row| row.len() != r[0].len()) {
                    return Err(serde::de::Error::custom("sigma must be a rectangular matrix"));
                }
                Ok(Some(Mat::from_rows(r)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_match_bases() {
        for (f, n) in [
            (Family::Gl, 1),
            (Family::Gl, 2),
            (Family::Gl, 3),
            (Family::Sl, 2),
            (Family::S, 3),
            (Family::So, 4),
            (Family::Sp, 2),
        ] {
            let s = AlgebraSpec::new(f, n);
            let b = s.basis().unwrap();
            assert_eq!(b.dim(), s.dim(), "{f:?}({n})");
            for x in &b.elements {
                assert!(s.contains(x));
                assert_eq!(b.coords(x).map(|c| b.combine(&c)), Some(x.clone()));
            }
        }
    }

    #[test]
    fn coords_reject_outside() {
        let b = AlgebraSpec::new(Family::Sl, 2).basis().unwrap();
        assert!(b.coords(&Mat::identity(2)).is_none());
    }

    #[test]
    fn custom_sigma_darboux() {
        let sigma = Mat::from_ints(&[&[0, 2], &[-2, 0]]);
        let spec = AlgebraSpec { family: Family::Sp, n: 1, sigma: Some(sigma.clone()) };
        let t = spec.symplectic_change().unwrap();
        assert_eq!(&(&t.transpose() * &sigma) * &t, standard_sigma(1));
        let b = spec.basis().unwrap();
        for x in &b.elements {
            assert!(spec.contains(x));
        }
    }

    #[test]
    fn config_validation_names_problem() {
        let cfg = MarkedConfig {
            genus: 0,
            in_points: vec![Point::from(0)],
            out_points: vec![Point::Infinity],
            tyurin: vec![TyurinPoint { gamma: Point::from(1), alpha: vec![Gq::one(), Gq::zero(), Gq::zero(), Gq::zero()] }],
            algebra: AlgebraSpec::new(Family::So, 4),
        };
        let e = cfg.validate().unwrap_err().to_string();
        assert!(e.contains("isotropic"), "{e}");
        let mut ok = cfg.clone();
        ok.tyurin[0].alpha = vec![Gq::one(), Gq::i(), Gq::zero(), Gq::zero()];
        ok.validate().unwrap();
        let mut dup = ok.clone();
        dup.tyurin[0].gamma = Point::from(0);
        assert!(dup.validate().is_err());
    }
}
