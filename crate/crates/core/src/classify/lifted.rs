use num_traits::Zero;
use serde::Serialize;

use super::chevalley::{chevalley_basis, ChevalleyBasis};
use crate::cocycles::CocycleTable;
use crate::error::{MathError, Result};
use crate::exactmath::{Gq, Mat};
use crate::grading::{GradedBasis, Index};
use crate::laxalgebra::GBasis;

/// A combination `Σ c_k X_k` of graded basis elements.
pub type Lift = Vec<(Index, Gq)>;

/// `γ(Σ a_i X_i, Σ b_j X_j)` from a table.
pub fn pair_value(table: &CocycleTable, a: &[(Index, Gq)], b: &[(Index, Gq)]) -> Gq {
    let mut acc = Gq::zero();
    for (i, x) in a {
        for (j, y) in b {
            let v = table.get(*i, *j);
            if !v.is_zero() {
                acc += &(&(x * y) * &v);
            }
        }
    }
    acc
}

/// A Chevalley basis of `g` in the coordinates of the algebra's matrix basis.
/// Lifting `X ∈ g` to degree `n` at `P_s` means `Σ_u c_u X^u_{n,s}` for
/// `X = Σ_u c_u X^u`.
#[derive(Clone, Debug, Serialize)]
pub struct ChevalleyCoords {
    pub chevalley: ChevalleyBasis,
    /// Row `k`: the `k`-th element of [`ChevalleyBasis::elements`] in `g` coordinates.
    #[serde(skip)]
    to_g: Vec<Vec<Gq>>,
    /// Row `u`: `X^u` in Chevalley coordinates.
    #[serde(skip)]
    from_g: Vec<Vec<Gq>>,
    #[serde(skip)]
    g_basis: GBasis,
}

impl ChevalleyCoords {
    pub fn new(basis: &GradedBasis) -> Result<Self> {
        let chevalley = chevalley_basis(&basis.config.algebra)?;
        let g_basis = basis.g_basis.clone();
        let to_g: Vec<Vec<Gq>> = chevalley
            .elements()
            .iter()
            .map(|x| g_basis.coords(x).ok_or_else(|| MathError::Family("Chevalley element outside g".into())))
            .collect::<Result<_>>()?;
        if to_g.len() != g_basis.dim() {
            return Err(MathError::Family("Chevalley basis does not span g".into()));
        }
        let inv = Mat::from_rows(to_g.clone())
            .inverse()
            .ok_or_else(|| MathError::Family("Chevalley basis is dependent".into()))?;
        let r = g_basis.dim();
        let from_g = (0..r).map(|u| (0..r).map(|k| inv.get(u, k).clone()).collect()).collect();
        Ok(Self { chevalley, to_g, from_g, g_basis })
    }

    pub fn dim(&self) -> usize {
        self.to_g.len()
    }

    pub fn n_positive(&self) -> usize {
        self.chevalley.positive_roots.len()
    }

    /// Flat index of `E^{α_i}` (`positive`) or `E^{−α_i}` in [`ChevalleyBasis::elements`].
    pub fn e_index(&self, i: usize, positive: bool) -> usize {
        if positive {
            i
        } else {
            self.n_positive() + i
        }
    }

    /// Flat index of `H^j` for the `j`-th simple root.
    pub fn h_index(&self, j: usize) -> usize {
        2 * self.n_positive() + j
    }

    /// Position of the `j`-th simple root among the positive roots.
    pub fn simple_position(&self, j: usize) -> usize {
        let r = &self.chevalley.simple_roots[j];
        self.chevalley.positive_roots.iter().position(|p| p == r).expect("simple roots are positive")
    }

    /// Lift of an arbitrary `X ∈ g`.
    pub fn lift_matrix(&self, x: &Mat, n: i64, s: usize) -> Result<Lift> {
        let c = self.g_basis.coords(x).ok_or_else(|| MathError::Family("matrix outside g".into()))?;
        Ok(c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(u, v)| ((n, s, u), v)).collect())
    }

    /// Lift of the `k`-th Chevalley element.
    pub fn lift(&self, k: usize, n: i64, s: usize) -> Lift {
        self.to_g[k].iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(u, v)| ((n, s, u), v.clone())).collect()
    }

    /// Lift of `H^α` for the `i`-th positive root.
    pub fn lift_h_root(&self, i: usize, n: i64, s: usize) -> Lift {
        self.lift_matrix(&self.chevalley.h_root[i], n, s).expect("coroots lie in g")
    }

    /// Values on the Chevalley lifts at `(n, s)` converted to values on `X^u_{n,s}`.
    pub fn to_g_values(&self, chev: &[Gq]) -> Vec<Gq> {
        self.from_g
            .iter()
            .map(|row| row.iter().zip(chev).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }
}
