//! Exact elimination over ℚ(i): row echelon forms, kernels, affine solves and
//! an incremental sparse basis for rank computations on long vectors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::scalar::Gq;

/// Reduced row echelon form of `rows` (each of length `ncols`), in place.
/// Returns the pivot columns; zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Gq>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Gq>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Kernel basis of the linear map given by `rows`, one vector per free column,
/// in increasing free-column order (free variable set to 1, the others to 0).
pub fn kernel(rows: &[Vec<Gq>], ncols: usize) -> Vec<Vec<Gq>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    kernel_from_rref(&m, &pivots, ncols)
}

fn kernel_from_rref(m: &[Vec<Gq>], pivots: &[usize], ncols: usize) -> Vec<Vec<Gq>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Gq::zero(); ncols];
            v[f] = Gq::one();
            for (row, &p) in m.iter().zip(pivots) {
                if !row[f].is_zero() {
                    v[p] = -&row[f];
                }
            }
            v
        })
        .collect()
}

/// Solution set of `rows · x = rhs`: a particular solution (free variables
/// zero) and a kernel basis, or `None` if inconsistent.
pub fn solve_affine(rows: &[Vec<Gq>], rhs: &[Gq], ncols: usize) -> Option<(Vec<Gq>, Vec<Vec<Gq>>)> {
    assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<Vec<Gq>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Gq::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    let kernel = kernel_from_rref(&aug, &pivots, ncols);
    Some((x, kernel))
}

/// Multiply a dense matrix with a vector.
pub fn mat_vec(rows: &[Vec<Gq>], x: &[Gq]) -> Vec<Gq> {
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(x)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

pub type SparseVec = BTreeMap<usize, Gq>;

/// An incrementally built echelon basis of sparse vectors.
///
/// Each stored row has leading entry 1 at its pivot.
#[derive(Default, Clone, Debug)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the stored rows.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).map(|(&k, _)| k).find(|k| self.rows.contains_key(k));
            let Some(k) = next else { break };
            let f = v[&k].clone();
            for (&j, x) in &self.rows[&k] {
                let e = v.entry(j).or_insert_with(Gq::zero);
                *e -= &(&f * x);
                if e.is_zero() {
                    v.remove(&j);
                }
            }
            cursor = k + 1;
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        let Some((&p, lead)) = v.iter().next() else {
            return false;
        };
        let inv = lead.inv().unwrap();
        let v: SparseVec = v.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
        self.rows.insert(p, v);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}
