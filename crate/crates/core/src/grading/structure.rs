use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::basis::{Decomposition, GradedBasis, Index};
use crate::error::{MathError, Result};
use crate::exactmath::Gq;
use crate::laxalgebra::{Family, LaxElement};

/// Sparse bracket tensor `[X_a, X_b] = Σ c·X_h` for pairs inside the window.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub window: (i64, i64),
    pub tensor: BTreeMap<(Index, Index), Decomposition>,
    pub observed_s: i64,
    /// Pairs skipped because their bracket would need degrees outside the window.
    pub excluded: usize,
}

#[derive(Serialize)]
struct Term<'a> {
    h: i64,
    t: usize,
    w: usize,
    c: &'a Gq,
}

#[derive(Serialize)]
struct Record<'a> {
    left: [i64; 3],
    right: [i64; 3],
    terms: Vec<Term<'a>>,
}

pub(crate) fn idx_json(k: &Index) -> [i64; 3] {
    [k.0, k.1 as i64 + 1, k.2 as i64 + 1]
}

impl StructureConstants {
    pub fn bracket(&self, a: Index, b: Index) -> Option<&Decomposition> {
        self.tensor.get(&(a, b))
    }

    /// Records `{left, right, terms}` with 1-based point and basis indices.
    pub fn to_json(&self) -> serde_json::Value {
        let recs: Vec<Record> = self
            .tensor
            .iter()
            .map(|((a, b), d)| Record {
                left: idx_json(a),
                right: idx_json(b),
                terms: d.terms.iter().map(|(k, c)| Term { h: k.0, t: k.1 + 1, w: k.2 + 1, c }).collect(),
            })
            .collect();
        serde_json::to_value(recs).expect("serializable")
    }
}

/// Brackets of all basis pairs `(m, k)` with `lo ≤ m + k` and `m + k + margin ≤ hi`.
pub fn structure_constants(basis: &GradedBasis, margin: i64) -> Result<StructureConstants> {
    let (lo, hi) = basis.window;
    let idx = basis.indices();
    let mut pairs = Vec::new();
    let mut excluded = 0;
    for a in &idx {
        for b in &idx {
            let l = a.0 + b.0;
            if l >= lo && l + margin <= hi {
                pairs.push((*a, *b));
            } else {
                excluded += 1;
            }
        }
    }
    let results: Vec<Result<((Index, Index), Decomposition)>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let br = basis.element(a).commutator(basis.element(b));
            let d = basis.decompose(&br).map_err(|e| {
                MathError::Window(format!("bracket of {:?} and {:?}: {e}", idx_json(&a), idx_json(&b)))
            })?;
            Ok(((a, b), d))
        })
        .collect();
    let mut tensor = BTreeMap::new();
    let mut observed_s = 0;
    for r in results {
        let ((a, b), d) = r?;
        for k in d.terms.keys() {
            let shift = k.0 - (a.0 + b.0);
            if shift < 0 {
                return Err(MathError::Window(format!(
                    "bracket of {:?} and {:?} has a component below degree {}",
                    idx_json(&a),
                    idx_json(&b),
                    a.0 + b.0
                )));
            }
            observed_s = observed_s.max(shift);
        }
        tensor.insert((a, b), d);
    }
    Ok(StructureConstants { window: basis.window, tensor, observed_s, excluded })
}

/// Structure constants with the smallest margin whose brackets all fit.
pub fn fitted_structure_constants(basis: &GradedBasis) -> Result<StructureConstants> {
    let (lo, hi) = basis.window;
    let mut last = None;
    for margin in 0..=(hi - lo).max(0) {
        match structure_constants(basis, margin) {
            Ok(sc) => return Ok(sc),
            Err(e @ MathError::Window(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| MathError::Window("empty window".into())))
}

/// Checks that the degree-`m+k` part of `[X^u_{m,s}, X^v_{k,p}]` is
/// `[X^u, X^v]_{m+k,s}·δ_s^p`; returns the first violating pair.
pub fn check_fine_structure(basis: &GradedBasis, sc: &StructureConstants) -> std::result::Result<(), String> {
    for ((a, b), d) in &sc.tensor {
        let lead = basis.g_basis.elements[a.2].commutator(&basis.g_basis.elements[b.2]);
        let want = if a.1 == b.1 { basis.g_basis.coords(&lead).expect("bracket in g") } else { vec![Gq::zero(); basis.dim_g()] };
        for t in 0..basis.n_in() {
            for (w, c) in want.iter().enumerate() {
                let got = d.terms.get(&(a.0 + b.0, t, w)).cloned().unwrap_or_else(Gq::zero);
                let expect = if t == a.1 { c.clone() } else { Gq::zero() };
                if got != expect {
                    return Err(format!(
                        "[{:?}, {:?}] has coefficient {got} at {:?}, expected {expect}",
                        idx_json(a),
                        idx_json(b),
                        idx_json(&(a.0 + b.0, t, w))
                    ));
                }
            }
        }
    }
    Ok(())
}

/// `X = Σ c·[Y, Z]` for each basis element `X` of a simple `g`: `E^α = ½[H^α, E^α]`,
/// `E^{−α} = −½[H^α, E^{−α}]`, `H^i = [E^{α_i}, E^{−α_i}]`; returned as
/// `(coeff, y_coords, z_index)` with `Z` a basis element.
fn commutator_presentations(basis: &GradedBasis) -> Result<Vec<Vec<(Gq, Vec<Gq>, usize)>>> {
    if matches!(basis.config.algebra.family, Family::Gl | Family::S) {
        return Err(MathError::Family("commutator approximation needs a simple algebra".into()));
    }
    let c = crate::classify::chevalley_basis(&basis.config.algebra)?;
    let np = c.positive_roots.len();
    let g = &basis.g_basis;
    let half = Gq::from_frac(1, 2);
    let mut out = Vec::new();
    for u in 0..g.dim() {
        let pres = if u < np {
            vec![(half.clone(), g.coords(&c.h_root[u]).unwrap(), u)]
        } else if u < 2 * np {
            vec![(-half.clone(), g.coords(&c.h_root[u - np]).unwrap(), u)]
        } else {
            let i = u - 2 * np;
            let k = c.positive_roots.iter().position(|r| *r == c.simple_roots[i]).unwrap();
            vec![(Gq::one(), g.coords(&c.e_pos[k]).unwrap(), np + k)]
        };
        out.push(pres);
    }
    Ok(out)
}

/// Pairs `(y¹_i, y²_i)` with `y − Σ[y¹_i, y²_i]` of order `≥ m` at every in-point.
pub fn commutator_approximation(y: &LaxElement, m: i64, basis: &GradedBasis) -> Result<Vec<(LaxElement, LaxElement)>> {
    let pres = commutator_presentations(basis)?;
    let mut rest = y.clone();
    let mut pairs = Vec::new();
    loop {
        let d = basis.decompose(&rest)?;
        let Some(&(k, _, _)) = d.terms.keys().next() else { break };
        if k >= m {
            break;
        }
        let mut step = Vec::new();
        for (&(kk, s, u), c) in d.terms.range((k, 0, 0)..(k + 1, 0, 0)) {
            debug_assert_eq!(kk, k);
            for (coef, ycoords, z) in &pres[u] {
                let y0 = basis.combine(&ycoords.iter().enumerate().map(|(v, x)| ((0, s, v), x.clone())).collect::<Vec<_>>());
                let z1 = basis.element((k, s, *z)).scale(&(coef * c));
                step.push((y0, z1));
            }
        }
        for (a, b) in &step {
            rest = &rest - &a.commutator(b);
        }
        let next = basis.decompose(&rest)?.terms.keys().next().map(|t| t.0);
        if let Some(n) = next {
            if n <= k {
                return Err(MathError::NoSolution(format!("peeling did not raise the degree at {k}")));
            }
        }
        pairs.extend(step);
    }
    Ok(pairs)
}
