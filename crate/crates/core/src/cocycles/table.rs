use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::Cocycle;
use crate::error::{MathError, Result};
use crate::exactmath::linalg::{solve_affine, SparseEchelon, SparseVec};
use crate::exactmath::Gq;
use crate::grading::{idx_json, GradedBasis, Index, StructureConstants};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableMeta {
    pub label: String,
    /// Largest level `n + m` with a nonzero value, when certified within the window.
    pub bounded_above: Option<i64>,
    pub bounded_below: Option<i64>,
    pub local: bool,
    pub upper_bound_zero: bool,
    pub identically_zero: bool,
    pub antisymmetric: bool,
    pub verdict: String,
}

/// Values `γ(X_a, X_b)` for all ordered pairs of basis elements in the window;
/// pairs not listed are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTable {
    pub window: (i64, i64),
    pub values: BTreeMap<(Index, Index), Gq>,
    pub meta: TableMeta,
}

#[derive(Serialize)]
struct Entry<'a> {
    pair: [[i64; 3]; 2],
    value: &'a Gq,
}

impl CocycleTable {
    pub fn get(&self, a: Index, b: Index) -> Gq {
        self.values.get(&(a, b)).cloned().unwrap_or_else(Gq::zero)
    }

    /// Nonzero levels `n + m`, ascending.
    pub fn levels(&self) -> Vec<i64> {
        let mut l: Vec<i64> = self.values.keys().map(|(a, b)| a.0 + b.0).collect();
        l.sort_unstable();
        l.dedup();
        l
    }

    /// `Σ c_i·T_i` over tables sharing a window.
    pub fn combine(label: impl Into<String>, terms: &[(Gq, &CocycleTable)]) -> Result<CocycleTable> {
        let window = terms.first().map(|t| t.1.window).ok_or_else(|| MathError::Window("empty combination".into()))?;
        let mut values: BTreeMap<(Index, Index), Gq> = BTreeMap::new();
        for (c, t) in terms {
            if t.window != window {
                return Err(MathError::Window("tables have different windows".into()));
            }
            for (k, v) in &t.values {
                *values.entry(*k).or_insert_with(Gq::zero) += &(c * v);
            }
        }
        values.retain(|_, v| !v.is_zero());
        let antisymmetric = terms.iter().all(|t| t.1.meta.antisymmetric);
        let mut t = CocycleTable { window, values, meta: TableMeta { label: label.into(), antisymmetric, ..Default::default() } };
        classify_bounds(&mut t);
        Ok(t)
    }

    /// `{pair: [[m,s,u],[k,r,v]], value}` records (1-based point and basis
    /// indices, nonzero values only) plus the meta block.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Entry> =
            self.values.iter().map(|((a, b), v)| Entry { pair: [idx_json(a), idx_json(b)], value: v }).collect();
        serde_json::json!({
            "window": [self.window.0, self.window.1],
            "meta": self.meta,
            "values": entries,
        })
    }
}

/// Evaluates `gamma` on every ordered pair of basis elements.
pub fn cocycle_table(gamma: &dyn Cocycle, basis: &GradedBasis) -> Result<CocycleTable> {
    let idx = basis.indices();
    let pairs: Vec<(Index, Index)> = idx.iter().flat_map(|a| idx.iter().map(move |b| (*a, *b))).collect();
    let vals: Vec<Result<((Index, Index), Gq)>> = pairs
        .par_iter()
        .map(|&(a, b)| Ok(((a, b), gamma.eval(basis.element(a), basis.element(b))?)))
        .collect();
    let mut values = BTreeMap::new();
    for v in vals {
        let (k, x) = v?;
        if !x.is_zero() {
            values.insert(k, x);
        }
    }
    let antisymmetric = values.iter().all(|((a, b), v)| values.get(&(*b, *a)).is_some_and(|w| *w == -v.clone()));
    let mut t = CocycleTable {
        window: basis.window,
        values,
        meta: TableMeta { label: gamma.label(), antisymmetric, ..Default::default() },
    };
    classify_bounds(&mut t);
    Ok(t)
}

/// Window-relative bounds: a level bound is certified only when at least half
/// the window width of empty levels separates it from the edge of the range
/// of levels the window samples.
pub fn classify_bounds(table: &mut CocycleTable) -> &TableMeta {
    let (lo, hi) = table.window;
    let band = ((hi - lo) / 2).max(1);
    let levels = table.levels();
    let m = &mut table.meta;
    m.identically_zero = levels.is_empty();
    if let (Some(&r2), Some(&r1)) = (levels.first(), levels.last()) {
        m.bounded_above = (r1 + band <= 2 * hi).then_some(r1);
        m.bounded_below = (r2 - band >= 2 * lo).then_some(r2);
    } else {
        m.bounded_above = None;
        m.bounded_below = None;
    }
    m.local = m.identically_zero || (m.bounded_above.is_some() && m.bounded_below.is_some());
    m.upper_bound_zero = m.identically_zero || m.bounded_above.is_some_and(|r| r <= 0);
    m.verdict = if m.identically_zero {
        "zero within window".into()
    } else {
        match (m.bounded_above, m.bounded_below) {
            (Some(_), Some(_)) => "local within window",
            (Some(_), None) => "bounded above within window",
            (None, Some(_)) => "bounded below within window",
            (None, None) => "inconclusive within window",
        }
        .into()
    };
    m
}

/// A functional `φ` on the windowed basis with `γ = φ([·,·])` on the tested pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoboundaryWitness {
    pub phi: BTreeMap<String, Gq>,
    #[serde(skip)]
    pub values: BTreeMap<Index, Gq>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoboundaryResult {
    pub witness: Option<CoboundaryWitness>,
    /// Pairs whose bracket decomposes inside the window.
    pub equations: usize,
    /// Pairs left out because their bracket leaves the window.
    pub excluded: usize,
}

fn check_windows(table: &CocycleTable, basis: &GradedBasis, sc: &StructureConstants) -> Result<()> {
    if table.window != basis.window || sc.window != basis.window {
        return Err(MathError::Window("table, basis and structure constants must share a window".into()));
    }
    Ok(())
}

/// Solves `φ([X_a, X_b]) = γ(X_a, X_b)` over the pairs covered by `sc`.
pub fn coboundary_solve(table: &CocycleTable, basis: &GradedBasis, sc: &StructureConstants) -> Result<CoboundaryResult> {
    check_windows(table, basis, sc)?;
    let idx = basis.indices();
    let pos: BTreeMap<Index, usize> = idx.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut rows = Vec::with_capacity(sc.tensor.len());
    let mut rhs = Vec::with_capacity(sc.tensor.len());
    for ((a, b), d) in &sc.tensor {
        let mut row = vec![Gq::zero(); idx.len()];
        for (h, c) in &d.terms {
            row[pos[h]] = c.clone();
        }
        rows.push(row);
        rhs.push(table.get(*a, *b));
    }
    let excluded = idx.len() * idx.len() - sc.tensor.len();
    let witness = solve_affine(&rows, &rhs, idx.len()).map(|(x, _)| {
        let values: BTreeMap<Index, Gq> =
            idx.iter().zip(x).filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v)).collect();
        let phi = values.iter().map(|(k, v)| (format!("{:?}", idx_json(k)), v.clone())).collect();
        CoboundaryWitness { phi, values }
    });
    Ok(CoboundaryResult { witness, equations: rows.len(), excluded })
}

/// Rank of the value vectors; with `modulo_coboundaries`, of their images in
/// the quotient by the in-window coboundaries (vectors restricted to the
/// pairs covered by `sc`).
pub fn rank_of_classes(
    tables: &[&CocycleTable],
    modulo_coboundaries: bool,
    basis: &GradedBasis,
    sc: &StructureConstants,
) -> Result<usize> {
    for t in tables {
        check_windows(t, basis, sc)?;
    }
    let pairs: Vec<(Index, Index)> = if modulo_coboundaries {
        sc.tensor.keys().copied().collect()
    } else {
        let idx = basis.indices();
        idx.iter().flat_map(|a| idx.iter().map(move |b| (*a, *b))).collect()
    };
    let col: BTreeMap<(Index, Index), usize> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut ech = SparseEchelon::new();
    if modulo_coboundaries {
        // δφ_h for each basis functional: the coefficient of X_h in each bracket
        let mut per_h: BTreeMap<Index, SparseVec> = BTreeMap::new();
        for (pair, d) in &sc.tensor {
            for (h, c) in &d.terms {
                per_h.entry(*h).or_default().insert(col[pair], c.clone());
            }
        }
        for v in per_h.into_values() {
            ech.insert(v);
        }
    }
    let base = ech.rank();
    for t in tables {
        let v: SparseVec = t.values.iter().filter_map(|(p, x)| col.get(p).map(|&i| (i, x.clone()))).collect();
        ech.insert(v);
    }
    Ok(ech.rank() - base)
}
