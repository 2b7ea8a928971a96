use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::lifted::{pair_value, ChevalleyCoords, Lift};
use super::Relation;
use crate::cocycles::{classify_bounds, CocycleTable, TableMeta};
use crate::error::{MathError, Result};
use crate::exactmath::Gq;
use crate::grading::{idx_json, Decomposition, GradedBasis, Index, StructureConstants};

/// A functional `Φ` on the graded basis, zero at degrees `≥ cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationMap {
    /// Nonzero values only.
    pub phi_values: BTreeMap<Index, Gq>,
    pub cutoff: i64,
}

#[derive(Serialize)]
struct PhiEntry<'a> {
    index: [i64; 3],
    value: &'a Gq,
}

impl NormalizationMap {
    pub fn eval(&self, d: &Decomposition) -> Gq {
        d.terms.iter().filter_map(|(k, c)| self.phi_values.get(k).map(|p| p * c)).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let phi: Vec<PhiEntry> =
            self.phi_values.iter().map(|(k, v)| PhiEntry { index: idx_json(k), value: v }).collect();
        serde_json::json!({ "cutoff": self.cutoff, "phi": phi })
    }
}

fn bracket_below(basis: &GradedBasis, sc: &StructureConstants, a: Index, b: Index, cut: i64) -> Result<Decomposition> {
    if let Some(d) = sc.bracket(a, b) {
        return Ok(d.clone());
    }
    basis.decompose_below(&basis.element(a).commutator(basis.element(b)), cut)
}

/// `δφ(X_a, X_b) = φ([X_a, X_b])` with `φ` zero above the window, on every pair
/// of level at least the window start.
pub fn coboundary_table(phi: &BTreeMap<Index, Gq>, basis: &GradedBasis, sc: &StructureConstants) -> Result<CocycleTable> {
    let map = NormalizationMap { phi_values: phi.clone(), cutoff: basis.window.1 + 1 };
    let values = evaluate_pairs(basis, sc, map.cutoff, |_, _, d| map.eval(d))?;
    let mut t = CocycleTable {
        window: basis.window,
        values,
        meta: TableMeta { label: "coboundary".into(), antisymmetric: true, ..Default::default() },
    };
    classify_bounds(&mut t);
    Ok(t)
}

fn evaluate_pairs(
    basis: &GradedBasis,
    sc: &StructureConstants,
    cut: i64,
    f: impl Fn(Index, Index, &Decomposition) -> Gq + Sync,
) -> Result<BTreeMap<(Index, Index), Gq>> {
    let lo = basis.window.0;
    let idx = basis.indices();
    let pairs: Vec<(Index, Index)> =
        idx.iter().flat_map(|a| idx.iter().map(move |b| (*a, *b))).filter(|(a, b)| a.0 + b.0 >= lo).collect();
    let vals: Vec<Result<((Index, Index), Gq)>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let d = bracket_below(basis, sc, a, b, cut)?;
            Ok(((a, b), f(a, b, &d)))
        })
        .collect();
    let mut out = BTreeMap::new();
    for v in vals {
        let (k, x) = v?;
        if !x.is_zero() {
            out.insert(k, x);
        }
    }
    Ok(out)
}

fn element(basis: &GradedBasis, l: &Lift) -> crate::laxalgebra::LaxElement {
    basis.combine(l)
}

/// `γ − δΦ` with `Φ` built by descending induction on the degree from
/// `Φ(E^{±α}_{n,s}) = ±½γ(H^α_{0,s}, E^{±α}_{n,s}) + Φ(Y)` and
/// `Φ(H^i_{n,s}) = γ(E^{α_i}_{0,s}, E^{−α_i}_{n,s}) + Φ(Z)`, where `Y` and `Z`
/// are the exact higher-degree remainders. The output keeps the pairs of
/// level at least the window start; the normalization conditions are checked
/// before returning.
pub fn normalize_cocycle(
    table: &CocycleTable,
    basis: &GradedBasis,
    sc: &StructureConstants,
    cutoff: i64,
) -> Result<(NormalizationMap, CocycleTable)> {
    let (lo, hi) = table.window;
    if table.window != basis.window {
        return Err(MathError::Window("table and basis windows differ".into()));
    }
    if lo > 0 || hi < 0 {
        return Err(MathError::Window("degree 0 must lie in the window".into()));
    }
    if cutoff > hi + 1 {
        return Err(MathError::Window(format!("cutoff {cutoff} needs degrees up to {}", cutoff - 1)));
    }
    if let Some(((a, b), _)) = table.values.iter().find(|((a, b), _)| a.0 + b.0 >= cutoff) {
        return Err(MathError::NoSolution(format!(
            "value at level {} is not below the cutoff {cutoff} ({:?}, {:?})",
            a.0 + b.0,
            idx_json(a),
            idx_json(b)
        )));
    }
    let cc = ChevalleyCoords::new(basis)?;
    let half = Gq::from_frac(1, 2);
    let np = cc.n_positive();
    let mut map = NormalizationMap { phi_values: BTreeMap::new(), cutoff };
    for n in (lo..cutoff).rev() {
        let jobs: Vec<(usize, usize)> = (0..basis.n_in()).flat_map(|s| (0..cc.dim()).map(move |k| (s, k))).collect();
        let vals: Vec<Result<Gq>> = jobs
            .par_iter()
            .map(|&(s, k)| {
                let (gamma_part, rest, what) = if k < 2 * np {
                    let (i, pos) = if k < np { (k, true) } else { (k - np, false) };
                    let sign = if pos { half.clone() } else { -half.clone() };
                    let h = cc.lift_h_root(i, 0, s);
                    let e = cc.lift(k, n, s);
                    let he = element(basis, &h).commutator(&element(basis, &e));
                    let y = &element(basis, &e) - &he.scale(&sign);
                    (&sign * &pair_value(table, &h, &e), y, format!("E^{}{:?}", if pos { "+" } else { "-" }, cc.chevalley.positive_roots[i]))
                } else {
                    let j = k - 2 * np;
                    let p = cc.simple_position(j);
                    let ep = cc.lift(cc.e_index(p, true), 0, s);
                    let em = cc.lift(cc.e_index(p, false), n, s);
                    let br = element(basis, &ep).commutator(&element(basis, &em));
                    let z = &element(basis, &cc.lift(k, n, s)) - &br;
                    (pair_value(table, &ep, &em), z, format!("H^{}", j + 1))
                };
                let d = basis.decompose_below(&rest, cutoff).map_err(|e| {
                    MathError::Window(format!("remainder for {what} at degree {n}, point {}: {e}", s + 1))
                })?;
                if d.terms.keys().any(|h| h.0 <= n) {
                    return Err(MathError::NonGeneric(format!(
                        "remainder for {what} at degree {n}, point {} is not of higher degree",
                        s + 1
                    )));
                }
                Ok(&gamma_part + &map.eval(&d))
            })
            .collect();
        let vals: Vec<Gq> = vals.into_iter().collect::<Result<_>>()?;
        for (s, chunk) in vals.chunks(cc.dim()).enumerate() {
            for (u, v) in cc.to_g_values(chunk).into_iter().enumerate() {
                if !v.is_zero() {
                    map.phi_values.insert((n, s, u), v);
                }
            }
        }
    }
    let values = evaluate_pairs(basis, sc, cutoff, |a, b, d| &table.get(a, b) - &map.eval(d))?;
    let antisymmetric = values.iter().all(|((a, b), v)| values.get(&(*b, *a)).is_some_and(|w| *w == -v.clone()));
    let mut out = CocycleTable {
        window: table.window,
        values,
        meta: TableMeta { label: format!("normalized {}", table.meta.label), antisymmetric, ..Default::default() },
    };
    classify_bounds(&mut out);
    let conds = &normalized_relations(&out, basis)?[0];
    if !conds.passed() {
        return Err(MathError::NoSolution(format!("normalization left {:?}", conds.failures)));
    }
    Ok((map, out))
}

fn root_label(cc: &ChevalleyCoords, i: usize, pos: bool) -> String {
    let r: Vec<i64> = cc.chevalley.positive_roots[i].iter().map(|x| if pos { *x } else { -x }).collect();
    format!("{r:?}")
}

/// The relations a normalized cocycle satisfies, checked exactly. The first
/// entry is the normalization condition itself; the others hold at level
/// zero once the positive levels vanish.
pub fn normalized_relations(table: &CocycleTable, basis: &GradedBasis) -> Result<Vec<Relation>> {
    let cc = ChevalleyCoords::new(basis)?;
    let (lo, hi) = table.window;
    let np = cc.n_positive();
    let n_simple = cc.chevalley.simple_roots.len();
    let mut cond = Relation::new("normalization conditions");
    let mut pos_levels = Relation::new("positive levels vanish");
    let mut roots = Relation::new("root vectors pair only with opposite roots at level zero");
    let mut cartan = Relation::new("root vectors and Cartan elements are orthogonal at level zero");
    let mut hscale = Relation::new("Cartan level-zero scaling");
    for s in 0..basis.n_in() {
        for n in lo..=hi {
            for i in 0..np {
                for pos in [true, false] {
                    let v = pair_value(table, &cc.lift_h_root(i, 0, s), &cc.lift(cc.e_index(i, pos), n, s));
                    cond.record(v.is_zero(), || format!("(H, E{}) at degree {n}, point {}: {v}", root_label(&cc, i, pos), s + 1));
                }
            }
            for j in 0..n_simple {
                let p = cc.simple_position(j);
                let v = pair_value(table, &cc.lift(cc.e_index(p, true), 0, s), &cc.lift(cc.e_index(p, false), n, s));
                cond.record(v.is_zero(), || format!("(E, F) for simple root {} at degree {n}, point {}: {v}", j + 1, s + 1));
            }
        }
    }
    for (a, b) in table.values.keys() {
        let v = table.get(*a, *b);
        if a.0 + b.0 > 0 {
            pos_levels.record(false, || format!("{:?} {:?}: {v}", idx_json(a), idx_json(b)));
        }
    }
    pos_levels.checked = pos_levels.checked.max(1);
    let top = hi.min(-lo);
    let e_all: Vec<(usize, bool)> = (0..np).flat_map(|i| [(i, true), (i, false)]).collect();
    for s in 0..basis.n_in() {
        for r in 0..basis.n_in() {
            for m in -top..=top {
                for &(i, pi) in &e_all {
                    let ea = cc.lift(cc.e_index(i, pi), m, s);
                    for &(j, pj) in &e_all {
                        if i == j && pi != pj {
                            continue;
                        }
                        let v = pair_value(table, &ea, &cc.lift(cc.e_index(j, pj), -m, r));
                        roots.record(v.is_zero(), || format!("E{} E{} at m = {m}: {v}", root_label(&cc, i, pi), root_label(&cc, j, pj)));
                    }
                    for h in 0..n_simple {
                        let v = pair_value(table, &ea, &cc.lift(cc.h_index(h), -m, r));
                        cartan.record(v.is_zero(), || format!("E{} H^{} at m = {m}: {v}", root_label(&cc, i, pi), h + 1));
                    }
                }
                for j in 0..n_simple {
                    let hk = cc.h_index(j);
                    let base = pair_value(table, &cc.lift(hk, 1, s), &cc.lift(hk, -1, s));
                    let got = pair_value(table, &cc.lift(hk, m, s), &cc.lift(hk, -m, r));
                    let want = if r == s { &base * &Gq::from_int(m) } else { Gq::zero() };
                    hscale.record(got == want, || format!("H^{} at m = {m}, points ({},{}): {got} vs {want}", j + 1, s + 1, r + 1));
                }
            }
        }
    }
    Ok(vec![cond, pos_levels, roots, cartan, hscale])
}

/// Ratios at level zero against the first simple root:
/// `u_α = γ(E^α_{1,s}, E^{−α}_{−1,s}) / γ(H^{α₁}_{1,s}, H^{α₁}_{−1,s})` and
/// `t_{α,β} = γ(H^α_{1,s}, H^β_{−1,s}) / γ(H^{α₁}_{1,s}, H^{α₁}_{−1,s})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootConstants {
    pub point: usize,
    pub base: Gq,
    pub u: Vec<(String, Gq)>,
    pub t: Vec<(String, String, Gq)>,
}

impl RootConstants {
    /// `None` entries when the base value is zero.
    pub fn compute(table: &CocycleTable, basis: &GradedBasis) -> Result<Vec<Option<RootConstants>>> {
        let cc = ChevalleyCoords::new(basis)?;
        let np = cc.n_positive();
        let h1 = cc.h_index(0);
        let mut out = Vec::new();
        for s in 0..basis.n_in() {
            let base = pair_value(table, &cc.lift(h1, 1, s), &cc.lift(h1, -1, s));
            if base.is_zero() {
                out.push(None);
                continue;
            }
            let u = (0..np)
                .map(|i| {
                    let v = pair_value(table, &cc.lift(cc.e_index(i, true), 1, s), &cc.lift(cc.e_index(i, false), -1, s));
                    (root_label(&cc, i, true), &v / &base)
                })
                .collect();
            let mut t = Vec::new();
            for a in 0..np {
                for b in 0..np {
                    let v = pair_value(table, &cc.lift_h_root(a, 1, s), &cc.lift_h_root(b, -1, s));
                    t.push((root_label(&cc, a, true), root_label(&cc, b, true), &v / &base));
                }
            }
            out.push(Some(RootConstants { point: s + 1, base, u, t }));
        }
        Ok(out)
    }
}
