use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::Relation;
use crate::cocycles::CocycleTable;
use crate::connection::{covariant_derivative, ConnectionForm};
use crate::error::Result;
use crate::exactmath::Gq;
use crate::geometry::GradingPrescription;
use crate::grading::{Decomposition, GradedBasis, Index, StructureConstants};
use crate::laxalgebra::kn_vector_basis;

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub relations: Vec<Relation>,
}

impl LevelReport {
    pub fn all_passed(&self) -> bool {
        self.relations.iter().all(Relation::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }
}

fn through(table: &CocycleTable, d: &Decomposition, b: Index, left: bool) -> Gq {
    d.terms
        .iter()
        .map(|(h, c)| if left { c * &table.get(*h, b) } else { c * &table.get(b, *h) })
        .sum()
}

fn show(k: &Index) -> String {
    format!("({},{},{})", k.0, k.1 + 1, k.2 + 1)
}

/// The relations satisfied by a bounded invariant cocycle, checked on a table.
/// Brackets and covariant derivatives are expanded exactly in the graded
/// basis; instances whose expansion leaves the window are counted as skipped.
pub fn level_recursion_check(
    table: &CocycleTable,
    basis: &GradedBasis,
    sc: &StructureConstants,
    omega: &ConnectionForm,
) -> Result<LevelReport> {
    let (lo, hi) = table.window;
    let idx = basis.indices();
    let mut relations = Vec::new();

    // γ([a,b],c) + γ([b,c],a) + γ([c,a],b) = 0 through the structure constants
    let mut cyc = Relation::new("cocycle identity on basis triples");
    let ids = &idx;
    let outcomes: Vec<Option<(bool, String)>> = idx
        .par_iter()
        .flat_map_iter(|a| ids.iter().flat_map(move |b| ids.iter().map(move |c| (*a, *b, *c))))
        .map(|(a, b, c)| {
            let (Some(ab), Some(bc), Some(ca)) = (sc.bracket(a, b), sc.bracket(b, c), sc.bracket(c, a)) else {
                return None;
            };
            let s = &(&through(table, ab, c, true) + &through(table, bc, a, true)) + &through(table, ca, b, true);
            Some((s.is_zero(), format!("{} {} {}: {s}", show(&a), show(&b), show(&c))))
        })
        .collect();
    for o in outcomes {
        match o {
            Some((ok, msg)) => cyc.record(ok, || msg),
            None => cyc.skip(),
        }
    }
    relations.push(cyc);

    // γ(∇_e X_a, X_b) + γ(X_a, ∇_e X_b) = 0 for e = e_{k,r}, |k| ≤ 1
    let config = &basis.config;
    let presc = GradingPrescription::vector_fields(config.n_in(), config.n_out(), config.genus)?;
    let mut inv = Relation::new("invariance under the vector fields");
    for k in -1..=1 {
        for r in 0..config.n_in() {
            let e = kn_vector_basis(k, r, config, &presc)?;
            let der: BTreeMap<Index, Option<Decomposition>> = idx
                .par_iter()
                .map(|a| (*a, basis.decompose(&covariant_derivative(omega, &e, basis.element(*a))).ok()))
                .collect();
            for a in &idx {
                for b in &idx {
                    let (Some(da), Some(db)) = (&der[a], &der[b]) else {
                        inv.skip();
                        continue;
                    };
                    let s = &through(table, da, *b, true) + &through(table, db, *a, false);
                    inv.record(s.is_zero(), || format!("e_({},{}) on {} {}: {s}", k, r + 1, show(a), show(b)));
                }
            }
        }
    }
    relations.push(inv);

    let mut pos = Relation::new("positive levels vanish");
    let mut cross = Relation::new("cross-point vanishing at level zero");
    let mut scaling = Relation::new("level-zero scaling");
    let mut sym = Relation::new("level-one symmetry");
    let r = basis.dim_g();
    let n_in = basis.n_in();
    for a in &idx {
        for b in &idx {
            let l = a.0 + b.0;
            let v = table.get(*a, *b);
            if l > 0 {
                pos.record(v.is_zero(), || format!("{} {}: {v}", show(a), show(b)));
            }
            if l == 0 && a.1 != b.1 {
                cross.record(v.is_zero(), || format!("{} {}: {v}", show(a), show(b)));
            }
        }
    }
    if lo <= -1 && hi >= 1 {
        let top = hi.min(-lo);
        for s in 0..n_in {
            for u in 0..r {
                for v in 0..r {
                    let base = table.get((1, s, u), (-1, s, v));
                    for n in -top..=top {
                        let got = table.get((n, s, u), (-n, s, v));
                        let want = &base * &Gq::from_int(n);
                        scaling.record(got == want, || format!("n = {n} at {}: {got} vs {want}", s + 1));
                    }
                    for p in 0..n_in {
                        let x = table.get((1, p, u), (-1, s, v));
                        let y = table.get((1, s, v), (-1, p, u));
                        sym.record(x == y, || format!("({},{}) at ({},{}): {x} vs {y}", u + 1, v + 1, p + 1, s + 1));
                    }
                }
            }
        }
    }
    relations.extend([pos, scaling, sym]);
    if basis.n_in() > 1 {
        relations.insert(relations.len() - 2, cross);
    }
    Ok(LevelReport { relations })
}
