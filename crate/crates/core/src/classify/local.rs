use num_traits::{One, Zero};
use serde::Serialize;

use crate::cocycles::{cocycle_table, rank_of_classes, CocycleTable, Cycle, GeometricCocycle};
use crate::connection::ConnectionForm;
use crate::error::{MathError, Result};
use crate::exactmath::linalg::{kernel, rank, rref};
use crate::exactmath::Gq;
use crate::geometry::GradingPrescription;
use crate::grading::{fitted_structure_constants, homogeneous_basis, Index};
use crate::laxalgebra::{Family, MarkedConfig};

#[derive(Clone, Debug, Serialize)]
pub struct LocalSpaceReport {
    pub window: (i64, i64),
    /// `"simple"` or `"gl"`.
    pub kind: String,
    /// Labels of the bounded family `γ_{1,ω,C_i}` (and `γ_{2,C_i}` for gl).
    pub family: Vec<String>,
    pub bounded_rank: usize,
    pub expected_bounded_rank: usize,
    /// Combinations of the family that are local within the window.
    pub local_combinations: usize,
    /// Combinations that are also combinations of the out-point tables.
    pub shared_combinations: usize,
    pub local_rank: usize,
    pub expected_local_rank: usize,
    /// Coefficient vectors over `family` spanning the local and shared combinations.
    pub local_basis: Vec<Vec<Gq>>,
    pub spanned_by_separating: bool,
    pub observed_s: i64,
    pub excluded_pairs: usize,
    pub verdict: String,
}

fn row_basis(mut vs: Vec<Vec<Gq>>, n: usize) -> Vec<Vec<Gq>> {
    let piv = rref(&mut vs, n);
    vs.truncate(piv.len());
    vs
}

fn combine_tables(coeffs: &[Gq], tables: &[CocycleTable], label: String) -> Result<CocycleTable> {
    let terms: Vec<(Gq, &CocycleTable)> =
        coeffs.iter().zip(tables).filter(|(c, _)| !c.is_zero()).map(|(c, t)| (c.clone(), t)).collect();
    if terms.is_empty() {
        let mut t = tables[0].clone();
        t.values.clear();
        t.meta.label = label;
        return Ok(t);
    }
    CocycleTable::combine(label, &terms)
}

/// Ranks of the bounded family modulo in-window coboundaries and of the
/// combinations that are local within the window and also expressible
/// through the out-point circles, compared with `N`/`1` (simple) or `2N`/`2`
/// (gl).
pub fn local_space_dimension(config: &MarkedConfig, omega: &ConnectionForm, window: (i64, i64)) -> Result<LocalSpaceReport> {
    let gl = match config.algebra.family {
        Family::Sl | Family::So | Family::Sp => false,
        Family::Gl => true,
        Family::S => return Err(MathError::Family("classification covers simple families and gl".into())),
    };
    let presc = GradingPrescription::standard(config.n_in(), config.n_out(), config.genus)?;
    let basis = homogeneous_basis(window, config, &presc)?;
    let sc = fitted_structure_constants(&basis)?;
    let n = config.n_in();

    let make = |cycles: Vec<Cycle>| -> Result<Vec<CocycleTable>> {
        let mut out = Vec::new();
        for c in &cycles {
            out.push(cocycle_table(&GeometricCocycle::gamma1(omega, c.clone()), &basis)?);
        }
        if gl {
            for c in &cycles {
                out.push(cocycle_table(&GeometricCocycle::gamma2(c.clone()), &basis)?);
            }
        }
        Ok(out)
    };
    let fam = make((0..n).map(|i| Cycle::in_point(config, i)).collect())?;
    let outs = make((0..config.n_out()).map(|j| Cycle::out_point(config, j)).collect())?;
    let f = fam.len();
    let g = outs.len();

    let fam_refs: Vec<&CocycleTable> = fam.iter().collect();
    let bounded_rank = rank_of_classes(&fam_refs, true, &basis, &sc)?;

    // unknowns (a, c): Σ a_i T_i − Σ c_j T*_j = 0 on every pair, and
    // Σ a_i T_i = 0 on the levels that rule out an in-window lower bound
    let (lo, hi) = window;
    let band = ((hi - lo) / 2).max(1);
    let low = 2 * lo + band;
    let idx = basis.indices();
    let pairs: Vec<(Index, Index)> = idx.iter().flat_map(|a| idx.iter().map(move |b| (*a, *b))).collect();
    let mut shared_rows = Vec::new();
    let mut low_rows = Vec::new();
    for (a, b) in &pairs {
        let mut row = vec![Gq::zero(); f + g];
        for (i, t) in fam.iter().enumerate() {
            row[i] = t.get(*a, *b);
        }
        for (j, t) in outs.iter().enumerate() {
            row[f + j] = -t.get(*a, *b);
        }
        if row.iter().any(|x| !x.is_zero()) {
            if a.0 + b.0 < low {
                low_rows.push(row[..f].to_vec());
            }
            shared_rows.push(row);
        }
    }
    let local_combinations = f - rank(&low_rows, f);
    let shared: Vec<Vec<Gq>> = kernel(&shared_rows, f + g).into_iter().map(|v| v[..f].to_vec()).collect();
    let shared_combinations = rank(&shared, f);
    let mut both_rows = shared_rows.clone();
    both_rows.extend(low_rows.iter().map(|r| {
        let mut v = r.clone();
        v.resize(f + g, Gq::zero());
        v
    }));
    let both: Vec<Vec<Gq>> = kernel(&both_rows, f + g).into_iter().map(|v| v[..f].to_vec()).collect();
    let local_basis = row_basis(both, f);

    let combos: Vec<CocycleTable> = local_basis
        .iter()
        .enumerate()
        .map(|(k, c)| combine_tables(c, &fam, format!("local combination {}", k + 1)))
        .collect::<Result<_>>()?;
    let combo_refs: Vec<&CocycleTable> = combos.iter().collect();
    let local_rank = if combos.is_empty() { 0 } else { rank_of_classes(&combo_refs, true, &basis, &sc)? };

    // C_S = Σ_i C_i, once per cocycle kind
    let kinds = if gl { 2 } else { 1 };
    let separating: Vec<Vec<Gq>> = (0..kinds)
        .map(|k| (0..f).map(|i| if i / n == k { Gq::one() } else { Gq::zero() }).collect())
        .collect();
    let mut joint = separating.clone();
    joint.extend(local_basis.iter().cloned());
    let spanned_by_separating = rank(&joint, f) == rank(&separating, f);

    let (expected_bounded_rank, expected_local_rank) = if gl { (2 * n, 2) } else { (n, 1) };
    let verdict = if bounded_rank == expected_bounded_rank && local_rank == expected_local_rank && spanned_by_separating {
        format!("certified within window [{lo}, {hi}]")
    } else {
        format!(
            "inconclusive within window [{lo}, {hi}]: widen it by at least {} on each side",
            sc.observed_s + 1
        )
    };
    Ok(LocalSpaceReport {
        window,
        kind: if gl { "gl" } else { "simple" }.into(),
        family: fam.iter().map(|t| t.meta.label.clone()).collect(),
        bounded_rank,
        expected_bounded_rank,
        local_combinations,
        shared_combinations,
        local_rank,
        expected_local_rank,
        local_basis,
        spanned_by_separating,
        observed_s: sc.observed_s,
        excluded_pairs: sc.excluded,
        verdict,
    })
}
