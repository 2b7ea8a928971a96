use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MathError, Result};
use crate::exactmath::linalg::{kernel, rref, solve_affine};
use crate::exactmath::{laurent_expand, Gq, Point, RationalFunction};
use crate::geometry::{grading_divisor_io, Divisor, GradingPrescription, SectionSpace};
use crate::laxalgebra::{lax_space, GBasis, LaxElement, MarkedConfig};

/// Basis element index `(m, s, u)`: degree, in-point (0-based), g-basis index.
pub type Index = (i64, usize, usize);

/// A divisor modification made because the generic construction failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Adjustment {
    pub what: String,
    pub m: i64,
    pub s: usize,
    /// Extra pole order added at the last out-point.
    pub bump: i64,
    pub note: String,
}

/// How far the O-part may be raised at `Q_M` before giving up.
#[derive(Clone, Copy, Debug)]
pub struct BumpPolicy {
    pub max_bumps: i64,
}

impl BumpPolicy {
    /// `2g − 1 + H + 1` with `H = ε·dim g·K`, at least one.
    pub fn for_config(config: &MarkedConfig) -> Self {
        let k = config.active_tyurin().count() as i64;
        let h = config.algebra.epsilon() * config.algebra.dim() as i64 * k;
        Self { max_bumps: (2 * config.genus as i64 + h).max(1) }
    }
}

/// Preimages of the unit vectors under `lead` (rows = targets, columns =
/// source coordinates), free variables set to zero; `None` unless surjective.
pub(crate) fn unit_preimages(lead: &[Vec<Gq>], ncols: usize) -> Option<Vec<Vec<Gq>>> {
    let r = lead.len();
    (0..r)
        .map(|u| {
            let rhs: Vec<Gq> = (0..r).map(|k| if k == u { Gq::from_int(1) } else { Gq::zero() }).collect();
            solve_affine(lead, &rhs, ncols).map(|(p, _)| p)
        })
        .collect()
}

/// Leading coefficients of order `m` at `p` of every coordinate of every basis vector.
fn leading_map(space: &SectionSpace, p: &Point, m: i64) -> Vec<Vec<Gq>> {
    let r = space.rank;
    let elems = space.basis_elements();
    let cols: Vec<Vec<Gq>> = elems
        .iter()
        .map(|v| v.iter().map(|f| laurent_expand(f, p, m, m).coeff(m)).collect())
        .collect();
    (0..r).map(|u| cols.iter().map(|c| c[u].clone()).collect()).collect()
}

/// Makes the preimages canonical when the leading map has a kernel: each one is
/// reduced against the kernel in echelon form of its Laurent jet at `q`, lowest
/// order (highest pole) first, so the chosen elements carry the smallest poles.
fn reduce_at_out_point(space: &SectionSpace, lead: &[Vec<Gq>], pre: &mut [Vec<Gq>], q: &Point, lo: i64) {
    let dim = space.dim();
    let ker = kernel(lead, dim);
    if ker.is_empty() {
        return;
    }
    let elems = space.basis_elements();
    let mut span = ker.len() as i64 + 1;
    loop {
        let hi = lo + span;
        let width = (hi - lo + 1) as usize * space.rank;
        // jets[i] = flattened jet of basis vector i, index (order − lo)·rank + u
        let jets: Vec<Vec<Gq>> = elems
            .iter()
            .map(|v| {
                let mut out = vec![Gq::zero(); width];
                for (u, f) in v.iter().enumerate() {
                    let j = laurent_expand(f, q, lo, hi);
                    for o in lo..=hi {
                        out[(o - lo) as usize * space.rank + u] = j.coeff(o);
                    }
                }
                out
            })
            .collect();
        let row_of = |c: &[Gq]| -> Vec<Gq> {
            let mut row = vec![Gq::zero(); width];
            for (x, jv) in c.iter().zip(&jets) {
                if !x.is_zero() {
                    for (a, b) in row.iter_mut().zip(jv) {
                        *a += &(x * b);
                    }
                }
            }
            row.extend(c.iter().cloned());
            row
        };
        let mut rows: Vec<Vec<Gq>> = ker.iter().map(|k| row_of(k)).collect();
        let pivots = rref(&mut rows, width + dim);
        if pivots.iter().any(|&c| c >= width) {
            span *= 2;
            continue;
        }
        for p in pre.iter_mut() {
            let mut v = row_of(p);
            for (row, &c) in rows.iter().zip(&pivots) {
                if !v[c].is_zero() {
                    let f = v[c].clone();
                    for (a, b) in v.iter_mut().zip(row) {
                        if !b.is_zero() {
                            *a -= &(&f * b);
                        }
                    }
                }
            }
            *p = v.split_off(width);
        }
        return;
    }
}

/// Elements of a section space whose order-`m` coefficients at `p` are the unit
/// vectors, raising the pole order at `bump_point` when the generic choice fails.
pub(crate) fn normalized_family(
    what: &str,
    m: i64,
    s: usize,
    base: &Divisor,
    bump_point: &Point,
    p: &Point,
    policy: BumpPolicy,
    solve: impl Fn(&Divisor) -> SectionSpace,
) -> Result<(Vec<Vec<RationalFunction>>, Option<Adjustment>)> {
    for bump in 0..=policy.max_bumps {
        let mut d = base.clone();
        d.add_at(bump_point, bump);
        let space = solve(&d);
        let r = space.rank;
        if space.dim() < r {
            continue;
        }
        let lead = leading_map(&space, p, m);
        let Some(mut pre) = unit_preimages(&lead, space.dim()) else { continue };
        if space.dim() > r {
            let lo = -d.get(bump_point);
            reduce_at_out_point(&space, &lead, &mut pre, bump_point, lo);
        }
        let elems: Vec<Vec<RationalFunction>> = pre
            .iter()
            .map(|c| {
                let mut coords = vec![Gq::zero(); space.basis[0].len()];
                for (x, v) in c.iter().zip(&space.basis) {
                    if !x.is_zero() {
                        for (a, b) in coords.iter_mut().zip(v) {
                            *a += &(x * b);
                        }
                    }
                }
                space.element(&coords)
            })
            .collect();
        let adj = if bump > 0 || space.dim() > r {
            Some(Adjustment {
                what: what.to_string(),
                m,
                s,
                bump,
                note: format!("section space of dimension {} for {} targets", space.dim(), r),
            })
        } else {
            None
        };
        return Ok((elems, adj));
    }
    Err(MathError::NonGeneric(format!(
        "{what}: no normalized elements for (m, s) = ({m}, {}) after {} bumps at {bump_point}",
        s + 1,
        policy.max_bumps
    )))
}

/// The homogeneous elements `X^u_{m,s}` over a degree window.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub window: (i64, i64),
    pub config: MarkedConfig,
    pub prescription: GradingPrescription,
    pub g_basis: GBasis,
    /// g-coordinates of each element as functions of `z`.
    pub coords: BTreeMap<Index, Vec<RationalFunction>>,
    pub elements: BTreeMap<Index, LaxElement>,
    pub adjustments: Vec<Adjustment>,
    /// Jets of the coordinates at each in-point, orders `m..=window.1`:
    /// `jets[&(m,s,u)][t][u'][k − m]`.
    jets: BTreeMap<Index, Vec<Vec<Vec<Gq>>>>,
}

/// Builds `ḡ_m` for every `m` in the window.
pub fn homogeneous_basis(window: (i64, i64), config: &MarkedConfig, prescription: &GradingPrescription) -> Result<GradedBasis> {
    config.validate()?;
    prescription.validate(config.n_in(), config.n_out(), config.genus)?;
    if window.0 > window.1 {
        return Err(MathError::Window(format!("empty window [{}, {}]", window.0, window.1)));
    }
    let g_basis = config.algebra.basis()?;
    let r = g_basis.dim();
    let n = config.n_in();
    let policy = BumpPolicy::for_config(config);
    let q_last = config.out_points.last().unwrap().clone();

    let slots: Vec<(i64, usize)> = (window.0..=window.1).flat_map(|m| (0..n).map(move |s| (m, s))).collect();
    let built: Vec<Result<(i64, usize, Vec<Vec<RationalFunction>>, Option<Adjustment>)>> = slots
        .par_iter()
        .map(|&(m, s)| {
            let mut d = grading_divisor_io(m, config, prescription);
            for (t, p) in config.in_points.iter().enumerate() {
                if t != s {
                    d.add_at(p, -1);
                }
            }
            let p = &config.in_points[s];
            let (elems, adj) = normalized_family("lax basis", m, s, &d, &q_last, p, policy, |dd| lax_space(config, &g_basis, dd))?;
            Ok((m, s, elems, adj))
        })
        .collect();

    let mut coords = BTreeMap::new();
    let mut adjustments = Vec::new();
    for b in built {
        let (m, s, elems, adj) = b?;
        adjustments.extend(adj);
        for (u, c) in elems.into_iter().enumerate() {
            coords.insert((m, s, u), c);
        }
    }
    let elements: BTreeMap<Index, LaxElement> = coords
        .iter()
        .map(|(k, c)| (*k, LaxElement::new(g_basis.matrix_size(), g_basis.combine_fn(c))))
        .collect();
    let keys: Vec<Index> = coords.keys().copied().collect();
    let jets: BTreeMap<Index, Vec<Vec<Vec<Gq>>>> = keys
        .par_iter()
        .map(|k| {
            let c = &coords[k];
            let per_point = config
                .in_points
                .iter()
                .map(|p| {
                    (0..r)
                        .map(|u| {
                            let j = laurent_expand(&c[u], p, k.0, window.1);
                            (k.0..=window.1).map(|o| j.coeff(o)).collect()
                        })
                        .collect()
                })
                .collect();
            (*k, per_point)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(GradedBasis {
        window,
        config: config.clone(),
        prescription: prescription.clone(),
        g_basis,
        coords,
        elements,
        adjustments,
        jets,
    })
}

/// Coordinates of an element in the graded basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: BTreeMap<Index, Gq>,
}

impl Decomposition {
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|k| k.0).collect();
        d.dedup();
        d
    }

    /// The homogeneous components `m → L_m`.
    pub fn components(&self, basis: &GradedBasis) -> BTreeMap<i64, LaxElement> {
        let mut out: BTreeMap<i64, Vec<(Index, Gq)>> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.0).or_default().push((*k, c.clone()));
        }
        out.into_iter().map(|(m, t)| (m, basis.combine(&t))).collect()
    }
}

impl GradedBasis {
    pub fn dim_g(&self) -> usize {
        self.g_basis.dim()
    }

    pub fn n_in(&self) -> usize {
        self.config.n_in()
    }

    pub fn element(&self, k: Index) -> &LaxElement {
        &self.elements[&k]
    }

    /// Elements of degree `m`.
    pub fn degree(&self, m: i64) -> impl Iterator<Item = (&Index, &LaxElement)> {
        self.elements.range((m, 0, 0)..(m + 1, 0, 0))
    }

    pub fn indices(&self) -> Vec<Index> {
        self.elements.keys().copied().collect()
    }

    /// `Σ c_k X_k`.
    pub fn combine(&self, terms: &[(Index, Gq)]) -> LaxElement {
        let r = self.dim_g();
        let mut acc = vec![RationalFunction::zero(); r];
        for (k, c) in terms {
            for (a, f) in acc.iter_mut().zip(&self.coords[k]) {
                if !f.is_zero() && !c.is_zero() {
                    *a = &*a + &f.scale(c);
                }
            }
        }
        LaxElement::new(self.g_basis.matrix_size(), self.g_basis.combine_fn(&acc))
    }

    /// Exact coordinates of `l` in the basis. Fails if `l` has a component
    /// below the window or its expansion does not terminate inside it.
    pub fn decompose(&self, l: &LaxElement) -> Result<Decomposition> {
        let coords = self.g_basis.coords_fn(l.entries());
        if LaxElement::new(l.size(), self.g_basis.combine_fn(&coords)) != *l {
            return Err(MathError::Family("element is not pointwise in g".into()));
        }
        self.decompose_coords(&coords, None)
    }

    /// The components of `l` of degree `< cut`, ignoring everything above.
    /// Needs `cut ≤ hi + 1`.
    pub fn decompose_below(&self, l: &LaxElement, cut: i64) -> Result<Decomposition> {
        if cut > self.window.1 + 1 {
            return Err(MathError::Window(format!("cutoff {cut} lies beyond the window end {}", self.window.1)));
        }
        let coords = self.g_basis.coords_fn(l.entries());
        if LaxElement::new(l.size(), self.g_basis.combine_fn(&coords)) != *l {
            return Err(MathError::Family("element is not pointwise in g".into()));
        }
        self.decompose_coords(&coords, Some(cut))
    }

    fn decompose_coords(&self, coords: &[RationalFunction], cut: Option<i64>) -> Result<Decomposition> {
        let lo_w = self.window.0;
        let hi_w = cut.map_or(self.window.1, |c| c - 1);
        let r = self.dim_g();
        let pts = &self.config.in_points;
        let lo = pts
            .iter()
            .flat_map(|p| coords.iter().filter_map(|f| crate::exactmath::ord_at(f, p)))
            .min();
        let Some(lo) = lo else { return Ok(Decomposition::default()) };
        if lo < lo_w {
            return Err(MathError::Window(format!("component of degree {lo} below the window start {lo_w}")));
        }
        let len = (hi_w - lo + 1).max(0) as usize;
        // jets[t][u][k - lo]
        let mut jets: Vec<Vec<Vec<Gq>>> = pts
            .iter()
            .map(|p| {
                coords
                    .iter()
                    .map(|f| {
                        if lo > hi_w {
                            return Vec::new();
                        }
                        let j = laurent_expand(f, p, lo, hi_w);
                        (lo..=hi_w).map(|o| j.coeff(o)).collect()
                    })
                    .collect()
            })
            .collect();
        let mut terms = BTreeMap::new();
        for m in lo..=hi_w {
            let off = (m - lo) as usize;
            for t in 0..pts.len() {
                for u in 0..r {
                    let c = jets[t][u][off].clone();
                    if c.is_zero() {
                        continue;
                    }
                    let xj = &self.jets[&(m, t, u)];
                    for (tt, per_u) in xj.iter().enumerate() {
                        for (uu, series) in per_u.iter().enumerate() {
                            for (k, x) in series.iter().enumerate().take(len - off) {
                                if !x.is_zero() {
                                    jets[tt][uu][off + k] -= &(&c * x);
                                }
                            }
                        }
                    }
                    terms.insert((m, t, u), c);
                }
            }
        }
        debug_assert!(len == 0 || jets.iter().flatten().all(|s| s.iter().all(|x| x.is_zero())));
        if cut.is_some() {
            return Ok(Decomposition { terms });
        }
        // The remainder vanishes to order > hi at every in-point; confirm it is zero.
        let mut rem: Vec<RationalFunction> = coords.to_vec();
        for (k, c) in &terms {
            for (a, f) in rem.iter_mut().zip(&self.coords[k]) {
                if !f.is_zero() {
                    *a = &*a - &f.scale(c);
                }
            }
        }
        if rem.iter().any(|f| !f.is_zero()) {
            let next = pts
                .iter()
                .flat_map(|p| rem.iter().filter_map(|f| crate::exactmath::ord_at(f, p)))
                .min()
                .unwrap_or(hi_w + 1);
            return Err(MathError::Window(format!(
                "expansion continues past the window end {hi_w} (next component at degree {next})"
            )));
        }
        Ok(Decomposition { terms })
    }
}

pub fn degree_decompose(l: &LaxElement, basis: &GradedBasis) -> Result<BTreeMap<i64, LaxElement>> {
    Ok(basis.decompose(l)?.components(basis))
}
