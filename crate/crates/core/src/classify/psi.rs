use num_traits::Zero;
use serde::Serialize;

use crate::cocycles::CocycleTable;
use crate::error::{MathError, Result};
use crate::exactmath::Gq;
use crate::grading::GradedBasis;
use crate::laxalgebra::{Family, GBasis};

/// `ψ_s(X^u, X^v) = γ(X^u_{1,s}, X^v_{−1,s})` for each in-point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiForm {
    pub labels: Vec<String>,
    /// `forms[s][u][v]`.
    pub forms: Vec<Vec<Vec<Gq>>>,
    /// For simple `g`: `c_s` with `ψ_s = c_s·κ`, `κ` the Killing form.
    pub killing_constants: Option<Vec<Gq>>,
}

/// `κ(X^u, X^v) = tr(ad X^u · ad X^v)` on the matrix basis.
pub fn killing_form(g: &GBasis) -> Vec<Vec<Gq>> {
    let r = g.dim();
    // ad[u][w][v]: coefficient of X^w in [X^u, X^v]
    let ad: Vec<Vec<Vec<Gq>>> = g
        .elements
        .iter()
        .map(|x| {
            let cols: Vec<Vec<Gq>> =
                g.elements.iter().map(|y| g.coords(&x.commutator(y)).expect("g is closed")).collect();
            (0..r).map(|w| (0..r).map(|v| cols[v][w].clone()).collect()).collect()
        })
        .collect();
    let mut k = vec![vec![Gq::zero(); r]; r];
    for u in 0..r {
        for v in 0..r {
            let mut acc = Gq::zero();
            for a in 0..r {
                for b in 0..r {
                    let (x, y) = (&ad[u][a][b], &ad[v][b][a]);
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x * y);
                    }
                }
            }
            k[u][v] = acc;
        }
    }
    k
}

/// Reads the forms off a table and checks symmetry and invariance. For simple
/// `g` also checks proportionality to the Killing form.
pub fn psi_forms(table: &CocycleTable, basis: &GradedBasis) -> Result<PsiForm> {
    let (lo, hi) = table.window;
    if lo > -1 || hi < 1 {
        return Err(MathError::Window("ψ needs degrees −1 and 1".into()));
    }
    let g = &basis.g_basis;
    let r = g.dim();
    let forms: Vec<Vec<Vec<Gq>>> = (0..basis.n_in())
        .map(|s| (0..r).map(|u| (0..r).map(|v| table.get((1, s, u), (-1, s, v))).collect()).collect())
        .collect();
    let coords: Vec<Vec<Vec<Gq>>> = g
        .elements
        .iter()
        .map(|x| g.elements.iter().map(|y| g.coords(&x.commutator(y)).expect("g is closed")).collect())
        .collect();
    let apply = |form: &Vec<Vec<Gq>>, a: &[Gq], v: usize| -> Gq {
        a.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(w, c)| c * &form[w][v]).sum()
    };
    for (s, form) in forms.iter().enumerate() {
        for u in 0..r {
            for v in 0..r {
                if form[u][v] != form[v][u] {
                    return Err(MathError::NoSolution(format!(
                        "ψ at point {} is not symmetric on ({}, {})",
                        s + 1,
                        g.labels[u],
                        g.labels[v]
                    )));
                }
            }
        }
        // ψ([X,Y],Z) = ψ(X,[Y,Z])
        for x in 0..r {
            for y in 0..r {
                for z in 0..r {
                    let lhs = apply(form, &coords[x][y], z);
                    let rhs: Gq = coords[y][z].iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(w, c)| c * &form[x][w]).sum();
                    if lhs != rhs {
                        return Err(MathError::NoSolution(format!(
                            "ψ at point {} is not invariant on ({}, {}, {})",
                            s + 1,
                            g.labels[x],
                            g.labels[y],
                            g.labels[z]
                        )));
                    }
                }
            }
        }
    }
    let simple = matches!(basis.config.algebra.family, Family::Sl | Family::So | Family::Sp);
    let killing_constants = if simple {
        let k = killing_form(g);
        let (pu, pv) = (0..r)
            .flat_map(|u| (0..r).map(move |v| (u, v)))
            .find(|&(u, v)| !k[u][v].is_zero())
            .ok_or_else(|| MathError::Family("Killing form vanishes".into()))?;
        let mut cs = Vec::new();
        for (s, form) in forms.iter().enumerate() {
            let c = &form[pu][pv] / &k[pu][pv];
            for u in 0..r {
                for v in 0..r {
                    if form[u][v] != &c * &k[u][v] {
                        return Err(MathError::NoSolution(format!(
                            "ψ at point {} is not proportional to the Killing form on ({}, {})",
                            s + 1,
                            g.labels[u],
                            g.labels[v]
                        )));
                    }
                }
            }
            cs.push(c);
        }
        Some(cs)
    } else {
        None
    };
    Ok(PsiForm { labels: g.labels.clone(), forms, killing_constants })
}
