//! Linear conditions at a weak singularity.
//!
//! The witnesses `β`, `κ`, `ν` enter linearly, so every condition is a linear
//! equation in the jet matrices `L_k` and auxiliary unknowns. Auxiliary layout:
//! `β` occupies `0..m`, then `κ`, then `ν` (sp Lax operators only).

use num_traits::{One, Zero};

use super::spec::{AlgebraSpec, Family};
use crate::exactmath::{Gq, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Lax operators: `β^t α = 0` (resp. `β^t σ α = 0`).
    Lax,
    /// Connection forms: `β̃^t α = 1` (resp. `β̃^t σ α = 1`), simple pole only.
    Connection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Var {
    /// Entry `(row, col)` of the jet matrix of the given order.
    Entry { order: i64, row: usize, col: usize },
    Aux(usize),
}

#[derive(Clone, Debug)]
pub struct TyurinCondition {
    pub group: &'static str,
    pub terms: Vec<(Var, Gq)>,
    pub rhs: Gq,
}

#[derive(Clone, Debug)]
pub struct TyurinSystem {
    pub aux: usize,
    /// Lowest jet order that may be nonzero.
    pub min_order: i64,
    /// Highest jet order read by a condition.
    pub max_order: i64,
    pub conditions: Vec<TyurinCondition>,
}

impl TyurinSystem {
    /// Names of the condition groups in the order they were emitted.
    pub fn groups(&self) -> Vec<&'static str> {
        let mut g: Vec<&'static str> = Vec::new();
        for c in &self.conditions {
            if g.last() != Some(&c.group) {
                g.push(c.group);
            }
        }
        g
    }

    /// Residual of every condition for given jet matrices (indexed from
    /// `min_order`) and auxiliary values.
    pub fn residuals(&self, jets: &[Mat], aux: &[Gq]) -> Vec<Gq> {
        self.conditions
            .iter()
            .map(|c| {
                let mut v = -c.rhs.clone();
                for (var, coef) in &c.terms {
                    let x = match var {
                        Var::Entry { order, row, col } => jets[(order - self.min_order) as usize].get(*row, *col).clone(),
                        Var::Aux(a) => aux[*a].clone(),
                    };
                    v += &(coef * &x);
                }
                v
            })
            .collect()
    }
}

fn entry(order: i64, row: usize, col: usize) -> Var {
    Var::Entry { order, row, col }
}

/// The conditions at a point with Tyurin vector `alpha` (assumed nonzero).
pub fn tyurin_system(spec: &AlgebraSpec, alpha: &[Gq], norm: Normalization) -> TyurinSystem {
    let m = spec.matrix_size();
    let one = Gq::one();
    let beta = |k: usize| Var::Aux(k);
    let kappa = Var::Aux(m);
    let nu = Var::Aux(m + 1);
    let pairing_rhs = match norm {
        Normalization::Lax => Gq::zero(),
        Normalization::Connection => Gq::one(),
    };
    let mut conds = Vec::new();
    let push = |conds: &mut Vec<TyurinCondition>, group, terms: Vec<(Var, Gq)>, rhs: Gq| {
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        conds.push(TyurinCondition { group, terms, rhs });
    };

    let sp = spec.family == Family::Sp;
    let sigma = if sp { spec.sigma() } else { Mat::identity(m) };
    // α^t σ as a row, σ α as a column.
    let at_sigma: Vec<Gq> = (0..m).map(|j| (0..m).map(|k| &alpha[k] * sigma.get(k, j)).sum()).collect();
    let sigma_a = sigma.mul_vec(alpha);

    let (min_order, max_order, aux) = match (sp, norm) {
        (true, Normalization::Lax) => (-2, 1, m + 2),
        (true, Normalization::Connection) => (-1, 1, m + 1),
        _ => (-1, 0, m + 1),
    };

    if sp && norm == Normalization::Lax {
        for i in 0..m {
            for j in 0..m {
                push(&mut conds, "L_-2 = nu alpha alpha^t sigma", vec![(entry(-2, i, j), one.clone()), (nu.clone(), -(&alpha[i] * &at_sigma[j]))], Gq::zero());
            }
        }
    }

    let res_group = match (spec.family, norm) {
        (Family::So, Normalization::Lax) => "L_-1 = alpha beta^t - beta alpha^t",
        (Family::So, Normalization::Connection) => "omega_-1 = alpha beta^t - beta alpha^t",
        (Family::Sp, Normalization::Lax) => "L_-1 = (alpha beta^t + beta alpha^t) sigma",
        (Family::Sp, Normalization::Connection) => "omega_-1 = (alpha beta^t + beta alpha^t) sigma",
        (_, Normalization::Lax) => "L_-1 = alpha beta^t",
        (_, Normalization::Connection) => "omega_-1 = alpha beta^t",
    };
    for i in 0..m {
        for j in 0..m {
            let mut terms = vec![(entry(-1, i, j), one.clone())];
            match spec.family {
                Family::So => {
                    terms.push((beta(j), -alpha[i].clone()));
                    terms.push((beta(i), alpha[j].clone()));
                }
                Family::Sp => {
                    // (α β^t σ)_{ij} = α_i Σ_k β_k σ_{kj};  (β α^t σ)_{ij} = β_i (α^t σ)_j.
                    for k in 0..m {
                        terms.push((beta(k), -(&alpha[i] * sigma.get(k, j))));
                    }
                    terms.push((beta(i), -at_sigma[j].clone()));
                }
                _ => terms.push((beta(j), -alpha[i].clone())),
            }
            merge_terms(&mut terms);
            push(&mut conds, res_group, terms, Gq::zero());
        }
    }

    let pairing_group = match (sp, norm) {
        (true, Normalization::Lax) => "beta^t sigma alpha = 0",
        (true, Normalization::Connection) => "beta^t sigma alpha = 1",
        (false, Normalization::Lax) => "beta^t alpha = 0",
        (false, Normalization::Connection) => "beta^t alpha = 1",
    };
    let pair_vec = if sp { sigma_a.clone() } else { alpha.to_vec() };
    push(&mut conds, pairing_group, (0..m).map(|k| (beta(k), pair_vec[k].clone())).collect(), pairing_rhs);

    for i in 0..m {
        let mut terms: Vec<(Var, Gq)> = (0..m).map(|j| (entry(0, i, j), alpha[j].clone())).collect();
        terms.push((kappa.clone(), -alpha[i].clone()));
        push(&mut conds, "L_0 alpha = kappa alpha", terms, Gq::zero());
    }

    if sp {
        let mut terms = Vec::new();
        for i in 0..m {
            for j in 0..m {
                terms.push((entry(1, i, j), &at_sigma[i] * &alpha[j]));
            }
        }
        push(&mut conds, "alpha^t sigma L_1 alpha = 0", terms, Gq::zero());
    }

    TyurinSystem { aux, min_order, max_order, conditions: conds }
}

fn merge_terms(terms: &mut Vec<(Var, Gq)>) {
    let mut out: Vec<(Var, Gq)> = Vec::new();
    for (v, c) in terms.drain(..) {
        match out.iter_mut().find(|(w, _)| *w == v) {
            Some((_, d)) => *d += &c,
            None => out.push((v, c)),
        }
    }
    *terms = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_counts_match_pole_freedom() {
        // Conditions at γ cut exactly dim g out of the dim g extra parameters.
        let spec = AlgebraSpec::new(Family::Gl, 2);
        let sys = tyurin_system(&spec, &[Gq::one(), Gq::zero()], Normalization::Lax);
        assert_eq!(sys.groups(), vec!["L_-1 = alpha beta^t", "beta^t alpha = 0", "L_0 alpha = kappa alpha"]);
        assert_eq!(sys.conditions.len(), 4 + 1 + 2);
    }

    #[test]
    fn residuals_vanish_on_example() {
        let spec = AlgebraSpec::new(Family::Gl, 2);
        let sys = tyurin_system(&spec, &[Gq::one(), Gq::zero()], Normalization::Lax);
        let jets = vec![Mat::from_ints(&[&[0, 1], &[0, 0]]), Mat::from_ints(&[&[2, 0], &[0, 3]])];
        let aux = vec![Gq::zero(), Gq::one(), Gq::from_int(2)];
        assert!(sys.residuals(&jets, &aux).iter().all(|r| r.is_zero()));
    }
}
