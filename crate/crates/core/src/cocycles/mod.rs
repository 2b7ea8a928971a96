//! The geometric cocycles `γ₁(L, L′) = ∮ tr(L·∇L′)` and `γ₂(L, L′) = ∮ tr L·tr dL′`,
//! evaluated over formal combinations of circles around marked points.

mod checks;
mod jets;
mod table;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::connection::ConnectionForm;
use crate::error::{MathError, Result};
use crate::exactmath::{residue_at, Gq, Point, RationalFunction};
use crate::grading::GradedBasis;
use crate::laxalgebra::{LaxElement, MarkedConfig};

pub use checks::{
    dg_extension_check, invariance_samples, l_invariance_check, random_triples, verify_cocycle_identity, CheckReport,
    Triple,
};
pub use jets::{gamma1_by_jets, gamma2_by_jets};
pub use table::{
    classify_bounds, coboundary_solve, cocycle_table, rank_of_classes, CoboundaryResult, CoboundaryWitness, CocycleTable,
    TableMeta,
};

/// `Σ_P w_P·C_P` with `C_P` a small positive circle around `P`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle {
    pub weights: BTreeMap<Point, i64>,
}

impl Cycle {
    pub fn around(p: &Point) -> Self {
        Self { weights: BTreeMap::from([(p.clone(), 1)]) }
    }

    /// `C_i` around the in-point `P_i` (0-based).
    pub fn in_point(config: &MarkedConfig, i: usize) -> Self {
        Self::around(&config.in_points[i])
    }

    /// `C*_j` around the out-point `Q_j` (0-based).
    pub fn out_point(config: &MarkedConfig, j: usize) -> Self {
        Self::around(&config.out_points[j])
    }

    /// `C_S = Σ_i C_i`.
    pub fn separating(config: &MarkedConfig) -> Self {
        config.in_points.iter().fold(Self::default(), |acc, p| acc.plus(&Self::around(p)))
    }

    /// `Σ_j C*_j`, homologous to `−C_S`.
    pub fn all_out(config: &MarkedConfig) -> Self {
        config.out_points.iter().fold(Self::default(), |acc, p| acc.plus(&Self::around(p)))
    }

    pub fn plus(&self, other: &Cycle) -> Self {
        let mut w = self.weights.clone();
        for (p, n) in &other.weights {
            *w.entry(p.clone()).or_insert(0) += n;
        }
        w.retain(|_, n| *n != 0);
        Self { weights: w }
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut w: BTreeMap<Point, i64> = self.weights.iter().map(|(p, n)| (p.clone(), n * k)).collect();
        w.retain(|_, n| *n != 0);
        Self { weights: w }
    }

    /// `∮ f dz = Σ w_P res_P(f dz)`.
    pub fn integrate(&self, f: &RationalFunction) -> Gq {
        let mut acc = Gq::zero();
        for (p, w) in &self.weights {
            let r = residue_at(f, p);
            if !r.is_zero() {
                acc += &(&r * &Gq::from_int(*w));
            }
        }
        acc
    }

    /// Every circle must surround a point of `A`.
    pub fn validate(&self, config: &MarkedConfig) -> Result<()> {
        for p in self.weights.keys() {
            if !config.marked_points().any(|q| q == p) {
                return Err(MathError::Config(format!("cycle point {p} is not in I or O")));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .weights
            .iter()
            .map(|(p, w)| if *w == 1 { format!("C[{p}]") } else { format!("{w}*C[{p}]") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `tr(A·B)` without forming the full product.
fn trace_product(a: &LaxElement, b: &LaxElement) -> RationalFunction {
    let n = a.size();
    let mut acc = RationalFunction::zero();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a.get(i, j), b.get(j, i));
            if !x.is_zero() && !y.is_zero() {
                acc = &acc + &(x * y);
            }
        }
    }
    acc
}

/// `tr(L·(dL′/dz + [W, L′]))`, the coefficient of `dz` in the `γ₁` integrand.
pub fn gamma1_integrand(omega: &ConnectionForm, l: &LaxElement, l2: &LaxElement) -> RationalFunction {
    let mut f = trace_product(l, &l2.derivative());
    if !omega.is_zero() {
        f = &f + &trace_product(l, &omega.matrix_part.commutator(l2));
    }
    f
}

/// `tr L·(tr L′)′`, the coefficient of `dz` in the `γ₂` integrand.
pub fn gamma2_integrand(l: &LaxElement, l2: &LaxElement) -> RationalFunction {
    &l.trace() * &l2.trace().derivative()
}

pub fn evaluate_gamma1(omega: &ConnectionForm, c: &Cycle, l: &LaxElement, l2: &LaxElement) -> Gq {
    c.integrate(&gamma1_integrand(omega, l, l2))
}

pub fn evaluate_gamma2(c: &Cycle, l: &LaxElement, l2: &LaxElement) -> Gq {
    c.integrate(&gamma2_integrand(l, l2))
}

/// A bilinear form on the Lax algebra.
pub trait Cocycle: Sync {
    fn eval(&self, l: &LaxElement, l2: &LaxElement) -> Result<Gq>;
    fn label(&self) -> String;
}

#[derive(Clone, Debug)]
pub enum GeometricCocycle {
    Gamma1 { omega: ConnectionForm, cycle: Cycle },
    Gamma2 { cycle: Cycle },
}

impl GeometricCocycle {
    pub fn gamma1(omega: &ConnectionForm, cycle: Cycle) -> Self {
        Self::Gamma1 { omega: omega.clone(), cycle }
    }

    pub fn gamma2(cycle: Cycle) -> Self {
        Self::Gamma2 { cycle }
    }

    pub fn cycle(&self) -> &Cycle {
        match self {
            Self::Gamma1 { cycle, .. } | Self::Gamma2 { cycle } => cycle,
        }
    }
}

impl Cocycle for GeometricCocycle {
    fn eval(&self, l: &LaxElement, l2: &LaxElement) -> Result<Gq> {
        Ok(match self {
            Self::Gamma1 { omega, cycle } => evaluate_gamma1(omega, cycle, l, l2),
            Self::Gamma2 { cycle } => evaluate_gamma2(cycle, l, l2),
        })
    }

    fn label(&self) -> String {
        match self {
            Self::Gamma1 { cycle, .. } => format!("gamma1 over {}", cycle.label()),
            Self::Gamma2 { cycle } => format!("gamma2 over {}", cycle.label()),
        }
    }
}

/// `δφ(L, L′) = φ([L, L′])` for a functional given on the graded basis.
pub struct Coboundary<'a> {
    pub phi: BTreeMap<crate::grading::Index, Gq>,
    pub basis: &'a GradedBasis,
}

impl Cocycle for Coboundary<'_> {
    fn eval(&self, l: &LaxElement, l2: &LaxElement) -> Result<Gq> {
        let d = self.basis.decompose(&l.commutator(l2))?;
        Ok(d.terms.iter().filter_map(|(k, c)| self.phi.get(k).map(|p| p * c)).sum())
    }

    fn label(&self) -> String {
        "coboundary".into()
    }
}
