use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::element::LaxElement;
use super::spec::{Family, GBasis, MarkedConfig};
use super::tyurin::{tyurin_system, Normalization, TyurinSystem, Var};
use crate::error::{MathError, Result};
use crate::exactmath::linalg::solve_affine;
use crate::exactmath::{Gq, Mat, Point, Polynomial};
use crate::geometry::{solve_system, ConstraintSystem, Divisor, LinearCondition, SectionSpace, Slot};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Membership {
    Yes,
    No { condition: String, point: String },
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        *self == Membership::Yes
    }

    fn no(condition: impl Into<String>, point: impl ToString) -> Self {
        Membership::No { condition: condition.into(), point: point.to_string() }
    }
}

/// Pointwise family condition on a matrix of functions.
fn family_violation(l: &LaxElement, config: &MarkedConfig, norm: Normalization) -> Option<&'static str> {
    let spec = &config.algebra;
    let family = match (spec.family, norm) {
        (Family::So | Family::Sp, _) => spec.family,
        (f, Normalization::Lax) => f,
        (_, Normalization::Connection) => Family::Gl,
    };
    let n = l.size();
    match family {
        Family::Gl => None,
        Family::Sl => (!l.trace().is_zero()).then_some("trace-free"),
        Family::S => {
            let ok = (0..n).all(|i| (0..n).all(|j| if i == j { l.get(i, i) == l.get(0, 0) } else { l.get(i, j).is_zero() }));
            (!ok).then_some("scalar")
        }
        Family::So => (l.transpose() != -l).then_some("skew-symmetric"),
        Family::Sp => {
            let s = spec.sigma();
            let lhs = &l.transpose() * &LaxElement::constant(&s);
            (!(&lhs + &l.left_mul(&s)).is_zero()).then_some("X^t sigma + sigma X = 0")
        }
    }
}

/// Pole locations outside `allowed`; reports the first offending point.
fn pole_violation(l: &LaxElement, config: &MarkedConfig, allowed: &[Point]) -> Option<Membership> {
    for f in l.entries() {
        let mut den: Polynomial = f.den().clone();
        for p in allowed {
            if let Point::Finite(a) = p {
                while den.root_multiplicity(a).unwrap_or(0) > 0 {
                    den = den.div_exact(&Polynomial::linear_root(a)).unwrap();
                }
            }
        }
        if !den.is_constant() {
            for t in &config.tyurin {
                if let Point::Finite(a) = &t.gamma {
                    if den.eval(a).is_zero() {
                        return Some(Membership::no("holomorphic at a Tyurin point with alpha = 0", &t.gamma));
                    }
                }
            }
            return Some(Membership::no("holomorphic outside A and W", format!("roots of {den}")));
        }
        if !allowed.contains(&Point::Infinity) && f.num().degree() > f.den().degree() {
            let cond = if config.tyurin.iter().any(|t| t.gamma.is_infinite()) {
                "holomorphic at a Tyurin point with alpha = 0"
            } else {
                "holomorphic outside A and W"
            };
            return Some(Membership::no(cond, "inf"));
        }
    }
    None
}

/// Solves the witness system group by group; names the first failing group.
fn witness_violation(sys: &TyurinSystem, jets: &[Mat]) -> Option<&'static str> {
    let groups = sys.groups();
    for upto in 1..=groups.len() {
        let active = &groups[..upto];
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for c in sys.conditions.iter().filter(|c| active.contains(&c.group)) {
            let mut row = vec![Gq::zero(); sys.aux];
            let mut b = c.rhs.clone();
            for (v, coef) in &c.terms {
                match v {
                    Var::Aux(a) => row[*a] += coef,
                    Var::Entry { order, row: i, col: j } => {
                        b -= &(coef * jets[(order - sys.min_order) as usize].get(*i, *j));
                    }
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        if solve_affine(&rows, &rhs, sys.aux).is_none() {
            return Some(groups[upto - 1]);
        }
    }
    None
}

fn check(l: &LaxElement, config: &MarkedConfig, norm: Normalization) -> Result<Membership> {
    let m = config.algebra.matrix_size();
    if l.size() != m {
        return Err(MathError::Shape(format!("matrix size {} does not match algebra size {m}", l.size())));
    }
    if let Some(name) = family_violation(l, config, norm) {
        return Ok(Membership::no(name, "everywhere"));
    }
    let mut allowed: Vec<Point> = config.marked_points().cloned().collect();
    allowed.extend(config.active_tyurin().map(|t| t.gamma.clone()));
    if let Some(v) = pole_violation(l, config, &allowed) {
        return Ok(v);
    }
    for t in config.active_tyurin() {
        let sys = tyurin_system(&config.algebra, &t.alpha, norm);
        if let Some(o) = l.ord_at(&t.gamma) {
            if o < sys.min_order {
                return Ok(Membership::no(format!("pole order at most {}", -sys.min_order), &t.gamma));
            }
        }
        let jets = l.jet(&t.gamma, sys.min_order, sys.max_order);
        if let Some(g) = witness_violation(&sys, &jets) {
            return Ok(Membership::no(g, &t.gamma));
        }
    }
    Ok(Membership::Yes)
}

/// Decides whether `l` is a Lax operator for `config`.
pub fn is_member(l: &LaxElement, config: &MarkedConfig) -> Result<Membership> {
    check(l, config, Normalization::Lax)
}

/// The same test with the connection-form conditions at the weak singularities.
pub fn is_connection_form(w: &LaxElement, config: &MarkedConfig) -> Result<Membership> {
    check(w, config, Normalization::Connection)
}

/// Pointwise product; only gl and s are closed under it.
pub fn lax_product(a: &LaxElement, b: &LaxElement, config: &MarkedConfig) -> Result<LaxElement> {
    match config.algebra.family {
        Family::Gl | Family::S => Ok(a * b),
        f => Err(MathError::Family(format!("{f:?} is not closed under the matrix product"))),
    }
}

pub fn lax_bracket(a: &LaxElement, b: &LaxElement) -> LaxElement {
    a.commutator(b)
}

/// `L = (tr L / n)·I + (L − (tr L / n)·I)`.
pub fn gl_split(l: &LaxElement) -> (LaxElement, LaxElement) {
    let n = l.size();
    let t = l.trace().scale(&Gq::from_frac(1, n as i64));
    let scalar = LaxElement::times(&Mat::identity(n), &t);
    let rest = l - &scalar;
    (scalar, rest)
}

/// Sections of `(L) ≥ −D − D_W` in the coordinates of `basis`, subject to the
/// weak-singularity conditions (`D_W = ε·Σγ` for Lax operators, `Σγ` for
/// connection forms; inactive points get nothing). Extra conditions on the
/// coordinate jets may be appended.
pub fn lax_constraint_system(config: &MarkedConfig, basis: &GBasis, d: &Divisor, norm: Normalization) -> ConstraintSystem {
    let r = basis.dim();
    let mut ansatz = d.clone();
    let mut sys_conds = Vec::new();
    let mut aux = 0;
    for t in config.active_tyurin() {
        let ty = tyurin_system(&config.algebra, &t.alpha, norm);
        ansatz.add_at(&t.gamma, -ty.min_order);
        for c in &ty.conditions {
            let mut terms = Vec::new();
            for (v, coef) in &c.terms {
                match v {
                    Var::Aux(a) => terms.push((Slot::Aux(aux + a), coef.clone())),
                    Var::Entry { order, row, col } => {
                        for (u, x) in basis.elements.iter().enumerate() {
                            let e = x.get(*row, *col);
                            if !e.is_zero() {
                                terms.push((Slot::Jet { point: t.gamma.clone(), order: *order, component: u }, coef * e));
                            }
                        }
                    }
                }
            }
            sys_conds.push(LinearCondition { terms, rhs: c.rhs.clone(), label: format!("{} at {}", c.group, t.gamma) });
        }
        aux += ty.aux;
    }
    ConstraintSystem { ansatz_divisor: ansatz, rank: r, aux, linear_conditions: sys_conds }
}

/// Lax operators with `(L) ≥ −D` away from the weak singularities.
pub fn lax_space(config: &MarkedConfig, basis: &GBasis, d: &Divisor) -> SectionSpace {
    let sys = lax_constraint_system(config, basis, d, Normalization::Lax);
    solve_system(&sys).expect("homogeneous systems are consistent")
}

/// A random element of a section space with small Gaussian-integer coordinates.
pub fn random_element<R: Rng>(space: &SectionSpace, basis: &GBasis, rng: &mut R) -> LaxElement {
    let mut coords = vec![Gq::zero(); space.basis.first().map_or(0, |b| b.len())];
    for v in &space.basis {
        let c = Gq::from_parts((rng.gen_range(-3..=3), 1), (rng.gen_range(-1..=1), 1));
        if c.is_zero() {
            continue;
        }
        for (x, y) in coords.iter_mut().zip(v) {
            *x += &(&c * y);
        }
    }
    if coords.is_empty() {
        return LaxElement::zero(basis.matrix_size());
    }
    LaxElement::new(basis.matrix_size(), basis.combine_fn(&space.element(&coords)))
}

/// A random Lax operator with poles of order at most `m` at the points of `A`.
pub fn random_member<R: Rng>(config: &MarkedConfig, basis: &GBasis, m: i64, rng: &mut R) -> LaxElement {
    let d = Divisor::from_pairs(config.marked_points().map(|p| (p.clone(), m)));
    random_element(&lax_space(config, basis, &d), basis, rng)
}

/// The coordinates `(β, κ, ν)` solving the conditions at one point, if any.
pub fn witnesses(l: &LaxElement, config: &MarkedConfig, gamma: &Point) -> Option<Vec<Gq>> {
    let t = config.tyurin.iter().find(|t| t.gamma == *gamma)?;
    let sys = tyurin_system(&config.algebra, &t.alpha, Normalization::Lax);
    let jets = l.jet(gamma, sys.min_order, sys.max_order);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for c in &sys.conditions {
        let mut row = vec![Gq::zero(); sys.aux];
        let mut b = c.rhs.clone();
        for (v, coef) in &c.terms {
            match v {
                Var::Aux(a) => row[*a] += coef,
                Var::Entry { order, row: i, col: j } => b -= &(coef * jets[(order - sys.min_order) as usize].get(*i, *j)),
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    solve_affine(&rows, &rhs, sys.aux).map(|(p, _)| p)
}

/// `κ` at `γ` when `α` determines it (always, since `α ≠ 0`).
pub fn kappa(l: &LaxElement, config: &MarkedConfig, gamma: &Point) -> Option<Gq> {
    let m = config.algebra.matrix_size();
    witnesses(l, config, gamma).map(|w| w[m].clone())
}
