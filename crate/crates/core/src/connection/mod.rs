//! The connection form `ω = W dz`, the covariant derivative `∇_e = ẽ·(d/dz + [W, ·])`
//! and the module structures over functions, vector fields and their semidirect sums.

mod axioms;

use serde::{Serialize, Serializer};

use crate::error::{MathError, Result};
use crate::exactmath::{Gq, Mat, Point, RationalFunction};
use crate::geometry::{solve_system, Divisor};
use crate::laxalgebra::{
    is_connection_form, lax_constraint_system, vf_action, vf_bracket, LaxElement, MarkedConfig, Membership,
    Normalization, VectorField,
};

pub use axioms::{verify_module_axioms, AxiomCheck, ModuleReport};

/// A g-valued meromorphic 1-form `W dz`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionForm {
    pub matrix_part: LaxElement,
    pub config: MarkedConfig,
    /// Pole order of `ω` allowed at the last out-point when it was built.
    pub pole_budget: i64,
}

#[derive(Serialize)]
struct FormJson<'a> {
    matrix: &'a LaxElement,
    differential: &'static str,
    budget_point: &'a Point,
    pole_budget: i64,
}

impl Serialize for ConnectionForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            matrix: &self.matrix_part,
            differential: "dz",
            budget_point: self.config.out_points.last().expect("validated config"),
            pole_budget: self.pole_budget,
        }
        .serialize(s)
    }
}

impl ConnectionForm {
    pub fn zero(config: &MarkedConfig) -> Self {
        Self { matrix_part: LaxElement::zero(config.algebra.matrix_size()), config: config.clone(), pole_budget: 0 }
    }

    pub fn from_matrix(matrix_part: LaxElement, config: &MarkedConfig) -> Self {
        Self { matrix_part, config: config.clone(), pole_budget: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix_part.is_zero()
    }

    /// Order of the 1-form in the local chart (`dz = −w⁻²dw` at `∞`).
    pub fn ord_at(&self, p: &Point) -> Option<i64> {
        let o = self.matrix_part.ord_at(p)?;
        Some(if p.is_infinite() { o - 2 } else { o })
    }

    /// Coefficient matrices of `ω` in the local chart, orders `lo..=hi`.
    pub fn jet(&self, p: &Point, lo: i64, hi: i64) -> Vec<Mat> {
        match p {
            Point::Infinity => {
                let minus = -Gq::from_int(1);
                self.matrix_part.jet(p, lo + 2, hi + 2).into_iter().map(|m| m.scale(&minus)).collect()
            },
            _ => self.matrix_part.jet(p, lo, hi),
        }
    }

    /// Checks the weak-singularity conditions, holomorphy at `I` and
    /// holomorphy away from `A ∪ W`; names the first violation.
    pub fn check(&self) -> Result<Membership> {
        let v = is_connection_form(&self.matrix_part, &self.config)?;
        if !v.is_yes() {
            return Ok(v);
        }
        for p in &self.config.in_points {
            if self.ord_at(p).is_some_and(|o| o < 0) {
                return Ok(Membership::No { condition: "holomorphic at I".into(), point: p.to_string() });
            }
        }
        let at_inf = Point::Infinity;
        let marked = self.config.marked_points().any(|p| *p == at_inf)
            || self.config.active_tyurin().any(|t| t.gamma == at_inf);
        if !marked && self.ord_at(&at_inf).is_some_and(|o| o < 0) {
            return Ok(Membership::No { condition: "holomorphic outside A and W".into(), point: at_inf.to_string() });
        }
        Ok(Membership::Yes)
    }
}

/// The connection form with the smallest pole order at the last out-point,
/// holomorphic at `I` and at the other out-points; `ω = 0` when no `α_s ≠ 0`.
pub fn build_connection_form(config: &MarkedConfig) -> Result<ConnectionForm> {
    config.validate()?;
    let k = config.active_tyurin().count();
    if k == 0 {
        return Ok(ConnectionForm::zero(config));
    }
    if config.active_tyurin().any(|t| t.gamma.is_infinite()) {
        return Err(MathError::Config("connection forms need the weak singularities at finite points".into()));
    }
    let basis = config.algebra.connection_basis()?;
    let q = config.out_points.last().unwrap();
    let cap = 2 + (k * basis.dim()) as i64;
    for budget in 0..=cap {
        let mut d = Divisor::zero();
        d.add_at(&Point::Infinity, -2);
        d.add_at(q, budget);
        let sys = lax_constraint_system(config, &basis, &d, Normalization::Connection);
        let Some(space) = solve_system(&sys) else { continue };
        let coords = space.particular.as_ref().expect("the pairing condition is inhomogeneous");
        let w = LaxElement::new(basis.matrix_size(), basis.combine_fn(&space.element(&coords[..space.scalar_basis.len() * space.rank])));
        let form = ConnectionForm { matrix_part: w, config: config.clone(), pole_budget: budget };
        match form.check()? {
            Membership::Yes => return Ok(form),
            Membership::No { condition, point } => {
                return Err(MathError::NoSolution(format!("constructed form violates {condition} at {point}")))
            }
        }
    }
    Err(MathError::NoSolution(format!("no connection form with pole order at most {cap} at {q}")))
}

/// `∇_e L = ẽ·(dL/dz + [W, L])`.
pub fn covariant_derivative(omega: &ConnectionForm, e: &VectorField, l: &LaxElement) -> LaxElement {
    let inner = if omega.is_zero() { l.derivative() } else { &l.derivative() + &omega.matrix_part.commutator(l) };
    inner.mul_fn(&e.coefficient)
}

/// An element `(g, e)` of the differential operators of degree at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D1Element {
    pub function: RationalFunction,
    pub field: VectorField,
}

/// `[(g,e),(h,f)] = (e.h − f.g, [e,f])`.
pub fn d1_bracket(x: &D1Element, y: &D1Element) -> D1Element {
    D1Element {
        function: &vf_action(&x.field, &y.function) - &vf_action(&y.field, &x.function),
        field: vf_bracket(&x.field, &y.field),
    }
}

/// The action of `(g, e)` on a Lax operator: `g·L + ∇_e L`.
pub fn d1_action(omega: &ConnectionForm, x: &D1Element, l: &LaxElement) -> LaxElement {
    &l.mul_fn(&x.function) + &covariant_derivative(omega, &x.field, l)
}

/// An element `L + e` of the semidirect sum of the Lax algebra and the vector fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgElement {
    pub current_part: LaxElement,
    pub field_part: VectorField,
}

impl DgElement {
    pub fn current(l: LaxElement) -> Self {
        Self { current_part: l, field_part: VectorField::new(RationalFunction::zero()) }
    }

    pub fn field(size: usize, e: VectorField) -> Self {
        Self { current_part: LaxElement::zero(size), field_part: e }
    }

    pub fn is_zero(&self) -> bool {
        self.current_part.is_zero() && self.field_part.coefficient.is_zero()
    }
}

/// `[L + e, L′ + f] = [L, L′] + ∇_e L′ − ∇_f L + [e, f]`.
pub fn dg_bracket(x: &DgElement, y: &DgElement, omega: &ConnectionForm) -> DgElement {
    let mut cur = x.current_part.commutator(&y.current_part);
    if !x.field_part.coefficient.is_zero() {
        cur = &cur + &covariant_derivative(omega, &x.field_part, &y.current_part);
    }
    if !y.field_part.coefficient.is_zero() {
        cur = &cur - &covariant_derivative(omega, &y.field_part, &x.current_part);
    }
    DgElement { current_part: cur, field_part: vf_bracket(&x.field_part, &y.field_part) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laxalgebra::{is_member, AlgebraSpec, Family, TyurinPoint};

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn gl(n: usize, tyurin: Vec<(i64, Vec<i64>)>) -> MarkedConfig {
        MarkedConfig {
            genus: 0,
            in_points: vec![Point::from(0)],
            out_points: vec![Point::Infinity],
            tyurin: tyurin
                .into_iter()
                .map(|(g, a)| TyurinPoint { gamma: Point::from(g), alpha: a.into_iter().map(Gq::from_int).collect() })
                .collect(),
            algebra: AlgebraSpec::new(Family::Gl, n),
        }
    }

    #[test]
    fn scalar_form_is_logarithmic() {
        let w = build_connection_form(&gl(1, vec![(3, vec![1])])).unwrap();
        assert_eq!(w.matrix_part.get(0, 0), &rf("1/(z-3)"));
        assert_eq!(w.pole_budget, 1);
        assert_eq!(w.ord_at(&Point::Infinity), Some(-1));
    }

    #[test]
    fn no_weak_singularities_gives_zero() {
        assert!(build_connection_form(&gl(2, vec![])).unwrap().is_zero());
        assert!(build_connection_form(&gl(2, vec![(1, vec![0, 0])])).unwrap().is_zero());
    }

    #[test]
    fn gl2_form_satisfies_conditions() {
        let c = gl(2, vec![(2, vec![1, 1]), (-1, vec![1, 2])]);
        let w = build_connection_form(&c).unwrap();
        assert!(w.check().unwrap().is_yes());
        let res = w.jet(&Point::from(2), -1, -1).pop().unwrap();
        assert_eq!(res.trace(), Gq::from_int(1));
        // the derivative of a member is a member
        let l = LaxElement::from_rows(vec![vec![rf("z"), rf("0")], vec![rf("0"), rf("z")]]);
        let e = VectorField::new(rf("z"));
        assert!(is_member(&covariant_derivative(&w, &e, &l), &c).unwrap().is_yes());
    }

    #[test]
    fn serializes_with_marker() {
        let w = build_connection_form(&gl(1, vec![(3, vec![1])])).unwrap();
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["differential"], "dz");
        let back: LaxElement = serde_json::from_value(v["matrix"].clone()).unwrap();
        assert_eq!(back, w.matrix_part);
    }

    #[test]
    fn classical_derivative() {
        let c = gl(2, vec![]);
        let w = build_connection_form(&c).unwrap();
        let x = Mat::from_ints(&[&[0, 1], &[0, 0]]);
        let l = LaxElement::times(&x, &RationalFunction::monomial(-3));
        let d = covariant_derivative(&w, &VectorField::new(rf("z")), &l);
        assert_eq!(d, l.scale(&Gq::from_int(-3)));
    }
}
