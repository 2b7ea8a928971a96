//! Constrained Riemann–Roch spaces on the sphere.
//!
//! The solver works in two stages. First the scalar space `L(D)` is cut out of
//! a partial-fraction ansatz (constants, then for each pole point in `Point`
//! order the powers `(z−p)^{-k}` resp. `z^k`, `k = 1..D(p)`) by the vanishing
//! conditions at points where `D < 0`. Then the vector-valued unknowns
//! `c_{j,c}` (scalar basis index `j`, then component `c`) together with the
//! auxiliary witnesses are constrained by the user conditions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::divisor::Divisor;
use crate::exactmath::linalg::{kernel, rref, solve_affine};
use crate::exactmath::{laurent_expand, Gq, Point, Polynomial, RationalFunction};

/// A slot read by a linear condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    /// Coefficient of `order` in the expansion of vector component `component` at `point`.
    Jet { point: Point, order: i64, component: usize },
    /// An existential auxiliary unknown.
    Aux(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCondition {
    pub terms: Vec<(Slot, Gq)>,
    pub rhs: Gq,
    pub label: String,
}

impl LinearCondition {
    pub fn homogeneous(label: impl Into<String>, terms: Vec<(Slot, Gq)>) -> Self {
        Self { terms, rhs: Gq::zero(), label: label.into() }
    }
}

/// Sections `v` of `L(D)^r` subject to linear conditions on finitely many jet
/// coefficients, with optional auxiliary unknowns.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub ansatz_divisor: Divisor,
    pub rank: usize,
    pub aux: usize,
    pub linear_conditions: Vec<LinearCondition>,
}

impl ConstraintSystem {
    pub fn new(ansatz_divisor: Divisor, rank: usize) -> Self {
        Self { ansatz_divisor, rank, aux: 0, linear_conditions: Vec::new() }
    }
}

/// Solution space of a [`ConstraintSystem`] in coordinates over the scalar basis
/// of `L(D)`: an element is `Σ_j Σ_c x[j·r + c]·φ_j·e_c`.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub scalar_basis: Vec<RationalFunction>,
    pub rank: usize,
    /// Particular solution (present iff some condition is inhomogeneous).
    pub particular: Option<Vec<Gq>>,
    /// Basis of the homogeneous solutions, in reduced echelon form.
    pub basis: Vec<Vec<Gq>>,
    /// Common denominator of the scalar basis and their numerators over it.
    common_den: Polynomial,
    numerators: Vec<Polynomial>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The vector of rational functions with the given coordinates.
    pub fn element(&self, coords: &[Gq]) -> Vec<RationalFunction> {
        let r = self.rank;
        (0..r)
            .map(|c| {
                let mut num = Polynomial::zero();
                for (j, q) in self.numerators.iter().enumerate() {
                    let x = &coords[j * r + c];
                    if !x.is_zero() {
                        num = &num + &q.scale(x);
                    }
                }
                RationalFunction::new(num, self.common_den.clone()).unwrap()
            })
            .collect()
    }

    pub fn basis_elements(&self) -> Vec<Vec<RationalFunction>> {
        self.basis.iter().map(|v| self.element(v)).collect()
    }
}

/// Ansatz numerators over the common denominator `Π_{p finite, D(p)>0} (z−p)^{D(p)}`.
fn ansatz(d: &Divisor) -> (Polynomial, Vec<Polynomial>) {
    let poles: Vec<(Point, i64)> = d.iter().filter(|&(_, n)| n > 0).map(|(p, n)| (p.clone(), n)).collect();
    let mut den = Polynomial::one();
    for (p, n) in &poles {
        if let Point::Finite(a) = p {
            den = &den * &Polynomial::linear_root(a).pow(*n as usize);
        }
    }
    let mut nums = vec![den.clone()];
    for (p, n) in &poles {
        for k in 1..=*n as usize {
            let q = match p {
                Point::Finite(a) => den.div_exact(&Polynomial::linear_root(a).pow(k)).unwrap(),
                Point::Infinity => &den * &Polynomial::monomial(Gq::one(), k),
            };
            nums.push(q);
        }
    }
    (den, nums)
}

/// Scalar basis of `L(D)` as numerators over the ansatz denominator.
fn scalar_space(d: &Divisor) -> (Polynomial, Vec<Polynomial>) {
    let (den, nums) = ansatz(d);
    let funcs: Vec<RationalFunction> =
        nums.iter().map(|q| RationalFunction::new(q.clone(), den.clone()).unwrap()).collect();
    let mut rows: Vec<Vec<Gq>> = Vec::new();
    for (p, n) in d.iter().filter(|&(_, n)| n < 0) {
        let jets: Vec<_> = funcs.iter().map(|f| laurent_expand(f, p, 0, -n - 1)).collect();
        for k in 0..-n {
            rows.push(jets.iter().map(|j| j.coeff(k)).collect());
        }
    }
    let ker = kernel(&rows, nums.len());
    let basis = ker
        .iter()
        .map(|v| {
            v.iter().zip(&nums).fold(Polynomial::zero(), |acc, (x, q)| {
                if x.is_zero() {
                    acc
                } else {
                    &acc + &q.scale(x)
                }
            })
        })
        .collect();
    (den, basis)
}

/// Exact solution of a constraint system.
pub fn solve_system(sys: &ConstraintSystem) -> Option<SectionSpace> {
    let r = sys.rank;
    let (den, numerators) = scalar_space(&sys.ansatz_divisor);
    let scalar_basis: Vec<RationalFunction> = numerators
        .iter()
        .map(|q| RationalFunction::new(q.clone(), den.clone()).unwrap())
        .collect();
    let d = scalar_basis.len();
    let nvars = d * r;
    let total = nvars + sys.aux;

    // Expand every scalar basis function once per referenced point.
    let mut windows: BTreeMap<Point, (i64, i64)> = BTreeMap::new();
    for cond in &sys.linear_conditions {
        for (slot, _) in &cond.terms {
            if let Slot::Jet { point, order, .. } = slot {
                let w = windows.entry(point.clone()).or_insert((*order, *order));
                w.0 = w.0.min(*order);
                w.1 = w.1.max(*order);
            }
        }
    }
    let jets: BTreeMap<Point, Vec<_>> = windows
        .iter()
        .map(|(p, &(lo, hi))| (p.clone(), scalar_basis.iter().map(|f| laurent_expand(f, p, lo, hi)).collect()))
        .collect();

    let mut rows = Vec::with_capacity(sys.linear_conditions.len());
    let mut rhs = Vec::with_capacity(sys.linear_conditions.len());
    for cond in &sys.linear_conditions {
        let mut row = vec![Gq::zero(); total];
        for (slot, coef) in &cond.terms {
            match slot {
                Slot::Aux(a) => row[nvars + a] += coef,
                Slot::Jet { point, order, component } => {
                    assert!(*component < r, "condition component out of range");
                    for (j, jet) in jets[point].iter().enumerate() {
                        let c = jet.coeff(*order);
                        if !c.is_zero() {
                            row[j * r + component] += &(coef * &c);
                        }
                    }
                }
            }
        }
        rows.push(row);
        rhs.push(cond.rhs.clone());
    }

    let inhomogeneous = rhs.iter().any(|x| !x.is_zero());
    let (particular, kernel_full) = if rows.is_empty() {
        (vec![Gq::zero(); total], identity_basis(total))
    } else {
        solve_affine(&rows, &rhs, total)?
    };
    // Project away the auxiliary unknowns and re-echelonize.
    let mut projected: Vec<Vec<Gq>> = kernel_full.into_iter().map(|mut v| {
        v.truncate(nvars);
        v
    }).collect();
    rref(&mut projected, nvars);
    let particular = inhomogeneous.then(|| {
        let mut p = particular;
        p.truncate(nvars);
        p
    });
    Some(SectionSpace { scalar_basis, rank: r, particular, basis: projected, common_den: den, numerators })
}

fn identity_basis(n: usize) -> Vec<Vec<Gq>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Gq::zero(); n];
            v[i] = Gq::one();
            v
        })
        .collect()
}

/// Basis of the homogeneous solutions as `r`-vectors of rational functions.
pub fn section_space(sys: &ConstraintSystem, r: usize) -> Vec<Vec<RationalFunction>> {
    assert_eq!(sys.rank, r, "vector rank mismatch");
    solve_system(sys).map(|s| s.basis_elements()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::residue_at;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn one_pole_at_zero() {
        let sys = ConstraintSystem::new(Divisor::point(Point::from(0), 1), 1);
        let basis = section_space(&sys, 1);
        assert_eq!(basis, vec![vec![rf("1")], vec![rf("1/z")]]);
    }

    #[test]
    fn residue_condition_kills_pole() {
        let mut sys = ConstraintSystem::new(Divisor::point(Point::from(0), 1), 1);
        sys.linear_conditions.push(LinearCondition::homogeneous(
            "res",
            vec![(Slot::Jet { point: Point::from(0), order: -1, component: 0 }, Gq::one())],
        ));
        let basis = section_space(&sys, 1);
        assert_eq!(basis, vec![vec![rf("1")]]);
        assert!(residue_at(&basis[0][0], &Point::from(0)).is_zero());
    }

    #[test]
    fn inhomogeneous_particular() {
        // f in L([1] - [inf]) with residue 1 at 1: f = 1/(z-1).
        let d = Divisor::from_pairs([(Point::from(1), 1), (Point::Infinity, -1)]);
        let mut sys = ConstraintSystem::new(d, 1);
        sys.linear_conditions.push(LinearCondition {
            terms: vec![(Slot::Jet { point: Point::from(1), order: -1, component: 0 }, Gq::one())],
            rhs: Gq::one(),
            label: "res".into(),
        });
        let s = solve_system(&sys).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.element(s.particular.as_ref().unwrap()), vec![rf("1/(z-1)")]);
    }
}
