mod common;

use common::*;
use laxalg::connection::{
    build_connection_form, covariant_derivative, dg_bracket, verify_module_axioms, ConnectionForm, DgElement,
};
use laxalg::exactmath::{residue_at, Gq, Mat, Point, RationalFunction};
use laxalg::grading::homogeneous_basis;
use laxalg::laxalgebra::{is_member, random_member, vf_bracket, Family, LaxElement, MarkedConfig, VectorField};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RationalFunction {
    s.parse().unwrap()
}

#[test]
fn scalar_form_has_unit_residue() {
    for gamma in [2, -3, 5] {
        let c = config(Family::Gl, 1, &[0], &[(gamma, vec![g(1, 0)])]);
        let w = build_connection_form(&c).unwrap();
        let f = w.matrix_part.get(0, 0);
        assert_eq!(*f, rf(&format!("1/(z-({gamma}))")));
        // independent: residue 1 at γ, zero at the in-point, order 1 at ∞
        assert_eq!(residue_at(f, &Point::from(gamma)), Gq::one());
        assert!(f.eval(&Gq::zero()).is_some());
    }
}

/// Tyurin data of the constructed form read off its jets, without the solver.
fn check_gl_jets(w: &ConnectionForm, c: &MarkedConfig) {
    let n = c.algebra.matrix_size();
    for t in &c.tyurin {
        let j = w.jet(&t.gamma, -2, 0);
        assert!(j[0].is_zero(), "double pole at {}", t.gamma);
        let (res, w0) = (&j[1], &j[2]);
        assert_eq!(res.trace(), Gq::one());
        // every column of the residue is a multiple of α
        let piv = t.alpha.iter().position(|a| !a.is_zero()).unwrap();
        for col in 0..n {
            let lam = res.get(piv, col) / &t.alpha[piv];
            for i in 0..n {
                assert_eq!(*res.get(i, col), &lam * &t.alpha[i]);
            }
        }
        let v = w0.mul_vec(&t.alpha);
        let kappa = &v[piv] / &t.alpha[piv];
        for i in 0..n {
            assert_eq!(v[i], &kappa * &t.alpha[i]);
        }
    }
    for p in &c.in_points {
        assert!(w.ord_at(p).map_or(true, |o| o >= 0));
    }
}

#[test]
fn gl_forms_satisfy_conditions_by_jets() {
    for c in [gl2_one_tyurin(), gl2_two_tyurin(), config(Family::Sl, 2, &[0, 1], &[(3, vec![g(0, 1), g(1, 0)])])] {
        let w = build_connection_form(&c).unwrap();
        check_gl_jets(&w, &c);
        assert!(w.check().unwrap().is_yes());
    }
}

#[test]
fn so_and_sp_forms_satisfy_conditions() {
    for c in [sp4_one_tyurin(), so4_isotropic()] {
        let w = build_connection_form(&c).unwrap();
        assert!(w.check().unwrap().is_yes());
        assert!(c.algebra.contains(&w.jet(&Point::from(5), 0, 0)[0]));
    }
}

#[test]
fn construction_is_deterministic() {
    let c = gl2_two_tyurin();
    assert_eq!(build_connection_form(&c).unwrap(), build_connection_form(&c).unwrap());
}

#[test]
fn classical_derivative_is_degree_times_element() {
    let c = classical_sl2();
    let w = build_connection_form(&c).unwrap();
    assert!(w.is_zero());
    let e = VectorField::new(rf("z"));
    let x = Mat::from_ints(&[&[1, 0], &[0, -1]]);
    for m in -3..=3 {
        let l = LaxElement::times(&x, &RationalFunction::monomial(m));
        assert_eq!(covariant_derivative(&w, &e, &l), l.scale(&Gq::from_int(m)));
    }
}

#[test]
fn derivative_preserves_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for c in [gl2_one_tyurin(), sp4_one_tyurin(), so4_isotropic()] {
        let w = build_connection_form(&c).unwrap();
        let b = c.algebra.basis().unwrap();
        for e in [rf("z"), rf("z^2+1"), rf("1/z")] {
            let l = random_member(&c, &b, 1, &mut rng);
            let d = covariant_derivative(&w, &VectorField::new(e), &l);
            assert!(is_member(&d, &c).unwrap().is_yes());
        }
    }
}

#[test]
fn leibniz_on_random_instances() {
    let c = gl2_two_tyurin();
    let w = build_connection_form(&c).unwrap();
    let b = c.algebra.basis().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (e, h) in [("z", "z^2"), ("z^2-3", "1/z"), ("(z+1)/z", "z-2")] {
        let (e, h) = (VectorField::new(rf(e)), rf(h));
        let l = random_member(&c, &b, 1, &mut rng);
        let lhs = covariant_derivative(&w, &e, &l.mul_fn(&h));
        let eh = &e.coefficient * &h.derivative();
        let rhs = &l.mul_fn(&eh) + &covariant_derivative(&w, &e, &l).mul_fn(&h);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn classical_two_point_axioms() {
    let c = sl2_two_points();
    let b = homogeneous_basis((-3, 5), &c, &standard(&c)).unwrap();
    let w = build_connection_form(&c).unwrap();
    let r = verify_module_axioms(&b, &w, 12, 1).unwrap();
    for chk in &r.checks {
        assert!(chk.passed(), "{}: {:?}", chk.name, chk.failure);
    }
    assert!(r.get("field module leading term").unwrap().checked > 0);
}

#[test]
fn gl2_tyurin_axioms() {
    let c = gl2_one_tyurin();
    let b = homogeneous_basis((-3, 5), &c, &standard(&c)).unwrap();
    let w = build_connection_form(&c).unwrap();
    let r = verify_module_axioms(&b, &w, 50, 2).unwrap();
    assert!(r.all_passed(), "{:?}", r.checks.iter().filter(|c| !c.passed()).collect::<Vec<_>>());
    assert_eq!(r.get("derivation").unwrap().checked, 50);
    assert_eq!(r.get("gl split").unwrap().checked, 50);
}

#[test]
fn mismatched_form_breaks_nothing_structural() {
    // ∇ is a derivation for any g-valued form, even one violating the Tyurin conditions
    let c = gl2_one_tyurin();
    let b = homogeneous_basis((-2, 4), &c, &standard(&c)).unwrap();
    let w = ConnectionForm::from_matrix(LaxElement::constant(&Mat::from_ints(&[&[0, 1], &[0, 0]])), &c);
    let r = verify_module_axioms(&b, &w, 6, 3).unwrap();
    assert!(r.get("derivation").unwrap().passed());
}

#[test]
fn semidirect_bracket_examples() {
    let c = gl2_one_tyurin();
    let w = build_connection_form(&c).unwrap();
    let b = c.algebra.basis().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (e, f) = (VectorField::new(rf("z^2")), VectorField::new(rf("z-1")));
    let ee = DgElement::field(2, e.clone());
    let br = dg_bracket(&ee, &DgElement::field(2, f.clone()), &w);
    assert!(br.current_part.is_zero());
    assert_eq!(br.field_part, vf_bracket(&e, &f));
    let l = random_member(&c, &b, 1, &mut rng);
    let br = dg_bracket(&ee, &DgElement::current(l.clone()), &w);
    assert_eq!(br.current_part, covariant_derivative(&w, &e, &l));
    assert!(br.field_part.coefficient.is_zero());
    let x = DgElement { current_part: l, field_part: f };
    assert!(dg_bracket(&x, &x, &w).is_zero());
}
