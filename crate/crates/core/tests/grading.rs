mod common;

use common::*;
use laxalg::exactmath::{Gq, Mat, Point, RationalFunction};
use laxalg::geometry::{grading_divisor_io, Divisor};
use laxalg::grading::{
    check_fine_structure, commutator_approximation, degree_decompose, homogeneous_basis, structure_constants,
    GradedBasis,
};
use laxalg::laxalgebra::{kn_function_basis, lax_space, random_element, Family, LaxElement};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn build(c: &laxalg::laxalgebra::MarkedConfig, w: (i64, i64)) -> GradedBasis {
    homogeneous_basis(w, c, &standard(c)).unwrap()
}

/// Local form: `X^u_{m,s} = X^u z_p^m δ_s^p + O(z_p^{m+1})` at every in-point.
fn check_local_form(b: &GradedBasis) {
    for (&(m, s, u), x) in &b.elements {
        for (p_idx, p) in b.config.in_points.iter().enumerate() {
            let lead = x.jet_coeff(p, m);
            let want = if p_idx == s { b.g_basis.elements[u].clone() } else { Mat::zeros(x.size(), x.size()) };
            assert_eq!(lead, want, "leading term of X{:?} at {p}", (m, s, u));
            assert!(x.ord_at(p).map_or(true, |o| o >= m));
        }
    }
}

#[test]
fn dimension_law_and_local_form() {
    for (c, w) in [(classical_sl2(), (-3, 3)), (sl2_two_points(), (-3, 3)), (gl2_one_tyurin(), (-3, 3))] {
        let b = build(&c, w);
        for m in w.0..=w.1 {
            assert_eq!(b.degree(m).count(), c.n_in() * c.algebra.dim());
        }
        check_local_form(&b);
    }
}

#[test]
fn classical_elements_are_monomials() {
    let c = classical_sl2();
    let b = build(&c, (-4, 4));
    assert!(b.adjustments.is_empty());
    for (&(m, _, u), x) in &b.elements {
        assert_eq!(*x, LaxElement::times(&b.g_basis.elements[u], &RationalFunction::monomial(m)));
    }
}

#[test]
fn scalar_algebra_is_the_function_algebra() {
    let c = config(Family::Gl, 1, &[0, 1], &[]);
    let b = build(&c, (-3, 3));
    let presc = standard(&c);
    for (&(m, s, _), x) in &b.elements {
        let a = kn_function_basis(m, s, &c, &presc).unwrap();
        assert_eq!(x.get(0, 0), &a);
    }
}

#[test]
fn classical_structure_constants() {
    let c = classical_sl2();
    let b = build(&c, (-4, 4));
    let sc = structure_constants(&b, 0).unwrap();
    assert_eq!(sc.observed_s, 0);
    check_fine_structure(&b, &sc).unwrap();
    // Chevalley order E, F, H: [E_k, F_m] = H_{k+m}
    let d = sc.bracket((1, 0, 0), (-3, 0, 1)).unwrap();
    assert_eq!(d.terms.len(), 1);
    assert_eq!(d.terms[&(-2, 0, 2)], Gq::one());
}

#[test]
fn two_point_structure_constants() {
    let c = sl2_two_points();
    let b = build(&c, (-3, 4));
    let sc = structure_constants(&b, 1).unwrap();
    assert!(sc.observed_s <= 1);
    check_fine_structure(&b, &sc).unwrap();
    for ((a, bb), d) in &sc.tensor {
        for k in d.terms.keys() {
            assert!(k.0 >= a.0 + bb.0 && k.0 <= a.0 + bb.0 + sc.observed_s);
        }
    }
}

#[test]
fn tyurin_structure_constants_decompose() {
    for c in [gl2_one_tyurin(), gl2_two_tyurin()] {
        let b = build(&c, (-3, 4));
        let sc = structure_constants(&b, 2).unwrap();
        check_fine_structure(&b, &sc).unwrap();
        assert!(sc.observed_s <= 2);
    }
}

fn random_combination(b: &GradedBasis, rng: &mut ChaCha8Rng, degrees: &[i64]) -> Vec<((i64, usize, usize), Gq)> {
    let mut out = Vec::new();
    for k in b.indices().into_iter().filter(|k| degrees.contains(&k.0)) {
        let c = g(rng.gen_range(-4..=4), rng.gen_range(-2..=2));
        if rng.gen_bool(0.5) && !c.is_zero() {
            out.push((k, c));
        }
    }
    out
}

#[test]
fn decomposition_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for c in [sl2_two_points(), gl2_one_tyurin()] {
        let b = build(&c, (-3, 3));
        for _ in 0..10 {
            let terms = random_combination(&b, &mut rng, &[-2, 0, 1, 3]);
            let l = b.combine(&terms);
            let d = b.decompose(&l).unwrap();
            assert_eq!(d.terms, terms.iter().cloned().collect());
            let comps = degree_decompose(&l, &b).unwrap();
            let sum = comps.values().fold(LaxElement::zero(l.size()), |acc, x| &acc + x);
            assert_eq!(sum, l);
        }
        // a single basis element has one component
        let k = (1, 0, 1);
        assert_eq!(b.decompose(b.element(k)).unwrap().degrees(), vec![1]);
    }
}

/// Members of `L'(E_m)`, `E_m = m·ΣP + D_W + (D_m)_O`, live in degrees `[−m, m]`.
#[test]
fn sections_of_e_m_decompose_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for c in [sl2_two_points(), gl2_two_tyurin()] {
        let m = 2;
        let b = build(&c, (-m, m));
        assert!(b.adjustments.is_empty());
        let mut e = Divisor::from_pairs(c.in_points.iter().map(|p| (p.clone(), m)));
        for q in &c.out_points {
            e.add_at(q, grading_divisor_io(m, &c, &b.prescription).get(q));
        }
        let space = lax_space(&c, &b.g_basis, &e);
        assert_eq!(space.dim(), (2 * m as usize + 1) * c.n_in() * c.algebra.dim());
        for _ in 0..5 {
            let l = random_element(&space, &b.g_basis, &mut rng);
            let d = b.decompose(&l).unwrap();
            assert!(d.degrees().iter().all(|&k| (-m..=m).contains(&k)));
        }
    }
}

/// Filtration: elements vanishing to order `m` at every in-point are exactly
/// the combinations of basis elements of degree `≥ m`.
#[test]
fn filtration_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = sl2_two_points();
    let b = build(&c, (-4, 4));
    for m in [-1, 0, 2] {
        for (&(k, _, _), x) in &b.elements {
            if k >= m {
                assert!(c.in_points.iter().all(|p| x.ord_at(p).unwrap() >= m));
            }
        }
        // sections with order ≥ m at I and bounded poles at O
        let mut d = Divisor::from_pairs(c.in_points.iter().map(|p| (p.clone(), -m)));
        d.add_at(&Point::Infinity, 2);
        let space = lax_space(&c, &b.g_basis, &d);
        for _ in 0..4 {
            let l = random_element(&space, &b.g_basis, &mut rng);
            let dec = b.decompose(&l).unwrap();
            assert!(dec.degrees().iter().all(|&k| k >= m));
        }
    }
}

#[test]
fn commutator_approximation_peels_leading_terms() {
    let c = classical_sl2();
    let b = build(&c, (-4, 6));
    // y = H_2: one pair [E_0, F_2]
    let h2 = b.element((2, 0, 2)).clone();
    let pairs = commutator_approximation(&h2, 3, &b).unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].0.commutator(&pairs[0].1), h2);
    // already deep enough
    assert!(commutator_approximation(&h2, 2, &b).unwrap().is_empty());

    let c = sl2_two_points();
    let b = build(&c, (-3, 6));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let y = b.combine(&random_combination(&b, &mut rng, &[-1, 0, 1]));
    let pairs = commutator_approximation(&y, 3, &b).unwrap();
    let rest = pairs.iter().fold(y.clone(), |acc, (p, q)| &acc - &p.commutator(q));
    for p in &c.in_points {
        assert!(rest.ord_at(p).map_or(true, |o| o >= 3));
    }
}

#[test]
fn element_below_window_is_rejected() {
    let b = build(&classical_sl2(), (-2, 2));
    let l = LaxElement::times(&b.g_basis.elements[0], &RationalFunction::monomial(-3));
    assert!(b.decompose(&l).is_err());
    let l = LaxElement::times(&b.g_basis.elements[0], &RationalFunction::monomial(3));
    assert!(b.decompose(&l).is_err());
}
