mod common;

use common::*;
use laxalg::exactmath::Mat;
use laxalg::laxalgebra::{
    gl_split, is_member, AlgebraSpec, kappa, lax_bracket, lax_product, random_member, witnesses, Family, LaxElement, MarkedConfig,
    Membership,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family_configs(family: Family) -> Vec<MarkedConfig> {
    let (n, a1, a2) = match family {
        Family::Gl | Family::Sl | Family::S => (2, vec![g(1, 0), g(1, 0)], vec![g(1, 0), g(2, 0)]),
        Family::So => (4, vec![g(1, 0), g(0, 1), g(1, 0), g(0, 1)], vec![g(1, 0), g(0, 0), g(0, 1), g(0, 0)]),
        Family::Sp => (2, vec![g(1, 0), g(0, 0), g(1, 0), g(1, 0)], vec![g(0, 0), g(1, 0), g(2, 0), g(0, 1)]),
    };
    vec![
        config(family, n, &[0], &[]),
        config(family, n, &[0], &[(2, a1.clone())]),
        config(family, n, &[0], &[(2, a1), (-1, a2)]),
    ]
}

fn assert_member(l: &LaxElement, c: &MarkedConfig, what: &str) {
    match is_member(l, c).unwrap() {
        Membership::Yes => {}
        v => panic!("{what} left the algebra: {v:?}"),
    }
}

fn closure(family: Family, pairs: usize) {
    let configs = family_configs(family);
    let bases: Vec<_> = configs.iter().map(|c| c.algebra.basis().unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..pairs {
        let i = k % configs.len();
        let (c, b) = (&configs[i], &bases[i]);
        let x = random_member(c, b, 1, &mut rng);
        let y = random_member(c, b, 1, &mut rng);
        assert_member(&x, c, "sample");
        assert_member(&lax_bracket(&x, &y), c, "bracket");
        if matches!(family, Family::Gl | Family::S) {
            assert_member(&lax_product(&x, &y, c).unwrap(), c, "product");
        }
    }
}

#[test]
fn closure_gl() {
    closure(Family::Gl, 200);
}

#[test]
fn closure_sl() {
    closure(Family::Sl, 200);
}

#[test]
fn closure_s() {
    closure(Family::S, 200);
}

#[test]
fn closure_so() {
    closure(Family::So, 200);
}

#[test]
fn closure_sp() {
    closure(Family::Sp, 200);
}

#[test]
fn product_rejected_outside_gl() {
    let c = sp4_one_tyurin();
    let x = LaxElement::zero(4);
    assert!(lax_product(&x, &x, &c).is_err());
}

/// The product of two gl members has no double pole at `γ`, and its eigenvalue
/// witness is `β′ᵗL″₁α + κ′κ″`.
#[test]
fn product_kappa_composition() {
    let c = gl2_two_tyurin();
    let b = c.algebra.basis().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let x = random_member(&c, &b, 1, &mut rng);
        let y = random_member(&c, &b, 1, &mut rng);
        let p = lax_product(&x, &y, &c).unwrap();
        for t in &c.tyurin {
            let gamma = &t.gamma;
            assert!(p.ord_at(gamma).map_or(true, |o| o >= -1), "double pole at {gamma}");
            let wx = witnesses(&x, &c, gamma).unwrap();
            let beta_x = Mat::row_vec(&wx[..2]);
            let y1 = y.jet_coeff(gamma, 1);
            let corr = &(&beta_x * &y1) * &Mat::column(&t.alpha);
            let expected = corr.get(0, 0) + &(&kappa(&x, &c, gamma).unwrap() * &kappa(&y, &c, gamma).unwrap());
            assert_eq!(kappa(&p, &c, gamma).unwrap(), expected);
        }
    }
}

#[test]
fn bracket_is_antisymmetric_and_jacobi() {
    let c = gl2_one_tyurin();
    let b = c.algebra.basis().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let x = random_member(&c, &b, 1, &mut rng);
        let y = random_member(&c, &b, 1, &mut rng);
        let z = random_member(&c, &b, 1, &mut rng);
        assert!((&lax_bracket(&x, &y) + &lax_bracket(&y, &x)).is_zero());
        let j = &(&lax_bracket(&x, &lax_bracket(&y, &z)) + &lax_bracket(&y, &lax_bracket(&z, &x)))
            + &lax_bracket(&z, &lax_bracket(&x, &y));
        assert!(j.is_zero());
    }
}

#[test]
fn gl_split_parts_are_members() {
    let c = gl2_two_tyurin();
    let b = c.algebra.basis().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sl = MarkedConfig { algebra: AlgebraSpec::new(Family::Sl, 2), ..c.clone() };
    for _ in 0..20 {
        let x = random_member(&c, &b, 2, &mut rng);
        let (s, t) = gl_split(&x);
        assert_eq!(&s + &t, x);
        assert!(t.trace().is_zero());
        assert_member(&t, &sl, "trace-free part");
        for tp in &c.tyurin {
            assert!(s.ord_at(&tp.gamma).map_or(true, |o| o >= 0));
        }
    }
}
