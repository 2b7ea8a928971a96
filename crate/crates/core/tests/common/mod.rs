#![allow(dead_code)]

use laxalg::exactmath::{Gq, Point};
use laxalg::geometry::GradingPrescription;
use laxalg::laxalgebra::{AlgebraSpec, Family, MarkedConfig, TyurinPoint};

pub fn g(re: i64, im: i64) -> Gq {
    Gq::from_parts((re, 1), (im, 1))
}

pub fn config(family: Family, n: usize, ins: &[i64], tyurin: &[(i64, Vec<Gq>)]) -> MarkedConfig {
    MarkedConfig {
        genus: 0,
        in_points: ins.iter().map(|&x| Point::from(x)).collect(),
        out_points: vec![Point::Infinity],
        tyurin: tyurin
            .iter()
            .map(|(x, a)| TyurinPoint { gamma: Point::from(*x), alpha: a.clone() })
            .collect(),
        algebra: AlgebraSpec::new(family, n),
    }
}

pub fn standard(c: &MarkedConfig) -> GradingPrescription {
    GradingPrescription::standard(c.n_in(), c.n_out(), 0).unwrap()
}

pub fn classical_sl2() -> MarkedConfig {
    config(Family::Sl, 2, &[0], &[])
}

pub fn sl2_two_points() -> MarkedConfig {
    config(Family::Sl, 2, &[0, 1], &[])
}

pub fn gl2_one_tyurin() -> MarkedConfig {
    config(Family::Gl, 2, &[0], &[(2, vec![g(1, 0), g(1, 0)])])
}

pub fn gl2_two_tyurin() -> MarkedConfig {
    config(Family::Gl, 2, &[0], &[(2, vec![g(1, 0), g(1, 0)]), (-1, vec![g(1, 0), g(2, 0)])])
}

pub fn sp4_one_tyurin() -> MarkedConfig {
    config(Family::Sp, 2, &[0], &[(2, vec![g(1, 0), g(0, 0), g(1, 0), g(1, 0)])])
}

pub fn so4_isotropic() -> MarkedConfig {
    config(Family::So, 4, &[0], &[(2, vec![g(1, 0), g(0, 1), g(1, 0), g(0, 1)])])
}
