use num_traits::One;

use super::element::VectorField;
use super::spec::MarkedConfig;
use crate::error::Result;
use crate::exactmath::{Gq, Point, RationalFunction};
use crate::geometry::{solve_system, ConstraintSystem, Divisor, GradingPrescription};
use crate::grading::{normalized_family, BumpPolicy};

fn in_part(config: &MarkedConfig, s: usize, order: i64) -> Divisor {
    let mut d = Divisor::zero();
    for (t, p) in config.in_points.iter().enumerate() {
        d.add_at(p, if t == s { -order } else { -order - 1 });
    }
    d
}

/// `A_{m,s}`: order `m + 1 − δ_i^s` at `P_i`, poles at `O` bounded by `(D_m)_O`,
/// leading coefficient 1 at `P_s`.
pub fn kn_function_basis(m: i64, s: usize, config: &MarkedConfig, prescription: &GradingPrescription) -> Result<RationalFunction> {
    let d = &in_part(config, s, m) + &prescription.o_part(m, &config.out_points);
    let q = config.out_points.last().unwrap();
    let (mut e, _) = normalized_family("function basis", m, s, &d, q, &config.in_points[s], BumpPolicy::for_config(config), |dd| {
        solve_system(&ConstraintSystem::new(dd.clone(), 1)).expect("homogeneous")
    })?;
    Ok(e.remove(0).remove(0))
}

/// `e_{m,s}`: order `m + 2 − δ_i^s` at `P_i` in the local chart, poles at `O`
/// bounded by the vector-field prescription, leading coefficient 1 at `P_s`.
pub fn kn_vector_basis(m: i64, s: usize, config: &MarkedConfig, prescription: &GradingPrescription) -> Result<VectorField> {
    // (f d/dz) ≥ −D  ⟺  (f) ≥ −D − 2[∞].
    let mut d = &in_part(config, s, m + 1) + &prescription.o_part(m, &config.out_points);
    d.add_at(&Point::Infinity, 2);
    let p = &config.in_points[s];
    let (order, sign) = if p.is_infinite() { (m - 1, -Gq::one()) } else { (m + 1, Gq::one()) };
    let q = config.out_points.last().unwrap();
    let (mut e, _) = normalized_family("vector field basis", order, s, &d, q, p, BumpPolicy::for_config(config), |dd| {
        solve_system(&ConstraintSystem::new(dd.clone(), 1)).expect("homogeneous")
    })?;
    Ok(VectorField::new(e.remove(0).remove(0).scale(&sign)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laxalgebra::{vf_action, vf_bracket, AlgebraSpec, Family};

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn cfg(ins: &[i64]) -> MarkedConfig {
        MarkedConfig {
            genus: 0,
            in_points: ins.iter().map(|&x| Point::from(x)).collect(),
            out_points: vec![Point::Infinity],
            tyurin: vec![],
            algebra: AlgebraSpec::new(Family::Gl, 1),
        }
    }

    #[test]
    fn classical_monomials() {
        let c = cfg(&[0]);
        let p = GradingPrescription::single_out(1, 0);
        let v = GradingPrescription::vector_fields(1, 1, 0).unwrap();
        for m in -3..=3 {
            assert_eq!(kn_function_basis(m, 0, &c, &p).unwrap(), RationalFunction::monomial(m));
            assert_eq!(kn_vector_basis(m, 0, &c, &v).unwrap(), VectorField::new(RationalFunction::monomial(m + 1)));
        }
    }

    #[test]
    fn two_point_interpolation() {
        let c = cfg(&[0, 1]);
        let p = GradingPrescription::standard(2, 1, 0).unwrap();
        assert_eq!(kn_function_basis(0, 0, &c, &p).unwrap(), rf("1-z"));
        assert_eq!(kn_function_basis(0, 1, &c, &p).unwrap(), rf("z"));
    }

    #[test]
    fn witt_leading_terms() {
        let c = cfg(&[0, 1]);
        let v = GradingPrescription::vector_fields(2, 1, 0).unwrap();
        let pr = GradingPrescription::standard(2, 1, 0).unwrap();
        let p0 = Point::from(0);
        for (k, m) in [(1, 2), (-1, 3), (2, -2)] {
            let b = vf_bracket(&kn_vector_basis(k, 0, &c, &v).unwrap(), &kn_vector_basis(m, 0, &c, &v).unwrap());
            assert_eq!(b.ord_at(&p0), if m == k { None } else { Some(k + m + 1) });
            if m != k {
                assert_eq!(b.jet_coeff(&p0, k + m + 1), Gq::from_int(m - k));
            }
            let act = vf_action(&kn_vector_basis(k, 0, &c, &v).unwrap(), &kn_function_basis(m, 0, &c, &pr).unwrap());
            assert_eq!(crate::exactmath::laurent_expand(&act, &p0, k + m, k + m).coeff(k + m), Gq::from_int(m));
        }
    }
}
