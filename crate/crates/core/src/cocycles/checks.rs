use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Cocycle;
use crate::connection::{covariant_derivative, dg_bracket, ConnectionForm, DgElement};
use crate::error::Result;
use crate::exactmath::{Gq, RationalFunction};
use crate::geometry::GradingPrescription;
use crate::grading::{GradedBasis, Index};
use crate::laxalgebra::{kn_vector_basis, LaxElement, VectorField};

/// Outcome of an identity checked on a list of samples.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    /// Positions of the failing samples.
    pub violations: Vec<usize>,
    pub first_violation: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn collect(name: String, results: Vec<Result<Option<String>>>) -> Result<Self> {
        let checked = results.len();
        let mut violations = Vec::new();
        let mut first = None;
        for (i, r) in results.into_iter().enumerate() {
            if let Some(msg) = r? {
                violations.push(i);
                first.get_or_insert(msg);
            }
        }
        Ok(Self { name, checked, violations, first_violation: first })
    }
}

/// Three elements with their pairwise brackets.
#[derive(Clone, Debug)]
pub struct Triple {
    pub x: LaxElement,
    pub y: LaxElement,
    pub z: LaxElement,
    xy: LaxElement,
    yz: LaxElement,
    zx: LaxElement,
}

impl Triple {
    pub fn new(x: LaxElement, y: LaxElement, z: LaxElement) -> Self {
        let (xy, yz, zx) = (x.commutator(&y), y.commutator(&z), z.commutator(&x));
        Self { x, y, z, xy, yz, zx }
    }
}

/// `γ([x,y],z) + γ([y,z],x) + γ([z,x],y) = 0` on every triple.
pub fn verify_cocycle_identity(gamma: &dyn Cocycle, triples: &[Triple]) -> Result<CheckReport> {
    let results: Vec<Result<Option<String>>> = triples
        .par_iter()
        .map(|t| {
            let s = &(&gamma.eval(&t.xy, &t.z)? + &gamma.eval(&t.yz, &t.x)?) + &gamma.eval(&t.zx, &t.y)?;
            Ok((!s.is_zero()).then(|| format!("cyclic sum {s}")))
        })
        .collect();
    CheckReport::collect(format!("cocycle identity for {}", gamma.label()), results)
}

/// `γ(∇_e L, L′) + γ(L, ∇_e L′) = 0` with `∇` built from `omega_action`.
pub fn l_invariance_check(
    gamma: &dyn Cocycle,
    omega_action: &ConnectionForm,
    samples: &[(VectorField, LaxElement, LaxElement)],
) -> Result<CheckReport> {
    let results: Vec<Result<Option<String>>> = samples
        .par_iter()
        .map(|(e, l, l2)| {
            let a = gamma.eval(&covariant_derivative(omega_action, e, l), l2)?;
            let b = gamma.eval(l, &covariant_derivative(omega_action, e, l2))?;
            let s = &a + &b;
            Ok((!s.is_zero()).then(|| format!("e = ({}) d/dz gives {s}", e.coefficient)))
        })
        .collect();
    CheckReport::collect(format!("invariance of {}", gamma.label()), results)
}

/// Extends `γ` by zero to the semidirect sum with the vector fields and tests
/// the cocycle identity on the mixed triples `(L, L′, e)`.
pub fn dg_extension_check(
    gamma: &dyn Cocycle,
    omega: &ConnectionForm,
    samples: &[(VectorField, LaxElement, LaxElement)],
) -> Result<CheckReport> {
    let ext = |x: &DgElement, y: &DgElement| gamma.eval(&x.current_part, &y.current_part);
    let results: Vec<Result<Option<String>>> = samples
        .par_iter()
        .map(|(e, l, l2)| {
            let n = l.size();
            let (a, b, c) = (DgElement::current(l.clone()), DgElement::current(l2.clone()), DgElement::field(n, e.clone()));
            let s = &(&ext(&dg_bracket(&a, &b, omega), &c)? + &ext(&dg_bracket(&b, &c, omega), &a)?)
                + &ext(&dg_bracket(&c, &a, omega), &b)?;
            Ok((!s.is_zero()).then(|| format!("e = ({}) d/dz gives {s}", e.coefficient)))
        })
        .collect();
    CheckReport::collect(format!("extension of {}", gamma.label()), results)
}

fn small_coeff(rng: &mut ChaCha8Rng) -> Gq {
    loop {
        let c = Gq::from_parts((rng.gen_range(-3..=3), 1), (rng.gen_range(-1..=1), 1));
        if !c.is_zero() {
            return c;
        }
    }
}

fn random_combination(basis: &GradedBasis, pool: &[Index], rng: &mut ChaCha8Rng) -> LaxElement {
    let n = rng.gen_range(1..=3);
    let terms: Vec<(Index, Gq)> = (0..n).map(|_| (*pool.choose(rng).unwrap(), small_coeff(rng))).collect();
    basis.combine(&terms)
}

fn central_pool(basis: &GradedBasis, radius: i64) -> Vec<Index> {
    basis.indices().into_iter().filter(|k| k.0.abs() <= radius).collect()
}

/// Triples of random combinations of basis elements of degree `|m| ≤ 2`.
pub fn random_triples(basis: &GradedBasis, count: usize, seed: u64) -> Vec<Triple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = central_pool(basis, 2);
    let raw: Vec<(LaxElement, LaxElement, LaxElement)> = (0..count)
        .map(|_| {
            (
                random_combination(basis, &pool, &mut rng),
                random_combination(basis, &pool, &mut rng),
                random_combination(basis, &pool, &mut rng),
            )
        })
        .collect();
    raw.into_par_iter().map(|(x, y, z)| Triple::new(x, y, z)).collect()
}

/// Samples `(e, L, L′)`: at even positions `e` is a single `e_{k,s}` with
/// `|k| ≤ 1`, at every third position `L, L′` are single basis elements; the
/// other slots hold random combinations.
pub fn invariance_samples(basis: &GradedBasis, count: usize, seed: u64) -> Result<Vec<(VectorField, LaxElement, LaxElement)>> {
    let config = &basis.config;
    let presc = GradingPrescription::vector_fields(config.n_in(), config.n_out(), config.genus)?;
    let mut fields = Vec::new();
    for k in -1..=1 {
        for s in 0..config.n_in() {
            fields.push(kn_vector_basis(k, s, config, &presc)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = central_pool(basis, 1);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let e = if i % 2 == 0 {
            fields[i / 2 % fields.len()].clone()
        } else {
            let mut e = VectorField::new(RationalFunction::zero());
            for _ in 0..2 {
                let c = small_coeff(&mut rng);
                e = &e + &fields.choose(&mut rng).unwrap().scale(&c);
            }
            e
        };
        let (l, l2) = if i % 3 == 0 {
            let a = *pool.choose(&mut rng).unwrap();
            let b = *pool.choose(&mut rng).unwrap();
            (basis.element(a).clone(), basis.element(b).clone())
        } else {
            (random_combination(basis, &pool, &mut rng), random_combination(basis, &pool, &mut rng))
        };
        out.push((e, l, l2));
    }
    Ok(out)
}
