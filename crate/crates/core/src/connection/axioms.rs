use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{covariant_derivative, d1_action, d1_bracket, dg_bracket, ConnectionForm, D1Element, DgElement};
use crate::error::{MathError, Result};
use crate::exactmath::{Gq, RationalFunction};
use crate::geometry::GradingPrescription;
use crate::grading::{GradedBasis, Index};
use crate::laxalgebra::{
    gl_split, is_member, kn_function_basis, kn_vector_basis, vf_action, vf_bracket, Family, LaxElement, VectorField,
};

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub checked: usize,
    /// Samples whose decomposition left the window.
    pub skipped: usize,
    pub failure: Option<String>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub checks: Vec<AxiomCheck>,
    /// Largest `h − (k + m)` seen in `∇_{e_k} X_m = Σ c·X_h`.
    pub observed_s5: Option<i64>,
}

impl ModuleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Check {
    name: &'static str,
    checked: usize,
    skipped: usize,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, skipped: 0, failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn done(self) -> AxiomCheck {
        AxiomCheck { name: self.name, checked: self.checked, skipped: self.skipped, failure: self.failure }
    }
}

struct Sampler<'a> {
    basis: &'a GradedBasis,
    funcs: Vec<((i64, usize), RationalFunction)>,
    fields: Vec<((i64, usize), VectorField)>,
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    fn coeff(&mut self) -> Gq {
        loop {
            let c = Gq::from_parts((self.rng.gen_range(-3..=3), 1), (self.rng.gen_range(-1..=1), 1));
            if !c.is_zero() {
                return c;
            }
        }
    }

    fn lax(&mut self) -> LaxElement {
        let idx = self.basis.indices();
        let (lo, hi) = self.basis.window;
        let mid: Vec<Index> = idx.into_iter().filter(|k| k.0 >= lo.max(-2) && k.0 <= hi.min(2)).collect();
        let n = self.rng.gen_range(1..=3);
        let terms: Vec<(Index, Gq)> = (0..n).map(|_| (*mid.choose(&mut self.rng).unwrap(), self.coeff())).collect();
        self.basis.combine(&terms)
    }

    fn function(&mut self) -> RationalFunction {
        let n = self.rng.gen_range(1..=2);
        let mut f = RationalFunction::zero();
        for _ in 0..n {
            let k = self.rng.gen_range(0..self.funcs.len());
            let c = self.coeff();
            f = &f + &self.funcs[k].1.scale(&c);
        }
        f
    }

    fn field(&mut self) -> VectorField {
        let n = self.rng.gen_range(1..=2);
        let mut e = VectorField::new(RationalFunction::zero());
        for _ in 0..n {
            let k = self.rng.gen_range(0..self.fields.len());
            let c = self.coeff();
            e = &e + &self.fields[k].1.scale(&c);
        }
        e
    }

    fn d1(&mut self) -> D1Element {
        D1Element { function: self.function(), field: self.field() }
    }

    fn dg(&mut self) -> DgElement {
        DgElement { current_part: self.lax(), field_part: self.field() }
    }
}

fn trace_free(l: &LaxElement) -> bool {
    l.trace().is_zero()
}

fn d1_eq(a: &D1Element, b: &D1Element) -> bool {
    a.function == b.function && a.field == b.field
}

fn d1_sum(a: &D1Element, b: &D1Element) -> D1Element {
    D1Element { function: &a.function + &b.function, field: &a.field + &b.field }
}

fn dg_sum(a: &DgElement, b: &DgElement) -> DgElement {
    DgElement { current_part: &a.current_part + &b.current_part, field_part: &a.field_part + &b.field_part }
}

/// Exact checks of the A-, L- and D¹-module axioms and of the semidirect
/// Jacobi identities on `samples` random instances each, plus the leading
/// terms of `A_{m,s}·X_{n,p}` and `∇_{e_{k,s}} X_{m,r}` over the window.
pub fn verify_module_axioms(basis: &GradedBasis, omega: &ConnectionForm, samples: usize, seed: u64) -> Result<ModuleReport> {
    let config = &basis.config;
    if *config != omega.config {
        return Err(MathError::Config("basis and connection form belong to different configurations".into()));
    }
    let n = config.n_in();
    let vf_presc = GradingPrescription::vector_fields(n, config.n_out(), config.genus)?;
    let mut funcs = Vec::new();
    let mut fields = Vec::new();
    for m in -1..=1 {
        for s in 0..n {
            funcs.push(((m, s), kn_function_basis(m, s, config, &basis.prescription)?));
            fields.push(((m, s), kn_vector_basis(m, s, config, &vf_presc)?));
        }
    }
    let mut sm = Sampler { basis, funcs, fields, rng: ChaCha8Rng::seed_from_u64(seed) };
    let nabla = |e: &VectorField, l: &LaxElement| covariant_derivative(omega, e, l);
    let mut checks = Vec::new();

    let mut leibniz = Check::new("leibniz");
    let mut linear = Check::new("function linearity in the field");
    let mut flat = Check::new("bracket of covariant derivatives");
    let mut deriv = Check::new("derivation");
    let mut closure = Check::new("closure");
    let mut split = Check::new("gl split");
    let mut d1_mod = Check::new("D1 module");
    let mut d1_jac = Check::new("D1 jacobi");
    let mut dg_jac = Check::new("Dg jacobi");
    for _ in 0..samples {
        let (l, l2) = (sm.lax(), sm.lax());
        let (e, f) = (sm.field(), sm.field());
        let g = sm.function();

        let lhs = nabla(&e, &l.mul_fn(&g));
        let rhs = &l.mul_fn(&vf_action(&e, &g)) + &nabla(&e, &l).mul_fn(&g);
        leibniz.record(lhs == rhs, || format!("e = {:?}, g = {g}", e.coefficient.to_string()));

        linear.record(nabla(&e.mul_fn(&g), &l) == nabla(&e, &l).mul_fn(&g), || format!("g = {g}"));

        let lhs = nabla(&vf_bracket(&e, &f), &l);
        let rhs = &nabla(&e, &nabla(&f, &l)) - &nabla(&f, &nabla(&e, &l));
        flat.record(lhs == rhs, || format!("e = {}, f = {}", e.coefficient, f.coefficient));

        let lhs = nabla(&e, &l.commutator(&l2));
        let rhs = &nabla(&e, &l).commutator(&l2) + &l.commutator(&nabla(&e, &l2));
        deriv.record(lhs == rhs, || format!("e = {}", e.coefficient));

        let out = nabla(&e, &l);
        let v = is_member(&out, config)?;
        closure.record(v.is_yes(), || format!("{v:?}"));

        if config.algebra.family == Family::Gl {
            let (s, t) = gl_split(&l);
            let (ds, dt) = gl_split(&out);
            let ok = ds == nabla(&e, &s) && dt == nabla(&e, &t) && trace_free(&dt);
            split.record(ok, || "projection and derivative do not commute".into());
        }

        let (x, y) = (sm.d1(), sm.d1());
        let lhs = d1_action(omega, &d1_bracket(&x, &y), &l);
        let rhs = &d1_action(omega, &x, &d1_action(omega, &y, &l)) - &d1_action(omega, &y, &d1_action(omega, &x, &l));
        d1_mod.record(lhs == rhs, || "[x, y].L differs from x.(y.L) - y.(x.L)".into());

        let w = sm.d1();
        let j = d1_sum(&d1_sum(&d1_bracket(&x, &d1_bracket(&y, &w)), &d1_bracket(&y, &d1_bracket(&w, &x))), &d1_bracket(&w, &d1_bracket(&x, &y)));
        let zero = D1Element { function: RationalFunction::zero(), field: VectorField::new(RationalFunction::zero()) };
        d1_jac.record(d1_eq(&j, &zero), || "nonzero Jacobiator".into());

        let (a, b, c) = (sm.dg(), sm.dg(), sm.dg());
        let j = dg_sum(
            &dg_sum(&dg_bracket(&a, &dg_bracket(&b, &c, omega), omega), &dg_bracket(&b, &dg_bracket(&c, &a, omega), omega)),
            &dg_bracket(&c, &dg_bracket(&a, &b, omega), omega),
        );
        dg_jac.record(j.is_zero(), || "nonzero Jacobiator".into());
    }
    checks.extend([leibniz, linear, flat, deriv, closure].map(Check::done));
    if config.algebra.family == Family::Gl {
        checks.push(split.done());
    }
    checks.extend([d1_mod, d1_jac, dg_jac].map(Check::done));

    let (lo, hi) = basis.window;
    let margin = 3;
    let mut a_fine = Check::new("function module leading term");
    let mut l_fine = Check::new("field module leading term");
    let mut s5: Option<i64> = None;
    let unit = |k: Index| -> Vec<(Index, Gq)> { vec![(k, Gq::one())] };
    let targets: Vec<Index> = basis.indices().into_iter().filter(|k| k.0 >= lo + 1 && k.0 + 1 + margin <= hi).collect();
    for &((m, s), ref a) in &sm.funcs {
        for &(nn, p, u) in &targets {
            if nn + m < lo || nn + m + margin > hi {
                continue;
            }
            let prod = basis.element((nn, p, u)).mul_fn(a);
            match basis.decompose(&prod) {
                Err(_) => a_fine.skipped += 1,
                Ok(d) => {
                    let lead: Vec<(Index, Gq)> = d.terms.iter().filter(|(k, _)| k.0 <= m + nn).map(|(k, c)| (*k, c.clone())).collect();
                    let want = if p == s { unit((m + nn, s, u)) } else { Vec::new() };
                    a_fine.record(lead == want, || format!("A_{{{m},{}}} X^{}_{{{nn},{}}}", s + 1, u + 1, p + 1));
                }
            }
        }
    }
    for &((k, s), ref e) in &sm.fields {
        for &(m, r, u) in &targets {
            if k + m < lo || k + m + margin > hi {
                continue;
            }
            match basis.decompose(&nabla(e, basis.element((m, r, u)))) {
                Err(_) => l_fine.skipped += 1,
                Ok(d) => {
                    let lead: Vec<(Index, Gq)> = d.terms.iter().filter(|(h, _)| h.0 <= k + m).map(|(h, c)| (*h, c.clone())).collect();
                    let want = if r == s && m != 0 { vec![((k + m, s, u), Gq::from_int(m))] } else { Vec::new() };
                    l_fine.record(lead == want, || format!("e_{{{k},{}}} . X^{}_{{{m},{}}}", s + 1, u + 1, r + 1));
                    if let Some(top) = d.terms.keys().map(|h| h.0).max() {
                        s5 = Some(s5.unwrap_or(0).max(top - (k + m)));
                    }
                }
            }
        }
    }
    checks.extend([a_fine, l_fine].map(Check::done));
    Ok(ModuleReport { checks, observed_s5: s5 })
}
