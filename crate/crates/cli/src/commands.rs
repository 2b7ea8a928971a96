use std::collections::BTreeMap;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use laxalg::classify::{
    level_recursion_check, local_space_dimension, normalize_cocycle, normalized_relations, psi_forms, RootConstants,
};
use laxalg::cocycles::{
    cocycle_table, dg_extension_check, invariance_samples, l_invariance_check, random_triples, verify_cocycle_identity,
    CheckReport, CocycleTable, Cycle, GeometricCocycle,
};
use laxalg::connection::{build_connection_form, verify_module_axioms, ConnectionForm};
use laxalg::exactmath::Gq;
use laxalg::geometry::GradingPrescription;
use laxalg::grading::{check_fine_structure, fitted_structure_constants, homogeneous_basis, GradedBasis, Index};
use laxalg::laxalgebra::{
    is_member, kn_function_basis, kn_vector_basis, lax_bracket, lax_product, random_member, Family, MarkedConfig,
};
use laxalg::Result;

use crate::config::RunConfig;
use crate::report::{fingerprint, Check, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Basis,
    Structconst,
    Cocycle,
    Verify,
    Classify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Basis => "basis",
            Command::Structconst => "structconst",
            Command::Cocycle => "cocycle",
            Command::Verify => "verify",
            Command::Classify => "classify",
        }
    }
}

/// A report plus the JSON artifacts to write next to it.
pub struct Outcome {
    pub report: Report,
    pub artifacts: Vec<(String, Value)>,
}

fn ix(k: &Index) -> [i64; 3] {
    [k.0, k.1 as i64 + 1, k.2 as i64 + 1]
}

fn has_trace(config: &MarkedConfig) -> bool {
    matches!(config.algebra.family, Family::Gl | Family::S)
}

fn is_simple(config: &MarkedConfig) -> bool {
    matches!(config.algebra.family, Family::Sl | Family::So | Family::Sp)
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    let canonical = serde_json::to_vec(cfg).expect("config serializes");
    let mut report = Report {
        command: command.name().into(),
        config: cfg.name.clone(),
        inputs_hash: fingerprint(&[command.name().as_bytes(), &canonical]),
        window: cfg.window,
        seed: cfg.seed,
        samples: cfg.samples,
        observed_s: None,
        adjustments: Vec::new(),
        checks: Vec::new(),
        artifacts: Vec::new(),
    };
    let presc = cfg.grading()?;
    let basis = homogeneous_basis(cfg.window(), &cfg.marked, &presc)?;
    report.adjustments = basis.adjustments.clone();
    let mut artifacts = Vec::new();
    match command {
        Command::Basis => basis_cmd(&basis, &mut report, &mut artifacts)?,
        Command::Structconst => structconst_cmd(&basis, &mut report, &mut artifacts)?,
        Command::Cocycle => cocycle_cmd(cfg, &basis, &mut report, &mut artifacts)?,
        Command::Verify => verify_cmd(cfg, &basis, &mut report)?,
        Command::Classify => classify_cmd(cfg, &mut report, &mut artifacts)?,
    }
    report.artifacts = artifacts.iter().map(|(n, _)| n.clone()).collect();
    Ok(Outcome { report, artifacts })
}

fn dimension_law(basis: &GradedBasis) -> Check {
    let (lo, hi) = basis.window;
    let want = basis.n_in() * basis.dim_g();
    let bad: Vec<String> = (lo..=hi)
        .filter_map(|m| {
            let k = basis.degree(m).count();
            (k != want).then(|| format!("degree {m} has {k} elements"))
        })
        .collect();
    Check::verdict(
        "dimension law",
        bad.is_empty(),
        format!("N·dim g = {want} elements in each degree {lo}..{hi}"),
        || bad.join("; "),
    )
}

fn basis_cmd(basis: &GradedBasis, report: &mut Report, artifacts: &mut Vec<(String, Value)>) -> Result<()> {
    report.checks.push(dimension_law(basis));
    let (lo, hi) = basis.window;
    let config = &basis.config;
    let vf = GradingPrescription::vector_fields(config.n_in(), config.n_out(), config.genus)?;
    let mut functions = Vec::new();
    let mut fields = Vec::new();
    for m in lo..=hi {
        for s in 0..config.n_in() {
            let a = kn_function_basis(m, s, config, &basis.prescription)?;
            functions.push(json!({ "degree": m, "point": s + 1, "function": a }));
            let e = kn_vector_basis(m, s, config, &vf)?;
            fields.push(json!({ "degree": m, "point": s + 1, "coefficient": e.coefficient }));
        }
    }
    let elements: Vec<Value> =
        basis.elements.iter().map(|(k, l)| json!({ "index": ix(k), "element": l })).collect();
    artifacts.push((
        "basis.json".into(),
        json!({
            "window": [lo, hi],
            "g_basis": basis.g_basis.labels,
            "elements": elements,
            "functions": functions,
            "vector_fields": fields,
            "adjustments": basis.adjustments,
        }),
    ));
    Ok(())
}

fn structconst_checks(basis: &GradedBasis, report: &mut Report) -> Result<laxalg::grading::StructureConstants> {
    let sc = fitted_structure_constants(basis)?;
    report.observed_s = Some(sc.observed_s);
    report.checks.push(Check::info(
        "almost-grading",
        format!("observed S = {} over {} pairs ({} outside the window)", sc.observed_s, sc.tensor.len(), sc.excluded),
    ));
    report.checks.push(match check_fine_structure(basis, &sc) {
        Ok(()) => Check::pass("fine structure", "leading components match [X, Y] at the same point"),
        Err(e) => Check::fail("fine structure", "leading components", e),
    });
    Ok(sc)
}

fn structconst_cmd(basis: &GradedBasis, report: &mut Report, artifacts: &mut Vec<(String, Value)>) -> Result<()> {
    let sc = structconst_checks(basis, report)?;
    artifacts.push(("structconst.json".into(), json!({ "observed_s": sc.observed_s, "tensor": sc.to_json() })));
    Ok(())
}

fn table_for(omega: &ConnectionForm, basis: &GradedBasis, cycle: &Cycle, second: bool) -> Result<CocycleTable> {
    let g = if second { GeometricCocycle::gamma2(cycle.clone()) } else { GeometricCocycle::gamma1(omega, cycle.clone()) };
    cocycle_table(&g, basis)
}

fn sum_tables(label: &str, terms: &[(Gq, &CocycleTable)]) -> Result<CocycleTable> {
    CocycleTable::combine(label, terms)
}

fn cocycle_cmd(cfg: &RunConfig, basis: &GradedBasis, report: &mut Report, artifacts: &mut Vec<(String, Value)>) -> Result<()> {
    let config = &cfg.marked;
    let omega = build_connection_form(config)?;
    let cycles = cfg.cycles();
    let kinds: Vec<bool> = if has_trace(config) { vec![false, true] } else { vec![false] };
    let separating = Cycle::separating(config);
    let mut out = Vec::new();
    for &second in &kinds {
        let mut by_cycle = BTreeMap::new();
        for c in &cycles {
            let t = table_for(&omega, basis, c, second)?;
            let label = t.meta.label.clone();
            report.checks.push(Check::verdict(format!("antisymmetry of {label}"), t.meta.antisymmetric, "T(a, b) = -T(b, a) on every pair", || {
                "table is not antisymmetric".into()
            }));
            let single_in = c.weights.len() == 1 && config.in_points.iter().any(|p| c.weights.get(p) == Some(&1));
            if single_in {
                report.checks.push(Check::verdict(
                    format!("upper bound of {label}"),
                    t.meta.upper_bound_zero,
                    t.meta.verdict.clone(),
                    || format!("levels {:?}", t.levels()),
                ));
            }
            if *c == separating {
                report.checks.push(Check::verdict(
                    format!("locality of {label}"),
                    t.meta.local && t.meta.upper_bound_zero,
                    t.meta.verdict.clone(),
                    || format!("levels {:?}", t.levels()),
                ));
            }
            if !single_in && *c != separating {
                report.checks.push(Check::info(format!("bounds of {label}"), t.meta.verdict.clone()));
            }
            out.push(t.to_json());
            by_cycle.insert(c.label(), t);
        }
        if cfg.cycles.is_none() {
            let ins: Vec<(Gq, &CocycleTable)> =
                (0..config.n_in()).map(|i| (Gq::one(), &by_cycle[&Cycle::in_point(config, i).label()])).collect();
            let outs: Vec<(Gq, &CocycleTable)> =
                (0..config.n_out()).map(|j| (-Gq::one(), &by_cycle[&Cycle::out_point(config, j).label()])).collect();
            let s_in = sum_tables("in", &ins)?;
            let s_out = sum_tables("out", &outs)?;
            let direct = &by_cycle[&separating.label()];
            let name = if second { "separating cycle relation for gamma2" } else { "separating cycle relation for gamma1" };
            let ok = s_in.values == direct.values && s_out.values == direct.values;
            report.checks.push(Check::verdict(name, ok, "C_S = sum of C_i = minus sum of C*_j, entrywise", || {
                let bad = s_in.values.iter().find(|(k, v)| direct.values.get(k) != Some(v));
                format!("{bad:?}")
            }));
        }
    }
    artifacts.push(("cocycles.json".into(), json!({ "connection": omega, "tables": out })));
    Ok(())
}

fn from_report(r: &CheckReport) -> Check {
    let detail = format!("{} samples", r.checked);
    match &r.first_violation {
        None if r.checked > 0 => Check::pass(&r.name, detail),
        None => Check::inconclusive(&r.name, "no samples"),
        Some(v) => Check::fail(&r.name, format!("{detail}, {} violations", r.violations.len()), format!("sample {}: {v}", r.violations[0])),
    }
}

fn verify_cmd(cfg: &RunConfig, basis: &GradedBasis, report: &mut Report) -> Result<()> {
    let config = &cfg.marked;
    report.checks.push(dimension_law(basis));
    let sc = structconst_checks(basis, report)?;

    // closure of the bracket (and of the product for gl and s)
    let g = config.algebra.basis()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = None;
    for k in 0..cfg.samples {
        let x = random_member(config, &g, 1, &mut rng);
        let y = random_member(config, &g, 1, &mut rng);
        let mut outs = vec![("bracket", lax_bracket(&x, &y))];
        if has_trace(config) {
            outs.push(("product", lax_product(&x, &y, config)?));
        }
        for (what, l) in outs {
            let m = is_member(&l, config)?;
            if !m.is_yes() && bad.is_none() {
                bad = Some(format!("sample {k}: {what} {m:?}"));
            }
        }
    }
    report.checks.push(Check::verdict("closure", bad.is_none(), format!("{} random pairs", cfg.samples), || {
        bad.clone().unwrap_or_default()
    }));

    let omega = build_connection_form(config)?;
    let axioms = verify_module_axioms(basis, &omega, cfg.samples, cfg.seed)?;
    for a in &axioms.checks {
        let detail = format!("{} checked, {} skipped", a.checked, a.skipped);
        report.checks.push(match &a.failure {
            Some(f) => Check::fail(format!("module: {}", a.name), detail, f.clone()),
            None if a.checked == 0 => Check::inconclusive(format!("module: {}", a.name), detail),
            None => Check::pass(format!("module: {}", a.name), detail),
        });
    }

    let triples = random_triples(basis, cfg.samples, cfg.seed);
    let samples = invariance_samples(basis, cfg.samples, cfg.seed)?;
    let kinds: Vec<bool> = if has_trace(config) { vec![false, true] } else { vec![false] };
    for c in cfg.cycles() {
        for &second in &kinds {
            let gamma = if second { GeometricCocycle::gamma2(c.clone()) } else { GeometricCocycle::gamma1(&omega, c.clone()) };
            report.checks.push(from_report(&verify_cocycle_identity(&gamma, &triples)?));
            report.checks.push(from_report(&l_invariance_check(&gamma, &omega, &samples)?));
            report.checks.push(from_report(&dg_extension_check(&gamma, &omega, &samples)?));
        }
    }
    for i in 0..config.n_in() {
        let c = Cycle::in_point(config, i);
        let t = table_for(&omega, basis, &c, false)?;
        let rep = level_recursion_check(&t, basis, &sc, &omega)?;
        let prefix = format!("levels of {}: ", t.meta.label);
        report.checks.extend(rep.relations.iter().map(|r| Check::from_relation(&prefix, r)));
    }
    Ok(())
}

fn classify_cmd(cfg: &RunConfig, report: &mut Report, artifacts: &mut Vec<(String, Value)>) -> Result<()> {
    let config = &cfg.marked;
    let window = cfg.window();
    let omega = build_connection_form(config)?;
    let local = local_space_dimension(config, &omega, window)?;
    report.observed_s = Some(local.observed_s);
    let ranks = format!(
        "bounded rank {} (expected {}), local rank {} (expected {})",
        local.bounded_rank, local.expected_bounded_rank, local.local_rank, local.expected_local_rank
    );
    let certified = local.verdict.starts_with("certified");
    report.checks.push(if certified {
        Check::pass("local cohomology", format!("{ranks}; {}", local.verdict))
    } else {
        Check::inconclusive("local cohomology", format!("{ranks}; {}", local.verdict))
    });

    let mut psi_out = Vec::new();
    let mut norm_out = Vec::new();
    if is_simple(config) {
        let presc = GradingPrescription::standard(config.n_in(), config.n_out(), config.genus)?;
        let basis = homogeneous_basis(window, config, &presc)?;
        let sc = fitted_structure_constants(&basis)?;
        for i in 0..config.n_in() {
            let t = table_for(&omega, &basis, &Cycle::in_point(config, i), false)?;
            let label = t.meta.label.clone();
            match psi_forms(&t, &basis) {
                Ok(p) => {
                    let consts: Vec<String> =
                        p.killing_constants.iter().flatten().map(|c| c.to_string()).collect();
                    report.checks.push(Check::pass(
                        format!("psi forms of {label}"),
                        format!("symmetric, invariant, Killing constants [{}]", consts.join(", ")),
                    ));
                    psi_out.push(json!({ "cocycle": label, "psi": p }));
                }
                Err(e) => report.checks.push(Check::fail(format!("psi forms of {label}"), "", e.to_string())),
            }
            let cutoff = t.levels().last().map_or(1, |l| l + 1).max(1);
            match normalize_cocycle(&t, &basis, &sc, cutoff) {
                Ok((map, norm)) => {
                    for r in normalized_relations(&norm, &basis)? {
                        report.checks.push(Check::from_relation(&format!("normalized {label}: "), &r));
                    }
                    let constants = RootConstants::compute(&norm, &basis)?;
                    norm_out.push(json!({ "cocycle": label, "map": map.to_json(), "root_constants": constants }));
                }
                Err(e) => report.checks.push(Check::fail(format!("normalization of {label}"), "", e.to_string())),
            }
        }
    } else {
        report.checks.push(Check::info("normalization", "defined for simple families only"));
    }
    artifacts.push(("classify.json".into(), json!({ "local": local, "psi": psi_out, "normalization": norm_out })));
    Ok(())
}
