//! Acceptance criteria, run in order with one PASS/FAIL line each. Runs without
//! the test harness so the lines are never captured.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use laxalg::classify::{
    killing_form, level_recursion_check, local_space_dimension, normalize_cocycle, normalized_relations, pair_value,
    psi_forms, ChevalleyCoords,
};
use laxalg::classify::coboundary_table;
use laxalg::cocycles::{
    cocycle_table, invariance_samples, l_invariance_check, random_triples, verify_cocycle_identity, CocycleTable, Cycle,
    GeometricCocycle,
};
use laxalg::connection::{build_connection_form, ConnectionForm};
use laxalg::exactmath::{Gq, Mat};
use laxalg::geometry::GradingPrescription;
use laxalg::grading::{fitted_structure_constants, homogeneous_basis, GradedBasis, Index};
use laxalg::laxalgebra::{
    is_member, kappa, lax_bracket, lax_product, random_member, witnesses, Family, MarkedConfig,
};
use laxalg_cli::config::RunConfig;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn bundled() -> Vec<RunConfig> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(configs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| RunConfig::parse(&std::fs::read_to_string(p).unwrap()).unwrap()).collect()
}

fn bundled_named(name: &str) -> RunConfig {
    bundled().into_iter().find(|c| c.name == name).unwrap()
}

fn marked(json: &str) -> MarkedConfig {
    let c: MarkedConfig = serde_json::from_str(json).unwrap();
    c.validate().unwrap();
    c
}

fn standard_basis(c: &MarkedConfig, window: (i64, i64)) -> Result<GradedBasis, String> {
    let p = ok(GradingPrescription::standard(c.n_in(), c.n_out(), c.genus))?;
    ok(homogeneous_basis(window, c, &p))
}

fn has_trace(c: &MarkedConfig) -> bool {
    matches!(c.algebra.family, Family::Gl | Family::S)
}

fn tables(c: &MarkedConfig, basis: &GradedBasis, w: &ConnectionForm, cycle: &Cycle) -> Result<Vec<CocycleTable>, String> {
    let mut out = vec![ok(cocycle_table(&GeometricCocycle::gamma1(w, cycle.clone()), basis))?];
    if has_trace(c) {
        out.push(ok(cocycle_table(&GeometricCocycle::gamma2(cycle.clone()), basis))?);
    }
    Ok(out)
}

fn same_entries(a: &CocycleTable, b: &CocycleTable, min_level: i64) -> Option<(Index, Index)> {
    let keys: BTreeSet<(Index, Index)> = a.values.keys().chain(b.values.keys()).copied().collect();
    keys.into_iter().find(|(x, y)| x.0 + y.0 >= min_level && a.get(*x, *y) != b.get(*x, *y))
}

fn dim_law() -> Outcome {
    // dimensions of g, counted by hand
    let dim_g = |f: Family, n: usize| match (f, n) {
        (Family::Gl, 2) => 4,
        (Family::Sl, 2) => 3,
        (Family::So, 4) => 6,
        (Family::Sp, 2) => 10,
        other => panic!("no hand count for {other:?}"),
    };
    let mut degrees = 0;
    for cfg in bundled() {
        let c = &cfg.marked;
        let basis = ok(homogeneous_basis(cfg.window(), c, &ok(cfg.grading())?))?;
        let want = c.in_points.len() * dim_g(c.algebra.family, c.algebra.n);
        for m in cfg.window[0]..=cfg.window[1] {
            let got = basis.degree(m).count();
            ensure!(got == want, "{}: degree {m} has {got} elements, expected {want}", cfg.name);
            degrees += 1;
        }
    }
    Ok(format!("{degrees} degrees over {} configs", bundled().len()))
}

fn almost_grading() -> Outcome {
    let classical = bundled_named("classical-sl2");
    let basis = ok(homogeneous_basis(classical.window(), &classical.marked, &ok(classical.grading())?))?;
    let s = ok(fitted_structure_constants(&basis))?.observed_s;
    ensure!(s == 0, "classical sl(2): observed S = {s}");
    let mut multi = vec![bundled_named("sl2-two-out").marked];
    multi.push(marked(r#"{"in_points": ["0", "1", "2"], "out_points": ["inf", "-1"], "algebra": {"family": "sl", "n": 2}}"#));
    multi.push(marked(r#"{"in_points": ["0", "1", "2"], "out_points": ["inf", "-1", "-2"], "algebra": {"family": "sl", "n": 2}}"#));
    multi.push(marked(r#"{"in_points": ["0", "1"], "out_points": ["inf", "-1"], "algebra": {"family": "gl", "n": 2}}"#));
    let mut seen = Vec::new();
    for c in &multi {
        let s = ok(fitted_structure_constants(&standard_basis(c, (-2, 2))?))?.observed_s;
        ensure!(s <= 1, "{:?} -> {:?}: observed S = {s}", c.in_points, c.out_points);
        seen.push(s);
    }
    Ok(format!("classical S = 0, multi-out S = {seen:?}"))
}

fn family_configs(family: Family) -> Vec<MarkedConfig> {
    let (alg, a1, a2) = match family {
        Family::Gl => (r#"{"family": "gl", "n": 2}"#, r#"["1", "1"]"#, r#"["1", "2"]"#),
        Family::Sl => (r#"{"family": "sl", "n": 2}"#, r#"["1", "1"]"#, r#"["1", "2"]"#),
        Family::S => (r#"{"family": "s", "n": 2}"#, r#"["1", "1"]"#, r#"["1", "2"]"#),
        Family::So => (r#"{"family": "so", "n": 4}"#, r#"["1", "i", "1", "i"]"#, r#"["1", "0", "i", "0"]"#),
        Family::Sp => (r#"{"family": "sp", "n": 2}"#, r#"["1", "0", "1", "1"]"#, r#"["0", "1", "2", "i"]"#),
    };
    let k0 = format!(r#"{{"in_points": ["0"], "out_points": ["inf"], "algebra": {alg}}}"#);
    let k1 = format!(
        r#"{{"in_points": ["0"], "out_points": ["inf"], "tyurin": [{{"gamma": "2", "alpha": {a1}}}], "algebra": {alg}}}"#
    );
    let k2 = format!(
        r#"{{"in_points": ["0"], "out_points": ["inf"], "tyurin": [{{"gamma": "2", "alpha": {a1}}}, {{"gamma": "-1", "alpha": {a2}}}], "algebra": {alg}}}"#
    );
    [k0, k1, k2].iter().map(|s| marked(s)).collect()
}

fn closure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for family in [Family::Gl, Family::Sl, Family::S, Family::So, Family::Sp] {
        let configs = family_configs(family);
        let bases: Vec<_> = configs.iter().map(|c| c.algebra.basis().unwrap()).collect();
        for k in 0..200 {
            let i = k % configs.len();
            let (c, b) = (&configs[i], &bases[i]);
            let x = random_member(c, b, 1, &mut rng);
            let y = random_member(c, b, 1, &mut rng);
            let mut outs = vec![("bracket", lax_bracket(&x, &y))];
            if has_trace(c) {
                outs.push(("product", ok(lax_product(&x, &y, c))?));
            }
            for (what, l) in outs {
                let v = ok(is_member(&l, c))?;
                ensure!(v.is_yes(), "{family:?} K={i} pair {k}: {what} {v:?}");
            }
        }
    }
    // no double pole and κ(xy) = β_x·y₁·α + κ(x)κ(y) on gl
    let mut products = 0;
    for c in family_configs(Family::Gl).iter().skip(1) {
        let b = c.algebra.basis().unwrap();
        for _ in 0..30 {
            let x = random_member(c, &b, 1, &mut rng);
            let y = random_member(c, &b, 1, &mut rng);
            let p = ok(lax_product(&x, &y, c))?;
            for t in &c.tyurin {
                let gamma = &t.gamma;
                ensure!(p.ord_at(gamma).map_or(true, |o| o >= -1), "double pole at {gamma}");
                let wx = witnesses(&x, c, gamma).ok_or("no witness")?;
                let beta = Mat::row_vec(&wx[..2]);
                let corr = &(&beta * &y.jet_coeff(gamma, 1)) * &Mat::column(&t.alpha);
                let want = corr.get(0, 0) + &(&kappa(&x, c, gamma).unwrap() * &kappa(&y, c, gamma).unwrap());
                ensure!(kappa(&p, c, gamma) == Some(want), "kappa composition fails at {gamma}");
                products += 1;
            }
        }
    }
    Ok(format!("200 pairs for each of 5 families, {products} gl products"))
}

fn cocycle_identity() -> Outcome {
    let mut count = 0;
    for cfg in bundled() {
        let c = &cfg.marked;
        let basis = ok(homogeneous_basis(cfg.window(), c, &ok(cfg.grading())?))?;
        let w = ok(build_connection_form(c))?;
        let triples = random_triples(&basis, 100, cfg.seed);
        for cycle in cfg.cycles() {
            let gammas = [GeometricCocycle::gamma1(&w, cycle.clone()), GeometricCocycle::gamma2(cycle.clone())];
            for g in &gammas {
                let r = ok(verify_cocycle_identity(g, &triples))?;
                ensure!(r.checked >= 100, "{}: only {} triples", cfg.name, r.checked);
                ensure!(r.passed(), "{} {}: {:?}", cfg.name, r.name, r.first_violation);
                count += 1;
            }
        }
    }
    Ok(format!("{count} cocycles, 100 triples each"))
}

fn locality_and_separation(check_locality: bool) -> Outcome {
    let mut count = 0;
    for cfg in bundled() {
        let c = &cfg.marked;
        let basis = ok(homogeneous_basis(cfg.window(), c, &ok(cfg.grading())?))?;
        let w = ok(build_connection_form(c))?;
        let ins: Vec<Vec<CocycleTable>> =
            (0..c.n_in()).map(|i| tables(c, &basis, &w, &Cycle::in_point(c, i))).collect::<Result<_, _>>()?;
        let sep = tables(c, &basis, &w, &Cycle::separating(c))?;
        if check_locality {
            for t in ins.iter().flatten() {
                let top = t.levels().last().copied();
                ensure!(t.meta.upper_bound_zero, "{} {}: levels {:?}", cfg.name, t.meta.label, t.levels());
                ensure!(top.map_or(true, |l| l <= 0), "{} {}: top level {top:?}", cfg.name, t.meta.label);
                count += 1;
            }
            for t in &sep {
                ensure!(t.meta.local && t.meta.upper_bound_zero, "{} {}: {}", cfg.name, t.meta.label, t.meta.verdict);
                count += 1;
            }
            continue;
        }
        let outs: Vec<Vec<CocycleTable>> =
            (0..c.n_out()).map(|j| tables(c, &basis, &w, &Cycle::out_point(c, j))).collect::<Result<_, _>>()?;
        for (k, direct) in sep.iter().enumerate() {
            let sum_in: Vec<(Gq, &CocycleTable)> = ins.iter().map(|ts| (Gq::one(), &ts[k])).collect();
            let sum_out: Vec<(Gq, &CocycleTable)> = outs.iter().map(|ts| (-Gq::one(), &ts[k])).collect();
            for (what, terms) in [("in", sum_in), ("out", sum_out)] {
                let s = ok(CocycleTable::combine(what, &terms))?;
                let bad = same_entries(&s, direct, i64::MIN);
                ensure!(bad.is_none(), "{} {}: {what} sum differs at {bad:?}", cfg.name, direct.meta.label);
            }
            ensure!(!direct.values.is_empty(), "{}: empty separating table", cfg.name);
            count += 1;
        }
    }
    Ok(format!("{count} tables"))
}

fn classification_rank() -> Outcome {
    let mut out = Vec::new();
    for (name, want) in [("sl2-two-points", (2, 1, 1)), ("gl2-two-points", (4, 2, 2))] {
        let cfg = bundled_named(name);
        let c = &cfg.marked;
        let r = ok(local_space_dimension(c, &ok(build_connection_form(c))?, cfg.window()))?;
        let got = (r.bounded_rank, r.local_rank, r.local_basis.len());
        ensure!(got == want, "{name}: (bounded, local, basis) = {got:?}, expected {want:?}");
        ensure!(r.spanned_by_separating, "{name}: local combinations not spanned by C_S");
        out.push(format!("{name} ranks {} and {}", r.bounded_rank, r.local_rank));
    }
    Ok(out.join(", "))
}

fn invariance_dichotomy() -> Outcome {
    let c = marked(
        r#"{"in_points": ["0"], "out_points": ["inf"], "tyurin": [{"gamma": "2", "alpha": ["1", "1"]}], "algebra": {"family": "sl", "n": 2}}"#,
    );
    let basis = standard_basis(&c, (-3, 3))?;
    let w = ok(build_connection_form(&c))?;
    let shifted = ConnectionForm::from_matrix(&w.matrix_part + basis.element((1, 0, 2)), &c);
    ensure!(ok(shifted.check())?.is_yes(), "perturbed form is not a connection form");
    ensure!(shifted != w, "perturbation is trivial");
    let samples = ok(invariance_samples(&basis, 60, 5))?;
    let gamma = GeometricCocycle::gamma1(&w, Cycle::in_point(&c, 0));
    let same = ok(l_invariance_check(&gamma, &w, &samples))?;
    ensure!(same.passed(), "invariance fails for the defining form: {:?}", same.first_violation);
    let other = ok(l_invariance_check(&gamma, &shifted, &samples))?;
    ensure!(!other.passed(), "no violation for the perturbed form");
    Ok(format!("{} samples, witness: {}", same.checked, other.first_violation.unwrap_or_default()))
}

fn level_machinery() -> Outcome {
    let c = bundled_named("sl2-two-points").marked;
    let basis = standard_basis(&c, (-4, 4))?;
    let sc = ok(fitted_structure_constants(&basis))?;
    let w = ok(build_connection_form(&c))?;
    let cc = ok(ChevalleyCoords::new(&basis))?;
    let h = cc.h_index(0);
    let kf = killing_form(&basis.g_basis);
    for i in 0..c.n_in() {
        let t = ok(cocycle_table(&GeometricCocycle::gamma1(&w, Cycle::in_point(&c, i)), &basis))?;
        let rep = ok(level_recursion_check(&t, &basis, &sc, &w))?;
        for name in ["positive levels vanish", "cross-point vanishing at level zero", "level-zero scaling"] {
            let r = rep.get(name).ok_or(format!("missing relation {name}"))?;
            ensure!(r.passed() && r.checked > 0, "C_{}: {name}: {:?}", i + 1, r.failures);
        }
        for s in 0..c.n_in() {
            let base = pair_value(&t, &cc.lift(h, 1, s), &cc.lift(h, -1, s));
            for n in 1..=4 {
                let v = pair_value(&t, &cc.lift(h, n, s), &cc.lift(h, -n, s));
                ensure!(v == &base * &Gq::from_int(n), "C_{}: H scaling fails at n = {n}, point {}", i + 1, s + 1);
            }
        }
        let psi = ok(psi_forms(&t, &basis))?;
        let consts = psi.killing_constants.clone().ok_or("no Killing constants")?;
        for (s, form) in psi.forms.iter().enumerate() {
            // γ₁(X z, Y z⁻¹) = −tr(XY) and κ = 4 tr on sl(2)
            let want = if s == i { Gq::from_frac(-1, 4) } else { Gq::zero() };
            ensure!(consts[s] == want, "C_{}: constant {} at point {}", i + 1, consts[s], s + 1);
            for (u, row) in form.iter().enumerate() {
                for (v, x) in row.iter().enumerate() {
                    ensure!(*x == form[v][u], "psi not symmetric");
                    ensure!(*x == &consts[s] * &kf[u][v], "psi not proportional to the Killing form");
                }
            }
        }
    }
    Ok("level relations, H scaling n = 1..4, psi = -1/4 Killing".into())
}

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut configs = vec![(bundled_named("sl2-two-points").marked, (-3, 3))];
    configs.push((bundled_named("so4-isotropic").marked, (-2, 2)));
    let mut slots = 0;
    for (c, window) in configs {
        let basis = standard_basis(&c, window)?;
        let sc = ok(fitted_structure_constants(&basis))?;
        let w = ok(build_connection_form(&c))?;
        let cut = window.1 + 1;
        let gamma = ok(cocycle_table(&GeometricCocycle::gamma1(&w, Cycle::in_point(&c, 0)), &basis))?;
        let phi0: BTreeMap<Index, Gq> = basis
            .indices()
            .into_iter()
            .map(|k| (k, Gq::from_parts((rng.gen_range(-5..=5), 1), (rng.gen_range(-2..=2), 1))))
            .collect();
        let cob = ok(coboundary_table(&phi0, &basis, &sc))?;
        let shifted = ok(CocycleTable::combine("shifted", &[(Gq::one(), &gamma), (Gq::one(), &cob)]))?;
        let (phi_a, norm_a) = ok(normalize_cocycle(&gamma, &basis, &sc, cut))?;
        let (phi_b, norm_b) = ok(normalize_cocycle(&shifted, &basis, &sc, cut))?;
        for norm in [&norm_a, &norm_b] {
            for r in ok(normalized_relations(norm, &basis))? {
                ensure!(r.passed(), "{}: {:?}", r.name, r.failures);
            }
        }
        let bad = same_entries(&norm_a, &norm_b, window.0);
        ensure!(bad.is_none(), "normalizations differ at {bad:?}");
        for k in basis.indices() {
            let get = |m: &BTreeMap<Index, Gq>| m.get(&k).cloned().unwrap_or_else(Gq::zero);
            ensure!(get(&phi_b.phi_values) == &get(&phi_a.phi_values) + &phi0[&k], "normalizing map off by more than phi0 at {k:?}");
        }
        slots += norm_a.values.len();
    }
    Ok(format!("sl(2) two points and so(4) with K = 1, {slots} nonzero normalized slots"))
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_laxalg");
    let cfg = configs_dir().join("sl2-two-points.json");
    let root = std::env::temp_dir().join(format!("laxalg-determinism-{}", std::process::id()));
    let mut files = 0;
    for cmd in ["basis", "structconst", "cocycle", "verify", "classify"] {
        let mut runs = Vec::new();
        for k in 0..2 {
            let dir = root.join(format!("{cmd}-{k}"));
            let out = Command::new(exe)
                .args([cmd, "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
                .output()
                .map_err(|e| e.to_string())?;
            ensure!(out.status.code() == Some(0), "{cmd} exited with {:?}", out.status.code());
            let mut names: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
            names.sort();
            let contents: Vec<(String, Vec<u8>)> = names
                .iter()
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
                .collect();
            runs.push((out.stdout, contents));
        }
        ensure!(runs[0].0 == runs[1].0, "{cmd}: stdout differs");
        ensure!(runs[0].1 == runs[1].1, "{cmd}: artifacts differ");
        files += runs[0].1.len();
    }
    let _ = std::fs::remove_dir_all(&root);
    Ok(format!("5 commands, {files} files identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("dimension law", dim_law),
        ("almost-grading bound", almost_grading),
        ("closure", closure),
        ("cocycle identity", cocycle_identity),
        ("locality and bounds", || locality_and_separation(true)),
        ("separating-cycle relation", || locality_and_separation(false)),
        ("classification rank", classification_rank),
        ("invariance dichotomy", invariance_dichotomy),
        ("level machinery", level_machinery),
        ("normalization", normalization),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
