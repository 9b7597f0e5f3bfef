//! Report builders behind each command.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::config::Settings;
use super::dsl::{lie_to_lincomb, load_algebra, AlgebraSpec};
use super::report::{Report, Section, Status};
use crate::error::Result;
use crate::exterior::{build_eds, sectioned_scalar, verify_eds_closed, PdeSystem};
use crate::liealg::{
    apply_closing_map, find_relabeling_isomorphism, jacobi_closure, relation_string, verify_homomorphism, LieElement,
    OpenAlgebra,
};
use crate::prolong::{
    build_ansatz, check_constr_relation, derive_determining_equations, extract_open_algebra, reduction_algebra,
    verify_solution_form, Reduction, Tower,
};
use crate::scalar::{ExactScalar, ModelParams};
use crate::sim::{
    constraint_monitor, convergence_study, init_field, integrate, measure_residuals, pde_monitors, GridJets, InitKind,
    SpinField,
};
use crate::spectral::{
    alternative_closing_map, closing_map, export_spectral_problem, instantiate_tower, pauli_rep, solve_connection,
    two_i_lambda, verify_fundamental_constraint, ConnectionOutcome, Matrix2, SectionSign,
};

pub const TABLE6: &str = include_str!("../../data/table6.alg");
pub const REDUCTION_I: &str = include_str!("../../data/reduction_i.alg");
pub const REDUCTION_II: &str = include_str!("../../data/reduction_ii.alg");
pub const REDUCTION_III: &str = include_str!("../../data/reduction_iii.alg");
pub const CLOSING_I: &str = include_str!("../../data/closing_i.alg");
pub const CLOSING_II: &str = include_str!("../../data/closing_ii.alg");
pub const CLOSING_III: &str = include_str!("../../data/closing_iii.alg");
pub const CLOSING_ALT: &str = include_str!("../../data/closing_alt.alg");

/// Built-in tables by name: `table6`, `i`, `ii`, `iii`.
pub fn builtin_table(name: &str) -> Option<&'static str> {
    match name {
        "table6" => Some(TABLE6),
        "i" => Some(REDUCTION_I),
        "ii" => Some(REDUCTION_II),
        "iii" => Some(REDUCTION_III),
        _ => None,
    }
}

pub fn builtin_closing(which: Reduction) -> &'static str {
    match which {
        Reduction::I => CLOSING_I,
        Reduction::II => CLOSING_II,
        Reduction::III => CLOSING_III,
    }
}

fn num(x: f64) -> String {
    format!("{x:.6e}")
}

fn params(s: &Settings) -> ModelParams {
    ModelParams { gamma2: s.gamma2, n_xi: 1 }
}

fn report(cmd: &str, s: &Settings) -> Report {
    let mut r = Report::new(cmd);
    r.config = s.echo();
    r
}

fn table_section(name: &str, a: &OpenAlgebra, status: Status) -> Section {
    let mut sec = Section::new(name, status);
    for ((i, j), v) in a.table() {
        sec.push(format!("[X{i},X{j}]"), lie_to_lincomb(v));
    }
    sec
}

// ---------------------------------------------------------------- eds-verify

pub fn eds_verify(s: &Settings) -> Result<Report> {
    let p = params(s);
    let ideal = build_eds(&p);
    let pde = PdeSystem::new(&p);
    let mut r = report("eds-verify", s);
    let mut system = Section::new("sectioned_system", Status::Info);
    for g in &ideal.generators {
        system.push(&g.name, sectioned_scalar(&g.form));
    }
    r.push(system);
    let entries = verify_eds_closed(&ideal, &pde)?;
    let mut sec = Section::new("on_shell", Status::from_pass(entries.iter().all(|e| e.section_residual.is_zero())));
    for e in &entries {
        sec.push(&e.name, &e.section_residual);
    }
    r.push(sec);
    let mut clo = Section::new("closure", Status::from_pass(entries.iter().all(|e| e.pass)));
    for e in &entries {
        clo.push(&e.name, &e.closure_residual);
    }
    r.push(clo);
    Ok(r)
}

// ---------------------------------------------------------------- derive

/// The general solved form's open algebra.
pub fn general_algebra(s: &Settings) -> Result<OpenAlgebra> {
    let t = Tower::general(&params(s));
    let rep = verify_solution_form(&t, s.bracket_convention)?;
    extract_open_algebra(&t, &rep)
}

pub fn derive(s: &Settings) -> Result<Report> {
    let p = params(s);
    let d = derive_determining_equations(&build_ansatz(&p), &build_eds(&p), s.bracket_convention)?;
    let mut r = report("derive", s);
    let matched = d.lifted.iter().all(|l| l.matched) && d.unmatched.is_empty();
    let mut eqs = Section::new("determining_equations", Status::from_pass(matched));
    for (n, l) in d.lifted.iter().enumerate() {
        eqs.push(format!("{:02}", n + 1), &l.text);
    }
    for u in &d.unmatched {
        eqs.push("unmatched", u);
    }
    r.push(eqs);
    let mut fc = Section::new("further_constraint", Status::Info);
    for (n, f) in d.further_constraint.iter().enumerate() {
        fc.push(format!("k{}", n + 1), f.to_text().replace('\n', "; "));
    }
    r.push(fc);
    let mut ab = Section::new("commuting_requirement", Status::Info);
    ab.push("statement", "[A,B] = 0");
    ab.push("nonzero_entries", d.ab_commutator.len());
    for e in &d.ab_commutator {
        ab.push("entry", e);
    }
    r.push(ab);

    let t = Tower::general(&p);
    let rep = verify_solution_form(&t, s.bracket_convention)?;
    let mut chk = Section::new("solution_form", Status::from_pass(rep.pass));
    for c in &rep.checks {
        chk.push(&c.name, c.witness.as_deref().unwrap_or("ok"));
    }
    r.push(chk);
    if rep.pass {
        let alg = extract_open_algebra(&t, &rep)?;
        r.push(table_section("open_algebra", &alg, Status::Info));
        let mut def = Section::new("deferred", Status::Info);
        for e in alg.deferred() {
            def.push("relation", relation_string(e));
        }
        r.push(def);
        let c = check_constr_relation(&t, &alg, s.bbar_interpretation);
        let mut cs = Section::new("bbar_relation", Status::Info);
        match c {
            Ok(c) => {
                cs.push("ab_commutes", c.ab_commutes);
                cs.push("difference", if c.difference.is_zero() { "0".into() } else { c.difference.to_string() });
            }
            Err(e) => {
                cs.push("unsupported", e);
            }
        }
        r.push(cs);
    }
    Ok(r)
}

// ---------------------------------------------------------------- algebra-close

pub fn algebra_close(s: &Settings, spec: &AlgebraSpec, depth: usize) -> Result<Report> {
    let (closed, rep) = jacobi_closure(&spec.algebra, depth)?;
    let mut r = report("algebra-close", s);
    r.config.insert("depth".into(), depth.to_string());
    r.push(table_section("input", &spec.algebra, Status::Info));
    for p in &rep.passes {
        let mut sec = Section::new(format!("pass_{}", p.pass), Status::Info);
        sec.push("triples", p.triples);
        sec.push("relations", p.relations.len());
        sec.push("new_generators", p.new_generators.len());
        sec.push("total_generators", p.total_generators);
        sec.push("independent_generators", p.independent_generators);
        for rel in &p.relations {
            sec.push("relation", rel);
        }
        for (k, name) in &p.new_generators {
            sec.push(format!("X{k}"), name);
        }
        r.push(sec);
    }
    let mut fin = Section::new("result", Status::Info);
    fin.push("closed", rep.closed);
    fin.push("generators", closed.generator_count());
    fin.push("independent", closed.independent_count());
    r.push(fin);
    Ok(r)
}

// ---------------------------------------------------------------- close-sl2

/// Quotient of a reduction's algebra under its closing conditions.
pub fn sl2_quotient(which: Reduction, p: &ModelParams, s: &Settings) -> Result<OpenAlgebra> {
    let red = reduction_algebra(which, p, s.bracket_convention)?;
    apply_closing_map(&red.algebra, &closing_map(which))
}

/// Whether `[Xa,X4] = 2iλX5`, `[X4,X5] = 2iλXa`, `[X5,Xa] = 2iλX4` hold.
pub fn has_sl2_constants(q: &OpenAlgebra, a: u32) -> bool {
    let c = two_i_lambda();
    let g = |k| LieElement::gen(k).scale(&c);
    let cyc = [(a, 4, 5), (4, 5, a), (5, a, 4)];
    cyc.iter().all(|&(i, j, k)| q.bracket(&LieElement::gen(i), &LieElement::gen(j)) == g(k))
}

pub fn close_sl2(s: &Settings, alternative: bool) -> Result<Report> {
    let p = params(s);
    let mut r = report("close-sl2", s);
    r.config.insert("alternative".into(), alternative.to_string());
    let which = if alternative { Reduction::I } else { s.reduction };
    let red = reduction_algebra(which, &p, s.bracket_convention)?;
    let mut src = Section::new("tower", Status::Info);
    src.push("stated_tower_verified", red.stated);
    if !red.stated {
        src.push("stated_witness", red.stated_report.checks.iter().find(|c| !c.pass).and_then(|c| c.witness.clone()).unwrap_or_default());
        src.push("used", &red.tower.name);
    }
    r.push(src);
    let q = apply_closing_map(&red.algebra, &closing_map(which))?;
    let a = which.active();
    r.push(table_section("quotient", &q, Status::Info));
    r.push({
        let mut sec = Section::new("structure_constants", Status::from_pass(has_sl2_constants(&q, a)));
        sec.push("expected", format!("[Xi,Xj] = 2*i*lambda*eps_ijk Xk on (X{a}, X4, X5)"));
        sec
    });
    let viol = q.jacobi_violations();
    let mut jac = Section::new("jacobi", Status::from_pass(viol.is_empty()));
    jac.push("violations", viol.len());
    for ((i, j, k), v) in &viol {
        jac.push(format!("({i},{j},{k})"), v);
    }
    r.push(jac);
    let hom = verify_homomorphism(&q, &pauli_rep(which))?;
    let mut hs = Section::new("pauli_homomorphism", Status::from_pass(hom.pass));
    for e in &hom.entries {
        hs.push(&e.label, &e.residual);
    }
    r.push(hs);
    if alternative {
        let full = general_algebra(s)?;
        let alt = apply_closing_map(&full, &alternative_closing_map());
        let mut sec = Section::new("alternative_closing", Status::Fail);
        match alt {
            Ok(alt) => {
                let iso = find_relabeling_isomorphism(&alt, &q);
                sec.status = Status::from_pass(iso.is_some());
                r.push(table_section("alternative_quotient", &alt, Status::Info));
                match iso {
                    Some(m) => {
                        for (k, v) in m {
                            sec.push(format!("X{k}"), format!("X{v}"));
                        }
                    }
                    None => {
                        sec.push("isomorphism", "none");
                    }
                }
            }
            Err(e) => {
                sec.push("error", e);
            }
        }
        r.push(sec);
    }
    Ok(r)
}

// ---------------------------------------------------------------- spectral

pub fn spectral(s: &Settings, sign: SectionSign, ab: Option<(ExactScalar, ExactScalar)>) -> Result<Report> {
    let p = params(s);
    let which = s.reduction;
    let red = reduction_algebra(which, &p, s.bracket_convention)?;
    let m = instantiate_tower(&red.tower, &pauli_rep(which))?;
    let mut r = report("spectral", s);
    r.config.insert("section_sign".into(), sign.to_string());
    let mut tw = Section::new("matrix_tower", Status::Info);
    tw.push("tower", &red.tower.name);
    tw.push("H", &m.h).push("F", &m.f).push("G", &m.g);
    r.push(tw);
    let res = verify_fundamental_constraint(&m, s.bracket_convention, &p);
    let mut fc = Section::new("fundamental_constraint", Status::Info);
    fc.push("residual", if res.is_zero() { "0".into() } else { res.to_string() });
    r.push(fc);
    let (a, b) = ab.unwrap_or_else(|| (red.tower.a[0][0].clone(), red.tower.b[0][0].clone()));
    r.config.insert("A".into(), a.to_string());
    r.config.insert("B".into(), b.to_string());
    let id = Matrix2::identity();
    let out = solve_connection(&m, &id.scale(&a), &id.scale(&b), &id)?;
    let mut cs = Section::new("connection", Status::Info);
    match &out {
        ConnectionOutcome::Solved(c) => {
            cs.push("outcome", "solved");
            cs.push("Gamma1", &c.gamma1).push("Gamma2", &c.gamma2).push("Gamma3", &c.gamma3);
            r.push(cs);
            let doc = export_spectral_problem(c, sign, &p);
            r.sections.extend(doc.sections);
        }
        ConnectionOutcome::Infeasible { obstruction } => {
            cs.push("outcome", "infeasible");
            cs.push("obstruction", obstruction);
            r.push(cs);
        }
        ConnectionOutcome::Undecided { reason } => {
            cs.push("outcome", "undecided");
            cs.push("reason", reason);
            r.push(cs);
        }
    }
    Ok(r)
}

// ---------------------------------------------------------------- simulate

fn exact_velocity(kind: &InitKind, f: &SpinField, t: f64) -> Option<(SpinField, Vec<[f64; 3]>)> {
    match kind {
        InitKind::PlaneWave(w) => {
            let g = f.params.gamma2;
            let mut e = f.clone();
            let mut v = Vec::with_capacity(f.s.len());
            for k in 0..f.s.len() {
                let (x, y) = f.coords(k);
                e.s[k] = w.value(g, x, y, t);
                v.push(w.velocity(g, x, y, t));
            }
            Some((e, v))
        }
        InitKind::Constant(_) => Some((f.clone(), vec![[0.0; 3]; f.s.len()])),
        InitKind::RandomSmooth { .. } => None,
    }
}

pub fn simulate(s: &Settings, kind: &InitKind, t_final: f64) -> Result<(Report, SpinField)> {
    let p = params(s);
    let f0 = init_field(kind, s.grid, &p)?;
    let (f, st) = integrate(&f0, t_final, s.dt_safety)?;
    let mut r = report("simulate", s);
    r.config.insert("t_final".into(), t_final.to_string());
    let mut run = Section::new("run", Status::from_pass(st.max_drift <= 1e-12));
    run.push("steps", st.steps).push("dt", num(st.dt)).push("h", num(f.h)).push("max_constraint_drift", num(st.max_drift));
    r.push(run);
    let one = Complex64::new(1.0, 0.0);
    let g = GridJets { field: &f, velocity: None, t: t_final };
    let cr = measure_residuals(&g, &[constraint_monitor(&p)], one)?;
    let mut res = Section::new("residuals", Status::from_pass(cr.monitors[0].max <= 1e-12 && cr.paths_agree()));
    res.push("constraint.max", num(cr.monitors[0].max)).push("constraint.mean", num(cr.monitors[0].mean));
    if let Some((exact, v)) = exact_velocity(kind, &f0, t_final) {
        res.push("solution_error.linf", num(f.max_abs_diff(&exact)));
        let ge = GridJets { field: &exact, velocity: Some(&v), t: t_final };
        let pr = measure_residuals(&ge, &pde_monitors(&p), one)?;
        for m in &pr.monitors {
            res.push(format!("{}.max", m.name), num(m.max)).push(format!("{}.mean", m.name), num(m.mean));
        }
        res.push("paths_agree", cr.paths_agree() && pr.paths_agree());
    }
    r.push(res);
    Ok((r, f))
}

pub fn convergence(s: &Settings, kind: &InitKind, grids: &[usize], t_final: f64) -> Result<Report> {
    let p = params(s);
    let c = convergence_study(kind, grids, &p, t_final, s.dt_safety)?;
    let mut r = report("convergence", s);
    r.config.insert("grids".into(), grids.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","));
    r.config.insert("t_final".into(), t_final.to_string());
    for series in &c.series {
        let ok = match series.slope {
            None => true,
            Some(sl) if series.name == "constraint" => series.errors.iter().all(|e| *e <= 1e-12) || (1.8..=2.2).contains(&sl),
            Some(sl) => (1.8..=2.2).contains(&sl) && series.monotone,
        };
        let mut sec = Section::new(&series.name, Status::from_pass(ok));
        for (n, e) in grids.iter().zip(&series.errors) {
            sec.push(format!("n{n}"), num(*e));
        }
        sec.push("slope", series.slope_text());
        sec.push("monotone", series.monotone);
        r.push(sec);
    }
    let mut d = Section::new("drift", Status::from_pass(c.max_drift <= 1e-12));
    d.push("max_constraint_drift", num(c.max_drift));
    r.push(d);
    Ok(r)
}

/// Load a table from a built-in name or file contents.
pub fn table_spec(name_or_text: &str) -> Result<AlgebraSpec> {
    load_algebra(builtin_table(name_or_text).unwrap_or(name_or_text))
}

/// Closing map parsed from the built-in data files.
pub fn closing_from_data(which: Reduction) -> Result<BTreeMap<u32, LieElement>> {
    Ok(load_algebra(builtin_closing(which))?.closing)
}
