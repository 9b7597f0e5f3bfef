//! Substituting solved towers into the determining equations and reading
//! off bracket relations.

use serde::Serialize;

use super::determining::BracketConvention;
use super::tower::{build_reduction, constant, directional, field_bracket, gen, normalize_expr, var, LieExpr, Reduction, Tower};
use crate::error::{Error, Result};
use crate::exterior::eds::cyclic;
use crate::liealg::{relation_string, LieElement, LieTerm, OpenAlgebra, Provenance};
use crate::scalar::{ConstraintReducer, ExactScalar, Jet, JetSymbol, ModelParams, Monomial};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    /// First offending monomial and its coefficient, if any.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmittedRelation {
    pub equation: String,
    pub monomial: Monomial,
    /// Degree of the monomial in the first jets S_x, S_y.
    pub first_jet_degree: u32,
    pub relation: LieElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionReport {
    pub checks: Vec<CheckEntry>,
    pub relations: Vec<EmittedRelation>,
    pub pass: bool,
}

fn first_jet_degree(m: &Monomial) -> u32 {
    m.factors()
        .iter()
        .filter(|(s, _)| matches!(s, JetSymbol::Field(j) if j.order() == 1))
        .map(|(_, e)| *e)
        .sum()
}

fn has_bare_generator(e: &LieElement) -> bool {
    e.terms().any(|(t, _)| matches!(t, LieTerm::Gen(_)))
}

/// Classify each monomial coefficient of a residual: zero, a pure bracket
/// relation (emitted), or a structural failure (bare generator present).
fn classify(
    name: &str,
    residual: &LieExpr,
    checks: &mut Vec<CheckEntry>,
    relations: &mut Vec<EmittedRelation>,
) {
    let mut witness = None;
    for (m, c) in residual.terms() {
        if has_bare_generator(c) {
            witness.get_or_insert_with(|| format!("{m}: {c}"));
        } else {
            relations.push(EmittedRelation {
                equation: name.into(),
                monomial: m.clone(),
                first_jet_degree: first_jet_degree(m),
                relation: c.clone(),
            });
        }
    }
    checks.push(CheckEntry { name: name.into(), pass: witness.is_none(), witness });
}

/// Substitute a concrete tower into the determining equations.
pub fn verify_solution_form(t: &Tower, conv: BracketConvention) -> Result<SolutionReport> {
    let p = &t.params;
    let free = OpenAlgebra::new();
    let reducer = ConstraintReducer::new(p, 1);
    let norm = |e: &LieExpr| normalize_expr(&reducer.reduce(e), &free);
    let mut checks = Vec::new();
    let mut relations = Vec::new();

    let hs: Vec<LieExpr> = (1..=3).map(|i| t.h.differentiate(&JetSymbol::s(i)).scale(&p.gamma_entry(i))).collect();
    let cross = |j: u8| {
        let (q, r) = cyclic(j);
        hs[q as usize - 1].mul_scalar_expr(&var(Jet::s(r))).sub(&hs[r as usize - 1].mul_scalar_expr(&var(Jet::s(q))))
    };
    let d = |e: &LieExpr, j: Jet| e.differentiate(&JetSymbol::Field(j));
    for j in 1..=3u8 {
        let entries = [
            (format!("H_{{S{j}_x}} = 0"), d(&t.h, Jet::sx(j))),
            (format!("H_{{S{j}_y}} = 0"), d(&t.h, Jet::sy(j))),
            (format!("F_{{S{j}_x}} = -((Gamma H_S) x S)_{j}"), d(&t.f, Jet::sx(j)).add(&cross(j))),
            (format!("F_{{S{j}_y}} = 0"), d(&t.f, Jet::sy(j))),
            (format!("G_{{S{j}_y}} = ((Gamma H_S) x S)_{j}"), d(&t.g, Jet::sy(j)).sub(&cross(j))),
            (format!("G_{{S{j}_x}} = 0"), d(&t.g, Jet::sx(j))),
        ];
        for (name, r) in entries {
            classify(&name, &norm(&r), &mut checks, &mut relations);
        }
    }

    let sign = ExactScalar::from_int(conv.sign());
    let transport = directional(&t.f, Jet::sx).sub(&directional(&t.g, Jet::sy));
    let fundamental = transport.add(&field_bracket(&t.g, &t.f, &free).scale(&sign));
    classify("F_S.S_x - G_S.S_y + [G,F] = 0", &norm(&fundamental), &mut checks, &mut relations);

    let pass = checks.iter().all(|c| c.pass);
    Ok(SolutionReport { checks, relations, pass })
}

/// Names of the unknown brackets among X1..X5, in the stated order.
pub const PAIR_NAMES: [((u32, u32), u32); 7] =
    [((1, 4), 6), ((1, 5), 7), ((2, 4), 8), ((2, 5), 9), ((3, 4), 10), ((3, 5), 11), ((4, 5), 12)];

/// Assemble the open algebra of a verified tower. Relations read off
/// monomials quadratic in the first jets fix the table; unknown brackets
/// among X1..X5 receive their stated names; all other emitted
/// relations are kept as deferred constraints.
pub fn extract_open_algebra(t: &Tower, report: &SolutionReport) -> Result<OpenAlgebra> {
    if !report.pass {
        let w = report.checks.iter().find(|c| !c.pass).expect("a failing check");
        return Err(Error::InconsistentRelation(format!(
            "{}: {}",
            w.name,
            w.witness.clone().unwrap_or_default()
        )));
    }
    let gens = t.generators();
    let base: Vec<u32> = gens.iter().copied().filter(|&g| g <= 5).collect();

    let mut scratch = OpenAlgebra::free(base.iter().copied());
    let mut imposed: Vec<&EmittedRelation> = report.relations.iter().filter(|r| r.first_jet_degree == 2).collect();
    imposed.sort_by_key(|r| r.relation.depth());
    for r in imposed {
        let n = scratch.normalize(&r.relation);
        if n.is_linear() && !n.is_zero() {
            return Err(Error::InconsistentRelation(format!("{}: {}", r.monomial, relation_string(&n))));
        }
        scratch.add_relation(&n)?;
    }

    let mut alg = OpenAlgebra::free(base.iter().copied());
    let mut deeper = Vec::new();
    for rel in scratch.relations() {
        let (lead, _) = rel.max_term().map(|(t, c)| (t.clone(), c.clone())).expect("nonzero relation");
        match &lead {
            LieTerm::Br(a, b) if matches!((a.as_ref(), b.as_ref()), (LieTerm::Gen(_), LieTerm::Gen(_))) => {
                let (LieTerm::Gen(i), LieTerm::Gen(j)) = (a.as_ref(), b.as_ref()) else { unreachable!() };
                let rhs = LieElement::term(lead.clone(), ExactScalar::one()).sub(&rel);
                alg.set_bracket(*i, *j, rhs)?;
            }
            _ => deeper.push(rel),
        }
    }
    for (x, &i) in base.iter().enumerate() {
        for &j in &base[x + 1..] {
            if alg.bracket_entry(i, j).is_some() {
                continue;
            }
            let k = PAIR_NAMES.iter().find(|(p, _)| *p == (i, j)).map(|(_, k)| *k).unwrap_or_else(|| alg.next_index().max(13));
            alg.name_bracket(i, j, k, Provenance::Bracket(i, j))?;
        }
    }
    for g in gens {
        alg.declare(g);
    }
    for rel in deeper {
        alg.add_relation(&rel)?;
    }
    for r in report.relations.iter().filter(|r| r.first_jet_degree != 2) {
        let n = alg.normalize(&r.relation);
        alg.defer(n);
    }
    Ok(alg)
}

/// Open algebra of a reduction together with the tower it was read from.
#[derive(Clone, Debug)]
pub struct ReductionAlgebra {
    pub tower: Tower,
    /// Whether the stated tower verified; otherwise the consistent
    /// specialization of the general form was used.
    pub stated: bool,
    pub stated_report: SolutionReport,
    pub algebra: OpenAlgebra,
}

pub fn reduction_algebra(which: Reduction, p: &ModelParams, conv: BracketConvention) -> Result<ReductionAlgebra> {
    let stated = build_reduction(which, p);
    let stated_report = verify_solution_form(&stated, conv)?;
    let (tower, report) = if stated_report.pass {
        (stated, stated_report.clone())
    } else {
        let t = Tower::specialized(which, p, constant(&gen(12)));
        let r = verify_solution_form(&t, conv)?;
        (t, r)
    };
    let algebra = extract_open_algebra(&tower, &report)?;
    Ok(ReductionAlgebra { tower, stated: stated_report.pass, stated_report, algebra })
}
