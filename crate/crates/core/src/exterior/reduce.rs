//! Rewriting of 3- and 4-forms modulo the EDS ideal (and, optionally,
//! modulo the prolongation forms Ω).

use std::collections::BTreeSet;

use super::eds::{s_cross_v, EdsIdeal};
use super::form::{canonical_word, OneForm, ScalarForm};
use crate::error::{Error, Result};
use crate::scalar::{Jet, JetSymbol, ScalarExpr};

use OneForm::{Dt, Dx, Dy};

const MAX_STEPS: usize = 10_000;

/// Component form of the Ω substitution
/// `dt∧dξ^m = −H^m dx∧dy − F^m dy∧dt − G^m dx∧dt − A^m_l dx∧dξ^l − B^m_l dy∧dξ^l`
/// (taken mod Ω, with C = identity).
#[derive(Clone, Debug)]
pub struct XiSubstitution {
    pub h: Vec<ScalarExpr>,
    pub f: Vec<ScalarExpr>,
    pub g: Vec<ScalarExpr>,
    /// `a[m][l]` is A^m_l (row m, column l), zero-based.
    pub a: Vec<Vec<ScalarExpr>>,
    pub b: Vec<Vec<ScalarExpr>>,
}

impl XiSubstitution {
    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// Replacement for `dt∧dξ_m` (1-based m).
    pub fn rule(&self, m: u8) -> ScalarForm {
        let k = (m - 1) as usize;
        let mut r = ScalarForm::monomial(&[Dx, Dy], self.h[k].neg())
            .sub(&ScalarForm::monomial(&[Dy, Dt], self.f[k].clone()))
            .sub(&ScalarForm::monomial(&[Dx, Dt], self.g[k].clone()));
        for l in 0..self.n() {
            let xi = OneForm::DXi(l as u8 + 1);
            r = r
                .sub(&ScalarForm::monomial(&[Dx, xi], self.a[k][l].clone()))
                .sub(&ScalarForm::monomial(&[Dy, xi], self.b[k][l].clone()));
        }
        r
    }
}

/// Which rule families to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// θ and β rules only.
    Jet,
    /// θ and β rules plus the dt∧dξ substitution.
    Full,
}

/// If every factor of `pattern` occurs in `word`, return `(sign, rest)` with
/// `word = sign · pattern ∧ rest`.
fn extract(word: &[OneForm], pattern: &[OneForm]) -> Option<(i64, Vec<OneForm>)> {
    if !pattern.iter().all(|p| word.contains(p)) {
        return None;
    }
    let rest: Vec<OneForm> = word.iter().filter(|w| !pattern.contains(w)).copied().collect();
    let mut joined = pattern.to_vec();
    joined.extend_from_slice(&rest);
    let (sign, _) = canonical_word(&joined)?;
    Some((sign, rest))
}

struct Rule {
    pattern: Vec<OneForm>,
    replacement: ScalarForm,
}

fn jet_rules(ideal: &EdsIdeal) -> Vec<Rule> {
    let p = &ideal.params;
    let mut rules = Vec::new();
    for i in 1..=3u8 {
        // θ1: dS_i∧dy∧dt = S_ix dx∧dy∧dt
        rules.push(Rule {
            pattern: vec![OneForm::DField(Jet::s(i)), Dy, Dt],
            replacement: ScalarForm::monomial(&[Dx, Dy, Dt], ScalarExpr::symbol(JetSymbol::sx(i))),
        });
        // θ2: dS_i∧dx∧dt = −S_iy dx∧dy∧dt
        rules.push(Rule {
            pattern: vec![OneForm::DField(Jet::s(i)), Dx, Dt],
            replacement: ScalarForm::monomial(&[Dx, Dy, Dt], ScalarExpr::symbol(JetSymbol::sy(i)).neg()),
        });
        // θ3: Γ_i dS_i∧dx∧dy = (S × (dS_x∧dy∧dt − dS_y∧dx∧dt))_i
        rules.push(Rule {
            pattern: vec![OneForm::DField(Jet::s(i)), Dx, Dy],
            replacement: s_cross_v(i).mul_function(&ScalarExpr::scalar(p.gamma_entry(i))),
        });
    }
    rules
}

fn xi_rules(xi: &XiSubstitution) -> Vec<Rule> {
    (1..=xi.n() as u8)
        .map(|m| Rule { pattern: vec![Dt, OneForm::DXi(m)], replacement: xi.rule(m) })
        .collect()
}

/// Subtract the multiple of β1 (resp. β2) that cancels the contracted
/// combination `ΓS·dS_x∧dy∧dt` (resp. `ΓS·dS_y∧dx∧dt`) when the coefficient
/// vector is an exact polynomial multiple of ΓS.
fn beta_step(a: &ScalarForm, ideal: &EdsIdeal) -> Option<ScalarForm> {
    if a.degree() != 3 {
        return None;
    }
    for (name, jet, other) in [("beta1", Jet::sx as fn(u8) -> Jet, Dy), ("beta2", Jet::sy, Dx)] {
        let coeffs: Vec<ScalarExpr> =
            (1..=3u8).map(|i| a.coefficient(&[OneForm::DField(jet(i)), other, Dt])).collect();
        let Some(first) = (0..3).find(|&k| !coeffs[k].is_zero()) else { continue };
        let i = first as u8 + 1;
        let g = ideal.params.gamma_entry(i);
        let Some(mu) = coeffs[first].scale(&g).divide_by_symbol(&JetSymbol::s(i)) else { continue };
        let matches = (1..=3u8).all(|c| {
            let expect = mu.mul(&ScalarExpr::symbol(JetSymbol::s(c))).scale(&ideal.params.gamma_entry(c));
            expect == coeffs[c as usize - 1]
        });
        if matches {
            let beta = ideal.generator(name).expect("beta generators present");
            return Some(a.sub(&beta.mul_function(&mu)));
        }
    }
    None
}

/// Apply the ideal's rewrite rules to a fixpoint.
pub fn reduce_mod_ideal(
    a: &ScalarForm,
    ideal: &EdsIdeal,
    xi: Option<&XiSubstitution>,
    stage: Stage,
) -> Result<ScalarForm> {
    assert!(matches!(a.degree(), 3 | 4), "reduction is defined on 3- and 4-forms");
    let mut rules = jet_rules(ideal);
    if stage == Stage::Full {
        if let Some(xi) = xi {
            rules.extend(xi_rules(xi));
        }
    }
    let mut cur = a.clone();
    let mut seen = BTreeSet::new();
    let mut trace = Vec::new();
    for step in 0..MAX_STEPS {
        let text = cur.to_text();
        if !seen.insert(text.clone()) {
            return Err(Error::NonTerminating { steps: step, trace: tail(&trace) });
        }
        trace.push(text);
        match rewrite_once(&cur, &rules) {
            Some(next) => cur = next,
            None => match beta_step(&cur, ideal) {
                Some(next) => cur = next,
                None => return Ok(cur),
            },
        }
    }
    Err(Error::NonTerminating { steps: MAX_STEPS, trace: tail(&trace) })
}

fn tail(trace: &[String]) -> String {
    trace.iter().rev().take(3).rev().cloned().collect::<Vec<_>>().join("---\n")
}

fn rewrite_once(a: &ScalarForm, rules: &[Rule]) -> Option<ScalarForm> {
    let mut out = ScalarForm::zero(a.degree());
    let mut changed = false;
    for (w, c) in a.terms() {
        let hit = rules.iter().find_map(|r| extract(w, &r.pattern).map(|(s, rest)| (r, s, rest)));
        match hit {
            Some((r, sign, rest)) => {
                let rest_form = ScalarForm::basis(&rest);
                let coef = if sign < 0 { c.neg() } else { c.clone() };
                out = out.add(&r.replacement.wedge(&rest_form).mul_function(&coef));
                changed = true;
            }
            None => out.add_term(w, c.clone()),
        }
    }
    changed.then_some(out)
}

/// Whether no rule applies to any term.
pub fn is_reduced(a: &ScalarForm, ideal: &EdsIdeal, xi: Option<&XiSubstitution>) -> bool {
    let mut rules = jet_rules(ideal);
    if let Some(xi) = xi {
        rules.extend(xi_rules(xi));
    }
    rewrite_once(a, &rules).is_none() && beta_step(a, ideal).is_none()
}
