//! The exterior differential system of the spin model and its
//! solution-pullback checks.

use std::collections::{BTreeMap, BTreeSet};

use super::form::{OneForm, ScalarForm};
use crate::error::Result;
use crate::scalar::{ConstraintReducer, Coord, Jet, JetSymbol, ModelParams, ScalarExpr};

#[derive(Clone, Debug, PartialEq)]
pub struct NamedForm {
    pub name: String,
    pub form: ScalarForm,
}

/// The ideal generated by θ1, θ2, θ3 (componentwise), β1 and β2.
#[derive(Clone, Debug)]
pub struct EdsIdeal {
    pub params: ModelParams,
    pub generators: Vec<NamedForm>,
}

fn var(s: JetSymbol) -> ScalarExpr {
    ScalarExpr::symbol(s)
}

fn d(j: Jet) -> OneForm {
    OneForm::DField(j)
}

/// Cyclic successors (j, k) of component i.
pub(crate) fn cyclic(i: u8) -> (u8, u8) {
    match i {
        1 => (2, 3),
        2 => (3, 1),
        _ => (1, 2),
    }
}

use OneForm::{Dt, Dx, Dy};

/// Component i of `S × (dS_x∧dy∧dt − dS_y∧dx∧dt)`.
pub(crate) fn s_cross_v(i: u8) -> ScalarForm {
    let v = |c: u8| {
        ScalarForm::basis(&[d(Jet::sx(c)), Dy, Dt]).sub(&ScalarForm::basis(&[d(Jet::sy(c)), Dx, Dt]))
    };
    let (j, k) = cyclic(i);
    v(k).mul_function(&var(JetSymbol::s(j))).sub(&v(j).mul_function(&var(JetSymbol::s(k))))
}

/// Build the eleven scalar generators. θ3 is oriented so that its pullback
/// reproduces `(ΓS)_t = S × (S_xx + S_yy)` with that sign.
pub fn build_eds(params: &ModelParams) -> EdsIdeal {
    let mut generators = Vec::new();
    let vol = [Dx, Dy, Dt];
    for i in 1..=3u8 {
        let f = ScalarForm::basis(&[d(Jet::s(i)), Dy, Dt])
            .sub(&ScalarForm::monomial(&vol, var(JetSymbol::sx(i))));
        generators.push(NamedForm { name: format!("theta1_{i}"), form: f });
    }
    for i in 1..=3u8 {
        let f = ScalarForm::basis(&[d(Jet::s(i)), Dx, Dt])
            .add(&ScalarForm::monomial(&vol, var(JetSymbol::sy(i))));
        generators.push(NamedForm { name: format!("theta2_{i}"), form: f });
    }
    for i in 1..=3u8 {
        let f = ScalarForm::monomial(&[d(Jet::s(i)), Dx, Dy], ScalarExpr::scalar(params.gamma_entry(i)))
            .sub(&s_cross_v(i));
        generators.push(NamedForm { name: format!("theta3_{i}"), form: f });
    }
    for (name, dir, other) in [("beta1", Coord::X, Dy), ("beta2", Coord::Y, Dx)] {
        let mut f = ScalarForm::zero(3);
        for i in 1..=3u8 {
            let g = ScalarExpr::scalar(params.gamma_entry(i));
            let ji = Jet::s(i).derive(dir);
            f = f.add(&ScalarForm::monomial(&[d(Jet::s(i)), other, Dt], var(JetSymbol::Field(ji)).mul(&g)));
            f = f.add(&ScalarForm::monomial(&[d(ji), other, Dt], var(JetSymbol::s(i)).mul(&g)));
        }
        generators.push(NamedForm { name: name.into(), form: f });
    }
    EdsIdeal { params: *params, generators }
}

impl EdsIdeal {
    pub fn generator(&self, name: &str) -> Option<&ScalarForm> {
        self.generators.iter().find(|g| g.name == name).map(|g| &g.form)
    }
}

/// Right-hand side of the evolution equation for component i:
/// `S_i,t = Γ_i (S × (S_xx + S_yy))_i`.
pub fn evolution_rhs(params: &ModelParams, i: u8) -> ScalarExpr {
    let lap = |c: u8| var(JetSymbol::jet(c, 2, 0, 0)).add(&var(JetSymbol::jet(c, 0, 2, 0)));
    let (j, k) = cyclic(i);
    let cross = var(JetSymbol::s(j)).mul(&lap(k)).sub(&var(JetSymbol::s(k)).mul(&lap(j)));
    cross.scale(&params.gamma_entry(i))
}

/// The model's equations imposed on sectioned forms: total-derivative
/// markers become jets, `D_t S` becomes the evolution right-hand side, and
/// results are reduced modulo the target-manifold constraint.
pub struct PdeSystem {
    pub params: ModelParams,
    reducer: ConstraintReducer,
}

impl PdeSystem {
    pub fn new(params: &ModelParams) -> Self {
        PdeSystem { params: *params, reducer: ConstraintReducer::new(params, 2) }
    }

    fn binding(&self, s: &JetSymbol) -> Option<ScalarExpr> {
        match s {
            JetSymbol::Total(Coord::T, j) if j.order() == 0 => Some(evolution_rhs(&self.params, j.comp)),
            JetSymbol::Total(c, j) => Some(var(JetSymbol::Field(j.derive(*c)))),
            _ => None,
        }
    }

    /// Bindings for every total-derivative marker in `symbols`.
    pub fn bindings_for(&self, symbols: &BTreeSet<JetSymbol>) -> BTreeMap<JetSymbol, ScalarExpr> {
        symbols.iter().filter_map(|s| self.binding(s).map(|b| (s.clone(), b))).collect()
    }

    pub fn on_shell(&self, e: &ScalarExpr) -> Result<ScalarExpr> {
        let b = self.bindings_for(&e.symbols());
        Ok(self.reducer.reduce(&e.substitute(&b)?))
    }

    pub fn constraint_reduce(&self, e: &ScalarExpr) -> ScalarExpr {
        self.reducer.reduce(e)
    }
}

/// The dx∧dy∧dt coefficient of a sectioned 3-form.
pub fn sectioned_scalar(g: &ScalarForm) -> ScalarExpr {
    g.section().coefficient(&[Dx, Dy, Dt])
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureEntry {
    pub name: String,
    /// Pullback of the generator with the model imposed.
    pub section_residual: ScalarExpr,
    /// Pullback of its exterior derivative with the model imposed.
    pub closure_residual: String,
    pub pass: bool,
}

pub fn verify_eds_closed(ideal: &EdsIdeal, pde: &PdeSystem) -> Result<Vec<ClosureEntry>> {
    let mut out = Vec::new();
    for g in &ideal.generators {
        let section_residual = pde.on_shell(&sectioned_scalar(&g.form))?;
        let dg = g.form.ext_d().section();
        let mut closure = ScalarForm::zero(dg.degree());
        for (w, c) in dg.terms() {
            closure.add_term(w, pde.on_shell(c)?);
        }
        let pass = section_residual.is_zero() && closure.is_zero();
        out.push(ClosureEntry {
            name: g.name.clone(),
            section_residual,
            closure_residual: closure.to_string(),
            pass,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_count() {
        assert_eq!(build_eds(&ModelParams::compact()).generators.len(), 11);
    }

    #[test]
    fn theta1_matches_display() {
        let eds = build_eds(&ModelParams::compact());
        let t = eds.generator("theta1_2").unwrap();
        assert_eq!(t.coefficient(&[d(Jet::s(2)), Dy, Dt]), ScalarExpr::int(1));
        assert_eq!(t.coefficient(&[Dx, Dy, Dt]), var(JetSymbol::sx(2)).neg());
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn gamma_changes_only_weighted_generators() {
        let a = build_eds(&ModelParams::compact());
        let b = build_eds(&ModelParams::noncompact());
        for (x, y) in a.generators.iter().zip(&b.generators) {
            let weighted = x.name == "theta3_3" || x.name.starts_with("beta");
            assert_eq!(x.form != y.form, weighted, "{}", x.name);
        }
    }

    #[test]
    fn d_theta1_component() {
        let eds = build_eds(&ModelParams::compact());
        let dt1 = eds.generator("theta1_1").unwrap().ext_d();
        let expect = ScalarForm::monomial(&[d(Jet::sx(1)), Dx, Dy, Dt], ScalarExpr::int(-1));
        assert_eq!(dt1, expect);
    }

    #[test]
    fn section_theta1() {
        let eds = build_eds(&ModelParams::compact());
        let s = sectioned_scalar(eds.generator("theta1_3").unwrap());
        let expect = var(JetSymbol::Total(Coord::X, Jet::s(3))).sub(&var(JetSymbol::sx(3)));
        assert_eq!(s, expect);
    }

    #[test]
    fn perturbed_generator_fails_with_witness() {
        let p = ModelParams::compact();
        let mut eds = build_eds(&p);
        eds.generators[0].form = eds.generators[0]
            .form
            .add(&ScalarForm::monomial(&[Dx, Dy, Dt], var(JetSymbol::s(1))));
        let report = verify_eds_closed(&eds, &PdeSystem::new(&p)).unwrap();
        assert!(!report[0].pass);
        assert_eq!(report[0].section_residual, var(JetSymbol::s(1)));
        assert!(report[1..].iter().all(|e| e.pass));
    }
}
