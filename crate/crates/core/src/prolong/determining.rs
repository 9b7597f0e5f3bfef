//! Determining equations from `dΩ ≡ 0 (mod I)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ansatz::{param, unknown, Ansatz};
use crate::error::Result;
use crate::exterior::eds::cyclic;
use crate::exterior::{reduce_mod_ideal, EdsIdeal, OneForm, ScalarForm, Stage};
use crate::scalar::{FnArg, Jet, JetSymbol, ParamMatrix, ScalarExpr, Unknown, UnknownFn};

use OneForm::{Dt, Dx, Dy};

/// Which abstract bracket the vector-field commutator
/// `G^m ∂_m F − F^m ∂_m G` is identified with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BracketConvention {
    #[default]
    GF,
    FG,
}

impl BracketConvention {
    /// Sign relating `[G,F]` to the bracket written in this convention.
    pub fn sign(self) -> i64 {
        match self {
            BracketConvention::GF => 1,
            BracketConvention::FG => -1,
        }
    }
}

impl std::str::FromStr for BracketConvention {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "GF" => Ok(BracketConvention::GF),
            "FG" => Ok(BracketConvention::FG),
            o => Err(crate::Error::InvalidParameter(format!("bracket convention must be GF or FG, got `{o}`"))),
        }
    }
}

impl fmt::Display for BracketConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketConvention::GF => write!(f, "GF"),
            BracketConvention::FG => write!(f, "FG"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingEquation {
    pub k: u8,
    pub stage: Stage,
    /// Basis 3-form whose coefficient produced the equation.
    pub origin: Vec<OneForm>,
    pub residual: ScalarExpr,
}

impl DeterminingEquation {
    pub fn origin_string(&self) -> String {
        crate::exterior::form::word_string(&self.origin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Family {
    HSx,
    HSy,
    FSx,
    FSy,
    GSy,
    GSx,
    FurtherConstraint,
    Fundamental,
    XiCompatibility,
    Commuting,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftedEquation {
    pub k: u8,
    pub family: Family,
    pub text: String,
    /// Whether the component equations matched the template exactly.
    pub matched: bool,
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub stage1: Vec<DeterminingEquation>,
    pub stage2: Vec<DeterminingEquation>,
    /// Stage-1 reduction of dΩ^k without the derivative-condition words.
    pub further_constraint: Vec<ScalarForm>,
    pub lifted: Vec<LiftedEquation>,
    /// Nonzero entries of `[A,B]` as symbolic polynomials.
    pub ab_commutator: Vec<ScalarExpr>,
    /// Stage-2 origins not matched by any template.
    pub unmatched: Vec<String>,
}

fn is_derivative_word(w: &[OneForm]) -> bool {
    w.iter().any(|f| matches!(f, OneForm::DField(j) if j.order() == 1))
}

fn equations(k: u8, stage: Stage, form: &ScalarForm) -> Vec<DeterminingEquation> {
    form.terms()
        .map(|(w, c)| DeterminingEquation { k, stage, origin: w.clone(), residual: c.clone() })
        .collect()
}

fn ud(f: UnknownFn, k: u8, n: u8, args: &[FnArg]) -> ScalarExpr {
    let mut u = Unknown::new(f, k, n);
    for a in args {
        u = u.derived(*a);
    }
    ScalarExpr::symbol(JetSymbol::Unknown(u))
}

fn field(j: Jet) -> FnArg {
    FnArg::Field(j)
}

fn var(j: Jet) -> ScalarExpr {
    ScalarExpr::symbol(JetSymbol::Field(j))
}

struct Templates<'a> {
    ansatz: &'a Ansatz,
    k: u8,
}

impl Templates<'_> {
    fn n(&self) -> u8 {
        self.ansatz.params.n_xi
    }

    /// `((Γ H_S) × S)_j`.
    fn cross(&self, j: u8) -> ScalarExpr {
        let a = |i: u8| {
            ud(UnknownFn::H, self.k, self.n(), &[field(Jet::s(i))]).scale(&self.ansatz.params.gamma_entry(i))
        };
        let (p, q) = cyclic(j);
        a(p).mul(&var(Jet::s(q))).sub(&a(q).mul(&var(Jet::s(p))))
    }

    fn derivative(&self, fam: Family, j: u8) -> (Vec<OneForm>, ScalarExpr) {
        let (k, n) = (self.k, self.n());
        let dsx = OneForm::DField(Jet::sx(j));
        let dsy = OneForm::DField(Jet::sy(j));
        match fam {
            Family::HSx => (vec![dsx, Dx, Dy], ud(UnknownFn::H, k, n, &[field(Jet::sx(j))])),
            Family::HSy => (vec![dsy, Dx, Dy], ud(UnknownFn::H, k, n, &[field(Jet::sy(j))])),
            Family::FSx => (vec![dsx, Dy, Dt], ud(UnknownFn::F, k, n, &[field(Jet::sx(j))]).add(&self.cross(j))),
            Family::FSy => (vec![dsy, Dy, Dt], ud(UnknownFn::F, k, n, &[field(Jet::sy(j))])),
            Family::GSy => (vec![dsy, Dx, Dt], ud(UnknownFn::G, k, n, &[field(Jet::sy(j))]).sub(&self.cross(j))),
            Family::GSx => (vec![dsx, Dx, Dt], ud(UnknownFn::G, k, n, &[field(Jet::sx(j))])),
            _ => unreachable!("not a derivative family"),
        }
    }

    /// `F_S·S_x − G_S·S_y`.
    fn transport(&self) -> ScalarExpr {
        let (k, n) = (self.k, self.n());
        let mut e = ScalarExpr::zero();
        for i in 1..=3 {
            e = e.add(&ud(UnknownFn::F, k, n, &[field(Jet::s(i))]).mul(&var(Jet::sx(i))));
            e = e.sub(&ud(UnknownFn::G, k, n, &[field(Jet::s(i))]).mul(&var(Jet::sy(i))));
        }
        e
    }

    fn further(&self) -> ScalarForm {
        let (k, n) = (self.k, self.n());
        let mut f = ScalarForm::monomial(&[Dx, Dy, Dt], self.transport());
        for m in 1..=n {
            let xi = OneForm::DXi(m);
            f = f
                .add(&ScalarForm::monomial(&[xi, Dx, Dy], ud(UnknownFn::H, k, n, &[FnArg::Xi(m)])))
                .add(&ScalarForm::monomial(&[xi, Dy, Dt], ud(UnknownFn::F, k, n, &[FnArg::Xi(m)])))
                .add(&ScalarForm::monomial(&[xi, Dx, Dt], ud(UnknownFn::G, k, n, &[FnArg::Xi(m)])));
        }
        f
    }

    /// `F_S·S_x − G_S·S_y + G^m F^k_ξm − F^m G^k_ξm`.
    fn fundamental(&self) -> ScalarExpr {
        let (k, n) = (self.k, self.n());
        let mut e = self.transport();
        for m in 1..=n {
            let xi = [FnArg::Xi(m)];
            e = e.add(&unknown(UnknownFn::G, m, n).mul(&ud(UnknownFn::F, k, n, &xi)));
            e = e.sub(&unknown(UnknownFn::F, m, n).mul(&ud(UnknownFn::G, k, n, &xi)));
        }
        e
    }

    /// `H^k_ξl + F^k_ξm A^m_l − G^k_ξm B^m_l`.
    fn xi_compat(&self, l: u8) -> ScalarExpr {
        let (k, n) = (self.k, self.n());
        let mut e = ud(UnknownFn::H, k, n, &[FnArg::Xi(l)]);
        for m in 1..=n {
            let xi = [FnArg::Xi(m)];
            e = e.add(&ud(UnknownFn::F, k, n, &xi).mul(&param(ParamMatrix::A, m, l)));
            e = e.sub(&ud(UnknownFn::G, k, n, &xi).mul(&param(ParamMatrix::B, m, l)));
        }
        e
    }
}

fn sup(k: u8, n: u8) -> String {
    if n == 1 {
        String::new()
    } else {
        format!("^{k}")
    }
}

fn family_text(fam: Family, k: u8, n: u8, conv: BracketConvention) -> String {
    let s = sup(k, n);
    match fam {
        Family::HSx => format!("H{s}_{{S_x}} = 0"),
        Family::HSy => format!("H{s}_{{S_y}} = 0"),
        Family::FSx => format!("F{s}_{{S_x}} = -(Gamma H{s}_S) x S"),
        Family::FSy => format!("F{s}_{{S_y}} = 0"),
        Family::GSy => format!("G{s}_{{S_y}} = (Gamma H{s}_S) x S"),
        Family::GSx => format!("G{s}_{{S_x}} = 0"),
        Family::FurtherConstraint => format!(
            "(F{s}_S.S_x - G{s}_S.S_y) dx^dy^dt + H{s}_{{xi^m}} dxi^m^dx^dy + F{s}_{{xi^m}} dxi^m^dy^dt + G{s}_{{xi^m}} dxi^m^dx^dt = 0"
        ),
        Family::Fundamental => {
            let br = match conv {
                BracketConvention::GF => "[G,F]",
                BracketConvention::FG => "[F,G]",
            };
            format!("F{s}_S.S_x - G{s}_S.S_y + {br}{s} = 0")
        }
        Family::XiCompatibility => format!("H{s}_{{xi^l}} + F{s}_{{xi^m}} A^m_l - G{s}_{{xi^m}} B^m_l = 0"),
        Family::Commuting => "[A,B] = 0".into(),
    }
}

const DERIVATIVE_FAMILIES: [Family; 6] =
    [Family::HSx, Family::HSy, Family::FSx, Family::FSy, Family::GSy, Family::GSx];

/// Reduce `dΩ^k` modulo the ideal, first with the jet rules only, then
/// with the `dt∧dξ` substitution, and read off one equation per basis
/// 3-form. The results are matched against the known closed forms.
pub fn derive_determining_equations(
    ansatz: &Ansatz,
    ideal: &EdsIdeal,
    conv: BracketConvention,
) -> Result<Derivation> {
    let n = ansatz.params.n_xi;
    let mut stage1 = Vec::new();
    let mut stage2 = Vec::new();
    let mut further_constraint = Vec::new();
    let mut lifted = Vec::new();
    let mut unmatched = Vec::new();
    for k in 1..=n {
        let d_omega = ansatz.omegas[k as usize - 1].ext_d();
        let r1 = reduce_mod_ideal(&d_omega, ideal, None, Stage::Jet)?;
        let r2 = reduce_mod_ideal(&d_omega, ideal, Some(&ansatz.xi), Stage::Full)?;
        stage1.extend(equations(k, Stage::Jet, &r1));
        stage2.extend(equations(k, Stage::Full, &r2));

        let t = Templates { ansatz, k };
        for fam in DERIVATIVE_FAMILIES {
            let matched = (1..=3).all(|j| {
                let (w, e) = t.derivative(fam, j);
                r1.coefficient(&w) == e
            });
            lifted.push(LiftedEquation { k, family: fam, text: family_text(fam, k, n, conv), matched });
        }

        let mut rest = ScalarForm::zero(3);
        for (w, c) in r1.terms() {
            if !is_derivative_word(w) {
                rest.add_term(w, c.clone());
            }
        }
        let matched = rest == t.further();
        lifted.push(LiftedEquation {
            k,
            family: Family::FurtherConstraint,
            text: if matched { family_text(Family::FurtherConstraint, k, n, conv) } else { rest.to_string() },
            matched,
        });
        further_constraint.push(rest);

        let vol = r2.coefficient(&[Dx, Dy, Dt]);
        let matched = vol == t.fundamental();
        lifted.push(LiftedEquation {
            k,
            family: Family::Fundamental,
            text: if matched { family_text(Family::Fundamental, k, n, conv) } else { format!("{vol} = 0") },
            matched,
        });
        let matched = (1..=n).all(|l| r2.coefficient(&[Dx, Dy, OneForm::DXi(l)]) == t.xi_compat(l));
        lifted.push(LiftedEquation {
            k,
            family: Family::XiCompatibility,
            text: family_text(Family::XiCompatibility, k, n, conv),
            matched,
        });

        for (w, _) in r2.terms() {
            let known = is_derivative_word(w)
                || w.as_slice() == [Dx, Dy, Dt]
                || (w.len() == 3 && w[0] == Dx && w[1] == Dy && matches!(w[2], OneForm::DXi(_)));
            if !known {
                unmatched.push(crate::exterior::form::word_string(w));
            }
        }
    }

    let mut ab_commutator = Vec::new();
    for r in 1..=n {
        for c in 1..=n {
            let mut e = ScalarExpr::zero();
            for m in 1..=n {
                e = e.add(&param(ParamMatrix::A, r, m).mul(&param(ParamMatrix::B, m, c)));
                e = e.sub(&param(ParamMatrix::B, r, m).mul(&param(ParamMatrix::A, m, c)));
            }
            if !e.is_zero() {
                ab_commutator.push(e);
            }
        }
    }
    lifted.push(LiftedEquation {
        k: 0,
        family: Family::Commuting,
        text: family_text(Family::Commuting, 0, n, conv),
        matched: true,
    });

    Ok(Derivation { stage1, stage2, further_constraint, lifted, ab_commutator, unmatched })
}
