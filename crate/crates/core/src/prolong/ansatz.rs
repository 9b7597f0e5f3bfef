//! The prolongation ansatz Ω^k with undetermined H, F, G.

use crate::exterior::{OneForm, ScalarForm, XiSubstitution};
use crate::scalar::{ExactScalar, JetSymbol, ModelParams, ParamMatrix, ScalarExpr, UnknownFn};

use OneForm::{Dt, Dx, Dy};

/// `Ω^k = H^k dx∧dy + F^k dy∧dt + G^k dx∧dt + (A^k_m dx + B^k_m dy + C^k_m dt)∧dξ^m`
/// with C = identity.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub params: ModelParams,
    pub omegas: Vec<ScalarForm>,
    pub xi: XiSubstitution,
}

pub fn unknown(f: UnknownFn, k: u8, n: u8) -> ScalarExpr {
    ScalarExpr::symbol(JetSymbol::unknown(f, k, n))
}

pub fn param(matrix: ParamMatrix, row: u8, col: u8) -> ScalarExpr {
    ScalarExpr::symbol(JetSymbol::Param { matrix, row, col })
}

pub fn build_ansatz(p: &ModelParams) -> Ansatz {
    let n = p.n_xi;
    let mut omegas = Vec::new();
    for k in 1..=n {
        let mut om = ScalarForm::monomial(&[Dx, Dy], unknown(UnknownFn::H, k, n))
            .add(&ScalarForm::monomial(&[Dy, Dt], unknown(UnknownFn::F, k, n)))
            .add(&ScalarForm::monomial(&[Dx, Dt], unknown(UnknownFn::G, k, n)));
        for m in 1..=n {
            let xi = OneForm::DXi(m);
            om = om
                .add(&ScalarForm::monomial(&[Dx, xi], param(ParamMatrix::A, k, m)))
                .add(&ScalarForm::monomial(&[Dy, xi], param(ParamMatrix::B, k, m)));
            if k == m {
                om = om.add(&ScalarForm::basis(&[Dt, xi]));
            }
        }
        omegas.push(om);
    }
    let per = |f: UnknownFn| (1..=n).map(|k| unknown(f, k, n)).collect();
    let mat = |pm: ParamMatrix| (1..=n).map(|k| (1..=n).map(|l| param(pm, k, l)).collect()).collect();
    let xi = XiSubstitution {
        h: per(UnknownFn::H),
        f: per(UnknownFn::F),
        g: per(UnknownFn::G),
        a: mat(ParamMatrix::A),
        b: mat(ParamMatrix::B),
    };
    Ansatz { params: *p, omegas, xi }
}

/// Coefficients of `ω ∧ (A dx + B dy + dt)` with `ω = Γ1 dx + Γ2 dy + Γ3 dt + dξ`
/// for a single pseudopotential: returns the (dx∧dy, dy∧dt, dx∧dt)
/// coefficients together with the expected `Γ1B − Γ2A`, `Γ2 − Γ3B`,
/// `Γ1 − Γ3A`.
pub fn footnote_coefficients(
    gamma: [ExactScalar; 3],
    a: ExactScalar,
    b: ExactScalar,
) -> ([ScalarExpr; 3], [ScalarExpr; 3]) {
    let s = |x: &ExactScalar| ScalarExpr::scalar(x.clone());
    let omega = ScalarForm::monomial(&[Dx], s(&gamma[0]))
        .add(&ScalarForm::monomial(&[Dy], s(&gamma[1])))
        .add(&ScalarForm::monomial(&[Dt], s(&gamma[2])))
        .add(&ScalarForm::basis(&[OneForm::DXi(1)]));
    let theta = ScalarForm::monomial(&[Dx], s(&a))
        .add(&ScalarForm::monomial(&[Dy], s(&b)))
        .add(&ScalarForm::basis(&[Dt]));
    let w = omega.wedge(&theta);
    let got = [w.coefficient(&[Dx, Dy]), w.coefficient(&[Dy, Dt]), w.coefficient(&[Dx, Dt])];
    let expect = [
        s(&(&(&gamma[0] * &b) - &(&gamma[1] * &a))),
        s(&(&gamma[1] - &(&gamma[2] * &b))),
        s(&(&gamma[0] - &(&gamma[2] * &a))),
    ];
    (got, expect)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pseudopotential_has_six_families() {
        let a = build_ansatz(&ModelParams::compact());
        assert_eq!(a.omegas.len(), 1);
        assert_eq!(a.omegas[0].len(), 6);
        assert_eq!(a.omegas[0].coefficient(&[Dt, OneForm::DXi(1)]), ScalarExpr::int(1));
    }

    #[test]
    fn two_pseudopotentials() {
        let p = ModelParams::new(crate::scalar::Gamma2::Compact, 2).unwrap();
        let a = build_ansatz(&p);
        // 3 + 2·2 + 1 terms per k
        assert!(a.omegas.iter().all(|o| o.len() == 8));
    }

    #[test]
    fn footnote_relation_holds() {
        let g = [ExactScalar::from_int(2), ExactScalar::from_int(3), &ExactScalar::from_int(5) + &ExactScalar::lambda()];
        let (got, expect) = footnote_coefficients(g, ExactScalar::from_int(7), ExactScalar::from_ratio(1, 11));
        assert_eq!(got, expect);
    }
}
