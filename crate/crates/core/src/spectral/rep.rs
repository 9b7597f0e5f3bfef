//! Closing conditions, the Pauli representation and matrix towers.

use std::collections::BTreeMap;

use super::matrix::{MatExpr, Matrix2};
use crate::error::{Error, Result};
use crate::liealg::{LieElement, MatrixRep};
use crate::prolong::{Reduction, Tower};
use crate::scalar::ExactScalar;

/// `2iλ`.
pub fn two_i_lambda() -> ExactScalar {
    &(&ExactScalar::from_int(2) * &ExactScalar::i()) * &ExactScalar::lambda()
}

/// Closing conditions for a reduction:
/// `[X_a,X4] ↦ 2iλX5`, `[X_a,X5] ↦ −2iλX4`, `X12 ↦ 2iλX_a`.
pub fn closing_map(which: Reduction) -> BTreeMap<u32, LieElement> {
    let c = two_i_lambda();
    let a = which.active();
    let (p, q) = which.named_pair();
    [
        (p, LieElement::gen(5).scale(&c)),
        (q, LieElement::gen(4).scale(&c).neg()),
        (12, LieElement::gen(a).scale(&c)),
    ]
    .into_iter()
    .collect()
}

/// Union of the three closing variants together with `X1 = X2 = X3`
/// (equivalently `X1 = X2 = X3 = −(i/2λ) X12`), applied to the full table.
pub fn alternative_closing_map() -> BTreeMap<u32, LieElement> {
    let mut m = BTreeMap::new();
    for w in Reduction::ALL {
        for (k, v) in closing_map(w) {
            if k != 12 {
                m.insert(k, v);
            }
        }
    }
    m.insert(1, LieElement::gen(3));
    m.insert(2, LieElement::gen(3));
    m.insert(12, LieElement::gen(3).scale(&two_i_lambda()));
    m
}

/// Surviving generators `(X_a, X4, X5) ↦ λ(σ1, σ2, σ3)`, closed brackets
/// mapped to the images of their closing values, everything else in
/// X1..X12 to zero.
pub fn pauli_rep(which: Reduction) -> MatrixRep {
    let l = ExactScalar::lambda();
    let mut images: BTreeMap<u32, Matrix2> = (1..=12).map(|k| (k, Matrix2::zero())).collect();
    let a = which.active();
    images.insert(a, Matrix2::pauli(1).scale(&l));
    images.insert(4, Matrix2::pauli(2).scale(&l));
    images.insert(5, Matrix2::pauli(3).scale(&l));
    let base = MatrixRep { images: images.clone() };
    for (k, v) in closing_map(which) {
        let img = base.image(&v).expect("images of surviving generators present");
        images.insert(k, img);
    }
    MatrixRep { images }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTower {
    pub h: MatExpr,
    pub f: MatExpr,
    pub g: MatExpr,
}

pub fn instantiate_tower(t: &Tower, r: &MatrixRep) -> Result<MatrixTower> {
    let conv = |e: &crate::prolong::LieExpr| -> Result<MatExpr> { e.try_map_coeffs(|c| r.image(c)) };
    for g in t.generators() {
        if !r.images.contains_key(&g) {
            return Err(Error::UncoveredGenerator(g));
        }
    }
    Ok(MatrixTower { h: conv(&t.h)?, f: conv(&t.f)?, g: conv(&t.g)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{apply_closing_map, verify_homomorphism};
    use crate::prolong::{build_reduction, extract_open_algebra, verify_solution_form, BracketConvention};
    use crate::scalar::{JetSymbol, ModelParams, ScalarExpr};

    #[test]
    fn x12_image() {
        let r = pauli_rep(Reduction::I);
        let expect = Matrix2::pauli(1).scale(&(&two_i_lambda() * &ExactScalar::lambda()));
        assert_eq!(r.images[&12], expect);
        assert!(r.images.values().all(|m| m.trace().is_zero()));
    }

    #[test]
    fn closed_table_represented_exactly() {
        let p = ModelParams::compact();
        let t = build_reduction(Reduction::I, &p);
        let rep = verify_solution_form(&t, BracketConvention::GF).unwrap();
        let alg = extract_open_algebra(&t, &rep).unwrap();
        let q = apply_closing_map(&alg, &closing_map(Reduction::I)).unwrap();
        assert!(verify_homomorphism(&q, &pauli_rep(Reduction::I)).unwrap().pass);
    }

    #[test]
    fn tower_i_h_image() {
        let t = build_reduction(Reduction::I, &ModelParams::compact());
        let m = instantiate_tower(&t, &pauli_rep(Reduction::I)).unwrap();
        let l = ExactScalar::lambda();
        let expect = ScalarExpr::symbol(JetSymbol::s(3))
            .times_coeff(&Matrix2::pauli(1).scale(&l))
            .add(&MatExpr::constant(Matrix2::pauli(2).scale(&l)));
        assert_eq!(m.h, expect);
    }

    #[test]
    fn uncovered_generator_named() {
        let t = build_reduction(Reduction::I, &ModelParams::compact());
        let r = MatrixRep::new([(3, Matrix2::zero())]);
        assert!(matches!(instantiate_tower(&t, &r), Err(Error::UncoveredGenerator(4))));
    }
}
