//! Concrete towers: Lie-valued H, F, G in the jets of S.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::eds::cyclic;
use crate::liealg::{substitute, LieElement, LieTerm, OpenAlgebra};
use crate::scalar::{ExactScalar, FieldExpr, Jet, JetSymbol, ModelParams, ScalarExpr};

/// Lie-valued polynomial in the jets.
pub type LieExpr = FieldExpr<LieElement>;

#[derive(Clone, Debug, PartialEq)]
pub struct Tower {
    pub name: String,
    pub params: ModelParams,
    pub h: LieExpr,
    pub f: LieExpr,
    pub g: LieExpr,
    /// The S_x-, S_y-free parts of F and G, when known.
    pub k: Option<LieExpr>,
    pub kbar: Option<LieExpr>,
    /// N×N constant matrices; C defaults to the identity.
    pub a: Vec<Vec<ExactScalar>>,
    pub b: Vec<Vec<ExactScalar>>,
    pub c: Vec<Vec<ExactScalar>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reduction {
    I,
    II,
    III,
}

impl Reduction {
    pub const ALL: [Reduction; 3] = [Reduction::I, Reduction::II, Reduction::III];

    /// Index of the single surviving component of X.
    pub fn active(self) -> u32 {
        match self {
            Reduction::I => 3,
            Reduction::II => 2,
            Reduction::III => 1,
        }
    }

    /// Names of `[X_a, X4]` and `[X_a, X5]`.
    pub fn named_pair(self) -> (u32, u32) {
        match self {
            Reduction::I => (10, 11),
            Reduction::II => (8, 9),
            Reduction::III => (6, 7),
        }
    }
}

impl FromStr for Reduction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "i" | "1" => Ok(Reduction::I),
            "ii" | "2" => Ok(Reduction::II),
            "iii" | "3" => Ok(Reduction::III),
            o => Err(Error::InvalidParameter(format!("reduction must be i, ii or iii, got `{o}`"))),
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::I => write!(f, "i"),
            Reduction::II => write!(f, "ii"),
            Reduction::III => write!(f, "iii"),
        }
    }
}

pub fn var(j: Jet) -> ScalarExpr {
    ScalarExpr::symbol(JetSymbol::Field(j))
}

pub fn gen(i: u32) -> LieElement {
    LieElement::gen(i)
}

pub fn word(i: u32, j: u32) -> LieElement {
    LieElement::term(LieTerm::br(LieTerm::Gen(i), LieTerm::Gen(j)), ExactScalar::one())
}

/// `p · e` for a scalar polynomial p.
pub fn lx(p: &ScalarExpr, e: &LieElement) -> LieExpr {
    p.times_coeff(e)
}

pub fn constant(e: &LieElement) -> LieExpr {
    LieExpr::constant(e.clone())
}

fn identity(n: usize) -> Vec<Vec<ExactScalar>> {
    (0..n).map(|r| (0..n).map(|c| if r == c { ExactScalar::one() } else { ExactScalar::zero() }).collect()).collect()
}

/// `Σ_m ∂ F/∂S_m · S_m,dir` for a Lie-valued F.
pub fn directional(f: &LieExpr, dir: fn(u8) -> Jet) -> LieExpr {
    let mut out = LieExpr::zero();
    for m in 1..=3 {
        out = out.add(&f.differentiate(&JetSymbol::s(m)).mul_scalar_expr(&var(dir(m))));
    }
    out
}

/// Componentwise bracket of Lie-valued polynomials, normalized in `alg`.
pub fn field_bracket(a: &LieExpr, b: &LieExpr, alg: &OpenAlgebra) -> LieExpr {
    let mut out = LieExpr::zero();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            out.add_term(ma.mul(mb), alg.bracket(ca, cb));
        }
    }
    out
}

pub fn normalize_expr(e: &LieExpr, alg: &OpenAlgebra) -> LieExpr {
    e.map_coeffs(|c| alg.normalize(c))
}

/// `((Γ X) × S)_j` for Lie-valued X.
fn gamma_x_cross_s(x: &[LieElement; 3], p: &ModelParams, j: u8) -> LieExpr {
    let gx = |i: u8| x[i as usize - 1].scale(&p.gamma_entry(i));
    let (q, r) = cyclic(j);
    lx(&var(Jet::s(r)), &gx(q)).sub(&lx(&var(Jet::s(q)), &gx(r)))
}

impl Tower {
    fn with(name: &str, p: &ModelParams, h: LieExpr, f: LieExpr, g: LieExpr) -> Tower {
        let n = p.n_xi as usize;
        Tower {
            name: name.into(),
            params: *p,
            h,
            f,
            g,
            k: None,
            kbar: None,
            a: vec![vec![ExactScalar::zero(); n]; n],
            b: identity(n),
            c: identity(n),
        }
    }

    /// Solved form with `X = (x1, x2, x3)`, `Y`, `Z` and a chosen K:
    /// `H = X·S + Y`, `F = −(ΓX × S)·S_x + K`,
    /// `G = (ΓX × S)·S_y − S1[X2,X3] + S2[X1,X3] − γ² S3[X1,X2] + Z`.
    pub fn solved_form(
        name: &str,
        p: &ModelParams,
        x: [LieElement; 3],
        y: LieElement,
        z: LieElement,
        k: LieExpr,
    ) -> Tower {
        let mut h = constant(&y);
        for i in 1..=3u8 {
            h = h.add(&lx(&var(Jet::s(i)), &x[i as usize - 1]));
        }
        let mut f = k.clone();
        let mut g = LieExpr::zero();
        for j in 1..=3u8 {
            let c = gamma_x_cross_s(&x, p, j);
            f = f.sub(&c.mul_scalar_expr(&var(Jet::sx(j))));
            g = g.add(&c.mul_scalar_expr(&var(Jet::sy(j))));
        }
        let br = |a: &LieElement, b: &LieElement| LieElement::bracket_word(a, b);
        let kbar = lx(&var(Jet::s(1)), &br(&x[1], &x[2]).neg())
            .add(&lx(&var(Jet::s(2)), &br(&x[0], &x[2])))
            .sub(&lx(&var(Jet::s(3)), &br(&x[0], &x[1]).scale(&p.gamma2.value())))
            .add(&constant(&z));
        let g = g.add(&kbar);
        let mut t = Tower::with(name, p, h, f, g);
        t.k = Some(k);
        t.kbar = Some(kbar);
        t
    }

    /// General solved form with X = (X1, X2, X3), Y = X4, Z = X5 and K = X12.
    pub fn general(p: &ModelParams) -> Tower {
        Tower::general_with_k(p, constant(&gen(12)))
    }

    pub fn general_with_k(p: &ModelParams, k: LieExpr) -> Tower {
        Tower::solved_form("general", p, [gen(1), gen(2), gen(3)], gen(4), gen(5), k)
    }

    /// The general form specialized to a single nonzero component of X.
    pub fn specialized(which: Reduction, p: &ModelParams, k: LieExpr) -> Tower {
        let a = which.active();
        let x = [1u32, 2, 3].map(|i| if i == a { gen(i) } else { LieElement::zero() });
        Tower::solved_form(&format!("specialized-{which}"), p, x, gen(4), gen(5), k)
    }

    /// Replace generators by their images throughout H, F, G, K, K̄.
    pub fn substitute(&self, m: &BTreeMap<u32, LieElement>) -> Tower {
        let s = |e: &LieExpr| e.map_coeffs(|c| substitute(c, m));
        Tower {
            h: s(&self.h),
            f: s(&self.f),
            g: s(&self.g),
            k: self.k.as_ref().map(s),
            kbar: self.kbar.as_ref().map(s),
            ..self.clone()
        }
    }

    pub fn normalized(&self, alg: &OpenAlgebra) -> Tower {
        let s = |e: &LieExpr| normalize_expr(e, alg);
        Tower {
            h: s(&self.h),
            f: s(&self.f),
            g: s(&self.g),
            k: self.k.as_ref().map(s),
            kbar: self.kbar.as_ref().map(s),
            ..self.clone()
        }
    }

    /// Every generator index mentioned in H, F, G.
    pub fn generators(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for e in [&self.h, &self.f, &self.g] {
            for (_, c) in e.terms() {
                v.extend(c.generators());
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// The stated tower for reduction (i), (ii) or (iii), with K = X12.
pub fn build_reduction(which: Reduction, p: &ModelParams) -> Tower {
    let g2 = p.gamma2.value();
    let s = |i: u8| var(Jet::s(i));
    let sx = |i: u8| var(Jet::sx(i));
    let sy = |i: u8| var(Jet::sy(i));
    // (a, b, c): H = S_a X_a + X4, G = γ²(S_b S_c,y − S_c S_b,y) X_a + X5,
    // F = γ²(S_c S_b,x − S_b S_c,x) X_a + X12.
    let (a, b, c) = match which {
        Reduction::I => (3u8, 1u8, 2u8),
        Reduction::II => (2, 1, 3),
        Reduction::III => (1, 2, 3),
    };
    let xa = gen(a as u32);
    let h = lx(&s(a), &xa).add(&constant(&gen(4)));
    let gpoly = s(b).mul(&sy(c)).sub(&s(c).mul(&sy(b))).scale(&g2);
    let fpoly = s(c).mul(&sx(b)).sub(&s(b).mul(&sx(c))).scale(&g2);
    let k = constant(&gen(12));
    let g = lx(&gpoly, &xa).add(&constant(&gen(5)));
    let f = lx(&fpoly, &xa).add(&k);
    let mut t = Tower::with(&format!("reduction-{which}"), p, h, f, g);
    t.k = Some(k);
    t.kbar = Some(constant(&gen(5)));
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_h() {
        let p = ModelParams::compact();
        for (r, a) in [(Reduction::I, 3), (Reduction::II, 2), (Reduction::III, 1)] {
            let t = build_reduction(r, &p);
            let expect = lx(&var(Jet::s(a as u8)), &gen(a)).add(&constant(&gen(4)));
            assert_eq!(t.h, expect);
        }
    }

    #[test]
    fn reduction_i_is_the_specialized_general_form() {
        for p in [ModelParams::compact(), ModelParams::noncompact()] {
            let t = build_reduction(Reduction::I, &p);
            let s = Tower::specialized(Reduction::I, &p, constant(&gen(12)));
            let free = OpenAlgebra::new();
            assert_eq!(normalize_expr(&t.f, &free), normalize_expr(&s.f, &free));
            assert_eq!(normalize_expr(&t.g, &free), normalize_expr(&s.g, &free));
        }
    }

    #[test]
    fn directional_derivative() {
        let e = lx(&var(Jet::s(1)).mul(&var(Jet::s(2))), &gen(4));
        let d = directional(&e, Jet::sx);
        let expect = lx(&var(Jet::sx(1)).mul(&var(Jet::s(2))), &gen(4)).add(&lx(&var(Jet::s(1)).mul(&var(Jet::sx(2))), &gen(4)));
        assert_eq!(d, expect);
    }
}
