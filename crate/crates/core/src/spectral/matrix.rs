//! 2×2 matrices over exact scalars or field polynomials.

use std::fmt;

use crate::scalar::{ExactScalar, ScalarExpr};

/// Entries a 2×2 matrix can hold.
pub trait Entry: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn from_scalar(s: &ExactScalar) -> Self;
}

impl Entry for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_scalar(s: &ExactScalar) -> Self {
        s.clone()
    }
}

impl Entry for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }
    fn one() -> Self {
        ScalarExpr::int(1)
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ScalarExpr::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ScalarExpr::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarExpr::mul(self, o)
    }
    fn from_scalar(s: &ExactScalar) -> Self {
        ScalarExpr::scalar(s.clone())
    }
}

/// Row-major 2×2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2<T: Entry = ExactScalar> {
    pub m: [[T; 2]; 2],
}

pub type ExprMatrix = Matrix2<ScalarExpr>;

impl<T: Entry> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix2 { m: [[a, b], [c, d]] }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// Pauli matrix σ_k, k ∈ {1, 2, 3}.
    pub fn pauli(k: u8) -> Self {
        let s = |x: ExactScalar| T::from_scalar(&x);
        let (o, z, i) = (ExactScalar::one(), ExactScalar::zero(), ExactScalar::i());
        match k {
            1 => Self::new(s(z.clone()), s(o.clone()), s(o), s(z)),
            2 => Self::new(s(z.clone()), s(-&i), s(i), s(z)),
            3 => Self::new(s(o.clone()), s(z.clone()), s(z), s(-&o)),
            _ => panic!("Pauli index must be 1, 2 or 3"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(Entry::is_zero)
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Self::new(f(&self.m[0][0], &o.m[0][0]), f(&self.m[0][1], &o.m[0][1]), f(&self.m[1][0], &o.m[1][0]), f(&self.m[1][1], &o.m[1][1]))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, T::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, T::sub)
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Self::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s.mul(x))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = |r: usize, c: usize| self.m[r][0].mul(&o.m[0][c]).add(&self.m[r][1].mul(&o.m[1][c]));
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    /// `self·o − o·self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> T {
        self.m[0][0].add(&self.m[1][1])
    }

    pub fn det(&self) -> T {
        self.m[0][0].mul(&self.m[1][1]).sub(&self.m[0][1].mul(&self.m[1][0]))
    }

    /// Whether the matrix is a multiple of the identity.
    pub fn as_scalar(&self) -> Option<T> {
        (self.m[0][1].is_zero() && self.m[1][0].is_zero() && self.m[0][0] == self.m[1][1]).then(|| self.m[0][0].clone())
    }

    /// Coordinates `(c0, c1, c2, c3)` in the basis `(I, σ1, σ2, σ3)`,
    /// scaled by 2 to stay within the entry ring.
    pub fn pauli_coords_doubled(&self) -> [T; 4] {
        let [[a, b], [c, d]] = &self.m;
        let i = T::from_scalar(&ExactScalar::i());
        [a.add(d), b.add(c), i.mul(&b.sub(c)), a.sub(d)]
    }
}

impl Matrix2<ExactScalar> {
    pub fn inverse(&self) -> Option<Self> {
        let inv = self.det().recip()?;
        let [[a, b], [c, d]] = &self.m;
        Some(Self::new(d * &inv, -&(b * &inv), -&(c * &inv), a * &inv))
    }

    pub fn to_expr(&self) -> ExprMatrix {
        self.map_to(|x| ScalarExpr::scalar(x.clone()))
    }
}

impl<T: Entry> Matrix2<T> {
    pub fn map_to<U: Entry>(&self, f: impl Fn(&T) -> U) -> Matrix2<U> {
        Matrix2::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }
}

impl<T: Entry> fmt::Display for Matrix2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

impl crate::scalar::Coefficient for Matrix2<ExactScalar> {
    fn zero() -> Self {
        Matrix2::zero()
    }
    fn is_zero(&self) -> bool {
        Matrix2::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn negated(&self) -> Self {
        self.map(|x| -x)
    }
    fn scaled(&self, s: &ExactScalar) -> Self {
        self.scale(s)
    }
}

/// Matrix-valued polynomial in the jets.
pub type MatExpr = crate::scalar::FieldExpr<Matrix2<ExactScalar>>;

/// `e · m` for a constant matrix m.
pub fn mul_right(e: &MatExpr, m: &Matrix2) -> MatExpr {
    e.map_coeffs(|c| c.mul(m))
}

/// `m · e` for a constant matrix m.
pub fn mul_left(m: &Matrix2, e: &MatExpr) -> MatExpr {
    e.map_coeffs(|c| m.mul(c))
}

/// Pointwise matrix product of two matrix polynomials.
pub fn mat_product(a: &MatExpr, b: &MatExpr) -> MatExpr {
    let mut out = MatExpr::zero();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            out.add_term(ma.mul(mb), ca.mul(cb));
        }
    }
    out
}

/// `a·b − b·a`.
pub fn mat_commutator(a: &MatExpr, b: &MatExpr) -> MatExpr {
    mat_product(a, b).sub(&mat_product(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_commutators() {
        let two_i = &ExactScalar::from_int(2) * &ExactScalar::i();
        for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let lhs = Matrix2::<ExactScalar>::pauli(a).commutator(&Matrix2::pauli(b));
            assert_eq!(lhs, Matrix2::pauli(c).scale(&two_i));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix2::new(ExactScalar::from_int(2), ExactScalar::one(), ExactScalar::i(), ExactScalar::from_int(3));
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix2::identity());
    }

    #[test]
    fn pauli_coordinates() {
        let m = Matrix2::<ExactScalar>::pauli(2);
        let c = m.pauli_coords_doubled();
        assert!(c[0].is_zero() && c[1].is_zero() && c[3].is_zero());
        assert_eq!(c[2], ExactScalar::from_int(2));
    }
}
