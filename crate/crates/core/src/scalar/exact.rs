//! Gaussian-rational Laurent polynomials in the spectral parameter λ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gauss {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gauss {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gauss { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Gauss::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn i() -> Self {
        Gauss { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gauss { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for &Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", fmt_rational(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let mag = self.im.abs();
                if mag.is_one() {
                    write!(f, "({} {} i)", fmt_rational(&self.re), sign)
                } else {
                    write!(f, "({} {} {}*i)", fmt_rational(&self.re), sign, fmt_rational(&mag))
                }
            }
        }
    }
}

/// Exact scalar: finite Laurent polynomial in λ with Gaussian-rational
/// coefficients. The zero scalar is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactScalar {
    terms: BTreeMap<i32, Gauss>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(Gauss::from_int(n), 0)
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        Self::monomial(Gauss::real(r), 0)
    }

    pub fn from_gauss(g: Gauss) -> Self {
        Self::monomial(g, 0)
    }

    pub fn i() -> Self {
        Self::monomial(Gauss::i(), 0)
    }

    /// λ^k.
    pub fn lambda_pow(k: i32) -> Self {
        Self::monomial(Gauss::from_int(1), k)
    }

    pub fn lambda() -> Self {
        Self::lambda_pow(1)
    }

    pub fn monomial(c: Gauss, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        ExactScalar { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Gauss)>>(it: I) -> Self {
        let mut s = ExactScalar::zero();
        for (e, c) in it {
            s.add_term(e, &c);
        }
        s
    }

    fn add_term(&mut self, exp: i32, c: &Gauss) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&exp) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Gauss)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The λ⁰ coefficient when the scalar has no other terms.
    pub fn as_constant(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::from_int(0)),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// The real rational value when the scalar is a real constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        let g = self.as_constant()?;
        g.im.is_zero().then_some(g.re)
    }

    /// Multiplicative inverse; only single-term scalars are units.
    pub fn recip(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.recip()?, -e))
    }

    /// Leading (highest λ-power) coefficient.
    pub fn leading(&self) -> Option<(i32, &Gauss)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at a complex value of λ.
    pub fn eval(&self, lambda: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let (re, im) = c.to_f64_pair();
            acc += num_complex::Complex64::new(re, im) * lambda.powi(*e);
        }
        acc
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        self + &(-o)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let mut out = ExactScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| match *e {
                0 => c.to_string(),
                _ => {
                    let lam = if *e == 1 { "lambda".to_string() } else { format!("lambda^{e}") };
                    if *c == Gauss::from_int(1) {
                        lam
                    } else if *c == Gauss::from_int(-1) {
                        format!("-{lam}")
                    } else {
                        format!("{c}*{lam}")
                    }
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(" + "))
        }
    }
}
