//! Polynomials in jet symbols with coefficients in a pluggable algebra.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::exact::ExactScalar;
use super::jet::{JetSymbol, Partial};
use crate::error::{Error, Result};

/// Coefficient algebra of a [`FieldExpr`]: a module over [`ExactScalar`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, s: &ExactScalar) -> Self;
    /// Used only for display; `true` when the coefficient prints as an omitted `1`.
    fn is_unit(&self) -> bool {
        false
    }
}

/// Coefficient algebra with an associative (possibly noncommutative) product.
pub trait RingCoefficient: Coefficient {
    fn one() -> Self;
    fn times(&self, o: &Self) -> Self;
}

impl Coefficient for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, s: &ExactScalar) -> Self {
        s * self
    }
    fn is_unit(&self) -> bool {
        self.is_one()
    }
}

impl RingCoefficient for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
}

/// Product of jet symbols with positive exponents, sorted by symbol.
/// Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(JetSymbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: JetSymbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (JetSymbol, u32)>>(it: I) -> Self {
        let mut m = Monomial::one();
        for (s, e) in it {
            m.mul_factor(&s, e);
        }
        m
    }

    pub fn factors(&self) -> &[(JetSymbol, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: &JetSymbol) -> u32 {
        self.0.iter().find(|(t, _)| t == s).map_or(0, |(_, e)| *e)
    }

    fn mul_factor(&mut self, s: &JetSymbol, e: u32) {
        if e == 0 {
            return;
        }
        match self.0.binary_search_by(|(t, _)| t.cmp(s)) {
            Ok(i) => self.0[i].1 += e,
            Err(i) => self.0.insert(i, (s.clone(), e)),
        }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = self.clone();
        for (s, e) in &o.0 {
            m.mul_factor(s, *e);
        }
        m
    }

    /// `self / s^e`, or `None` when the exponent is too small.
    pub fn div_symbol(&self, s: &JetSymbol, e: u32) -> Option<Monomial> {
        let mut m = self.clone();
        let i = m.0.iter().position(|(t, _)| t == s)?;
        if m.0[i].1 < e {
            return None;
        }
        m.0[i].1 -= e;
        if m.0[i].1 == 0 {
            m.0.remove(i);
        }
        Some(m)
    }

    /// Whether `o` divides `self`.
    pub fn divisible_by(&self, o: &Monomial) -> bool {
        o.0.iter().all(|(s, e)| self.exponent(s) >= *e)
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut m = self.clone();
        for (s, e) in &o.0 {
            m = m.div_symbol(s, *e)?;
        }
        Some(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial over jet symbols with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldExpr<C> {
    terms: BTreeMap<Monomial, C>,
}

pub type ScalarExpr = FieldExpr<ExactScalar>;

impl<C: Coefficient> Default for FieldExpr<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> FieldExpr<C> {
    pub fn zero() -> Self {
        FieldExpr { terms: BTreeMap::new() }
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        FieldExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect() }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.scaled(s))))
    }

    /// Multiply by a coefficient-free monomial.
    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        FieldExpr { terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect() }
    }

    /// Left multiplication by a scalar polynomial.
    pub fn mul_scalar_expr(&self, s: &ScalarExpr) -> Self {
        let mut out = Self::zero();
        for (ms, cs) in &s.terms {
            for (m, c) in &self.terms {
                out.add_term(ms.mul(m), c.scaled(cs));
            }
        }
        out
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> FieldExpr<D> {
        FieldExpr::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Coefficient, E>(
        &self,
        f: impl Fn(&C) -> std::result::Result<D, E>,
    ) -> std::result::Result<FieldExpr<D>, E> {
        let mut out = FieldExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn symbols(&self) -> BTreeSet<JetSymbol> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(s, _)| s.clone())).collect()
    }

    /// Formal partial derivative, treating every other jet symbol as independent.
    /// Undetermined functions pick up a derivative symbol by the chain rule.
    pub fn differentiate(&self, s: &JetSymbol) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (k, (sym, e)) in m.0.iter().enumerate() {
                let d = match sym.partial(s) {
                    Partial::Zero => continue,
                    Partial::One => None,
                    Partial::Sym(ds) => Some(ds),
                };
                let mut rest = m.clone();
                rest.0[k].1 -= 1;
                if rest.0[k].1 == 0 {
                    rest.0.remove(k);
                }
                let rest = match d {
                    Some(ds) => rest.mul(&Monomial::var(ds)),
                    None => rest,
                };
                out.add_term(rest, c.scaled(&ExactScalar::from_int(*e as i64)));
            }
        }
        out
    }

    /// Exact division by a single symbol; `None` unless every monomial contains it.
    pub fn divide_by_symbol(&self, s: &JetSymbol) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.div_symbol(s, 1)?, c.clone());
        }
        Some(out)
    }

    /// Simultaneous substitution of scalar polynomials for symbols, iterated
    /// until no bound symbol remains.
    pub fn substitute(&self, bindings: &BTreeMap<JetSymbol, ScalarExpr>) -> Result<Self> {
        check_acyclic(bindings)?;
        let mut cur = self.clone();
        // Acyclic bindings resolve within |bindings|+1 rounds.
        for _ in 0..=bindings.len() {
            if !cur.symbols().iter().any(|s| bindings.contains_key(s)) {
                return Ok(cur);
            }
            cur = cur.substitute_once(bindings);
        }
        Ok(cur)
    }

    fn substitute_once(&self, bindings: &BTreeMap<JetSymbol, ScalarExpr>) -> Self {
        let mut out = Self::zero();
        let mut pow_cache: BTreeMap<(JetSymbol, u32), ScalarExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut factor = ScalarExpr::constant(ExactScalar::one());
            let mut kept = Monomial::one();
            for (s, e) in &m.0 {
                match bindings.get(s) {
                    Some(v) => {
                        let p = pow_cache
                            .entry((s.clone(), *e))
                            .or_insert_with(|| v.pow(*e))
                            .clone();
                        factor = factor.mul(&p);
                    }
                    None => kept.mul_factor(s, *e),
                }
            }
            let factor = factor.mul_monomial(&kept);
            for (fm, fc) in &factor.terms {
                out.add_term(fm.clone(), c.scaled(fc));
            }
        }
        out
    }
}

impl<C: RingCoefficient> FieldExpr<C> {
    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn symbol(s: JetSymbol) -> Self {
        Self::term(Monomial::var(s), C::one())
    }

    /// Product with coefficients multiplied in order (`self` on the left).
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.times(c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Commutator `self·o − o·self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }
}

impl ScalarExpr {
    pub fn int(n: i64) -> Self {
        Self::constant(ExactScalar::from_int(n))
    }

    pub fn scalar(s: ExactScalar) -> Self {
        Self::constant(s)
    }

    /// Promote to another coefficient algebra by multiplying each term into `c`.
    pub fn times_coeff<D: Coefficient>(&self, c: &D) -> FieldExpr<D> {
        FieldExpr::from_terms(self.terms.iter().map(|(m, s)| (m.clone(), c.scaled(s))))
    }
}

fn check_acyclic(bindings: &BTreeMap<JetSymbol, ScalarExpr>) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    fn visit(
        s: &JetSymbol,
        b: &BTreeMap<JetSymbol, ScalarExpr>,
        marks: &mut BTreeMap<JetSymbol, Mark>,
    ) -> Result<()> {
        match marks.get(s) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Visiting) => return Err(Error::CyclicBindings(s.to_string())),
            None => {}
        }
        marks.insert(s.clone(), Mark::Visiting);
        if let Some(v) = b.get(s) {
            for t in v.symbols() {
                if b.contains_key(&t) {
                    visit(&t, b, marks)?;
                }
            }
        }
        marks.insert(s.clone(), Mark::Done);
        Ok(())
    }
    let mut marks = BTreeMap::new();
    for s in bindings.keys() {
        visit(s, bindings, &mut marks)?;
    }
    Ok(())
}

impl<C: Coefficient> fmt::Display for FieldExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_unit() {
                    m.to_string()
                } else {
                    format!("{c}*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
