//! Partially known bracket tables with relation rewriting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::element::{LieElement, LieTerm};
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    Declared,
    /// Introduced as the name of `[Xi, Xj]`.
    Bracket(u32, u32),
    /// Named by Jacobi closure for the unknown bracket `[Xi, Xj]`.
    ClosureDerived(u32, u32),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Declared => write!(f, "declared"),
            Provenance::Bracket(i, j) => write!(f, "named [X{i},X{j}]"),
            Provenance::ClosureDerived(i, j) => write!(f, "closure [X{i},X{j}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub index: u32,
    pub provenance: Provenance,
}

/// An open algebra: generators, a partial bracket table keyed by `(i, j)`
/// with `i < j`, and relations kept as oriented rewrite rules
/// `lead → rhs`. Relations that cannot be oriented, or that are recorded
/// without being imposed, live in `deferred`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OpenAlgebra {
    generators: BTreeMap<u32, Provenance>,
    table: BTreeMap<(u32, u32), LieElement>,
    rules: BTreeMap<LieTerm, LieElement>,
    deferred: Vec<LieElement>,
}

fn invertible(c: &ExactScalar) -> Option<ExactScalar> {
    c.recip()
}

fn contains_subterm(t: &LieTerm, s: &LieTerm) -> bool {
    if t == s {
        return true;
    }
    match t {
        LieTerm::Gen(_) => false,
        LieTerm::Br(a, b) => contains_subterm(a, s) || contains_subterm(b, s),
    }
}

fn mentions_term(e: &LieElement, s: &LieTerm) -> bool {
    e.terms().any(|(t, _)| contains_subterm(t, s))
}

impl OpenAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    /// Algebra with declared generators `1..=n` and no brackets.
    pub fn free(indices: impl IntoIterator<Item = u32>) -> Self {
        let mut a = Self::new();
        for i in indices {
            a.declare(i);
        }
        a
    }

    pub fn declare(&mut self, i: u32) {
        self.generators.entry(i).or_insert(Provenance::Declared);
    }

    pub fn add_generator(&mut self, i: u32, p: Provenance) {
        self.generators.insert(i, p);
    }

    pub fn has_generator(&self, i: u32) -> bool {
        self.generators.contains_key(&i)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.generators.iter().map(|(&index, &provenance)| Generator { index, provenance })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn provenance(&self, i: u32) -> Option<Provenance> {
        self.generators.get(&i).copied()
    }

    pub fn next_index(&self) -> u32 {
        self.generators.keys().next_back().map_or(1, |k| k + 1)
    }

    /// Grading used by the closure engine: declared generators have degree 1,
    /// a named bracket the sum of its arguments' degrees.
    pub fn degree(&self, i: u32) -> u32 {
        match self.generators.get(&i) {
            Some(Provenance::Bracket(a, b)) | Some(Provenance::ClosureDerived(a, b)) => {
                self.degree(*a) + self.degree(*b)
            }
            _ => 1,
        }
    }

    /// Generators that are the lead of a relation.
    pub fn eliminated(&self) -> BTreeSet<u32> {
        self.rules
            .keys()
            .filter_map(|t| match t {
                LieTerm::Gen(i) => Some(*i),
                _ => None,
            })
            .collect()
    }

    pub fn independent_count(&self) -> usize {
        let e = self.eliminated();
        self.generators.keys().filter(|k| !e.contains(k)).count()
    }

    pub fn table(&self) -> &BTreeMap<(u32, u32), LieElement> {
        &self.table
    }

    pub fn bracket_entry(&self, i: u32, j: u32) -> Option<LieElement> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Some(LieElement::zero()),
            Less => self.table.get(&(i, j)).cloned(),
            Greater => self.table.get(&(j, i)).map(LieElement::neg),
        }
    }

    /// Relations as elements required to vanish (`lead − rhs`).
    pub fn relations(&self) -> Vec<LieElement> {
        self.rules
            .iter()
            .map(|(l, r)| LieElement::term(l.clone(), ExactScalar::one()).sub(r))
            .collect()
    }

    pub fn rules(&self) -> impl Iterator<Item = (&LieTerm, &LieElement)> {
        self.rules.iter()
    }

    pub fn deferred(&self) -> &[LieElement] {
        &self.deferred
    }

    pub fn defer(&mut self, e: LieElement) {
        let e = match e.max_term().and_then(|(_, c)| c.recip()) {
            Some(inv) => e.scale(&inv),
            None => e,
        };
        if !e.is_zero() && !self.deferred.contains(&e) {
            self.deferred.push(e);
        }
    }

    /// Record `[Xi, Xj] = v` (antisymmetry applied when `i > j`).
    pub fn set_bracket(&mut self, i: u32, j: u32, v: LieElement) -> Result<()> {
        if i == j {
            if v.is_zero() {
                return Ok(());
            }
            return Err(Error::InconsistentRelation(format!("[X{i},X{i}] = {v}")));
        }
        self.declare(i);
        self.declare(j);
        let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.neg()) };
        self.table.insert(key, v);
        if !self.rules.is_empty() {
            self.refresh()?;
        } else {
            let v = self.normalize(&self.table[&key]);
            self.table.insert(key, v);
        }
        Ok(())
    }

    /// Introduce generator `k` as the name of `[Xi, Xj]`.
    pub fn name_bracket(&mut self, i: u32, j: u32, k: u32, p: Provenance) -> Result<()> {
        self.generators.insert(k, p);
        self.set_bracket(i, j, LieElement::gen(k))
    }

    pub fn normalize(&self, e: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (t, c) in e.terms() {
            out = out.add(&self.norm_term(t).scale(c));
        }
        out
    }

    /// Normalized bracket of two elements.
    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> LieElement {
        self.normalize(&LieElement::bracket_word(a, b))
    }

    fn norm_term(&self, t: &LieTerm) -> LieElement {
        match t {
            LieTerm::Gen(_) => self.reduce_term(t),
            LieTerm::Br(a, b) => {
                let na = self.norm_term(a);
                let nb = self.norm_term(b);
                let mut out = LieElement::zero();
                for (ta, ca) in na.terms() {
                    for (tb, cb) in nb.terms() {
                        out = out.add(&self.bracket_terms(ta, tb).scale(&(ca * cb)));
                    }
                }
                out
            }
        }
    }

    fn bracket_terms(&self, a: &LieTerm, b: &LieTerm) -> LieElement {
        if a == b {
            return LieElement::zero();
        }
        if a > b {
            return self.bracket_terms(b, a).neg();
        }
        if let (LieTerm::Gen(i), LieTerm::Gen(j)) = (a, b) {
            if let Some(v) = self.table.get(&(*i, *j)) {
                return v.clone();
            }
        }
        self.reduce_term(&LieTerm::br(a.clone(), b.clone()))
    }

    fn reduce_term(&self, t: &LieTerm) -> LieElement {
        match self.rules.get(t) {
            Some(r) => r.clone(),
            None => LieElement::term(t.clone(), ExactScalar::one()),
        }
    }

    /// Impose `e = 0`. Returns whether a new rule was created; relations
    /// without an invertible coefficient on any term are deferred.
    pub fn add_relation(&mut self, e: &LieElement) -> Result<bool> {
        let n = self.normalize(e);
        if n.is_zero() {
            return Ok(false);
        }
        let lead = n.terms().rev().find_map(|(t, c)| invertible(c).map(|inv| (t.clone(), c.clone(), inv)));
        let Some((lead, c, inv)) = lead else {
            self.defer(n);
            return Ok(false);
        };
        let rhs = n.sub(&LieElement::term(lead.clone(), c)).scale(&inv).neg();
        self.rules.insert(lead.clone(), rhs);

        // Back-substitute into stored values; re-add rules whose lead is no
        // longer a normal term.
        let stale: Vec<LieTerm> = self
            .rules
            .keys()
            .filter(|k| **k != lead && contains_subterm(k, &lead))
            .cloned()
            .collect();
        let mut readd = Vec::new();
        for k in stale {
            let r = self.rules.remove(&k).expect("present");
            readd.push(LieElement::term(k, ExactScalar::one()).sub(&r));
        }
        let touched: Vec<LieTerm> =
            self.rules.iter().filter(|(_, r)| mentions_term(r, &lead)).map(|(k, _)| k.clone()).collect();
        for k in touched {
            let r = self.normalize(&self.rules[&k]);
            self.rules.insert(k, r);
        }
        let keys: Vec<(u32, u32)> =
            self.table.iter().filter(|(_, v)| mentions_term(v, &lead)).map(|(k, _)| *k).collect();
        for k in keys {
            let v = self.normalize(&self.table[&k]);
            self.table.insert(k, v);
        }
        for r in readd {
            self.add_relation(&r)?;
        }
        Ok(true)
    }

    /// Rebuild every stored value against the current table and relations.
    pub fn refresh(&mut self) -> Result<()> {
        for _ in 0..64 {
            let before = (self.table.clone(), self.rules.clone());
            let rels = self.relations();
            self.rules.clear();
            let keys: Vec<_> = self.table.keys().copied().collect();
            for k in keys {
                let v = self.normalize(&self.table[&k]);
                self.table.insert(k, v);
            }
            for r in rels {
                self.add_relation(&r)?;
            }
            let keys: Vec<_> = self.table.keys().copied().collect();
            for k in keys {
                let v = self.normalize(&self.table[&k]);
                self.table.insert(k, v);
            }
            if (self.table.clone(), self.rules.clone()) == before {
                return Ok(());
            }
        }
        Err(Error::NonTerminating { steps: 64, trace: "algebra refresh".into() })
    }

    /// Jacobi combination `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]`, normalized.
    pub fn jacobi(&self, a: u32, b: u32, c: u32) -> LieElement {
        let (ga, gb, gc) = (LieElement::gen(a), LieElement::gen(b), LieElement::gen(c));
        self.bracket(&ga, &self.bracket(&gb, &gc))
            .add(&self.bracket(&gb, &self.bracket(&gc, &ga)))
            .add(&self.bracket(&gc, &self.bracket(&ga, &gb)))
    }

    /// Nonzero Jacobi combinations over all triples of non-eliminated
    /// generators.
    pub fn jacobi_violations(&self) -> Vec<((u32, u32, u32), LieElement)> {
        let elim = self.eliminated();
        let live: Vec<u32> = self.generators.keys().copied().filter(|k| !elim.contains(k)).collect();
        let mut out = Vec::new();
        for (x, &a) in live.iter().enumerate() {
            for (y, &b) in live.iter().enumerate().skip(x + 1) {
                for &c in &live[y + 1..] {
                    let j = self.jacobi(a, b, c);
                    if !j.is_zero() {
                        out.push(((a, b, c), j));
                    }
                }
            }
        }
        out
    }

    /// Deterministic dump: one `[Xi,Xj] = <element>` line per table entry,
    /// sorted by (i, j), then relations.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for ((i, j), v) in &self.table {
            s.push_str(&format!("[X{i},X{j}] = {v}\n"));
        }
        for r in self.relations() {
            s.push_str(&format!("{}\n", relation_string(&r)));
        }
        s
    }
}

/// `min term = rest` rendering of a relation `e = 0`.
pub fn relation_string(e: &LieElement) -> String {
    match e.min_term() {
        Some((t, c)) => match c.recip() {
            Some(inv) => {
                let rest = e.sub(&LieElement::term(t.clone(), c.clone())).scale(&inv).neg();
                format!("{t} = {rest}")
            }
            None => format!("{e} = 0"),
        },
        None => "0 = 0".into(),
    }
}

fn substitute_term(t: &LieTerm, m: &BTreeMap<u32, LieElement>) -> LieElement {
    match t {
        LieTerm::Gen(k) => m.get(k).cloned().unwrap_or_else(|| LieElement::gen(*k)),
        LieTerm::Br(a, b) => LieElement::bracket_word(&substitute_term(a, m), &substitute_term(b, m)),
    }
}

/// Replace generators by their images (unnormalized).
pub fn substitute(e: &LieElement, m: &BTreeMap<u32, LieElement>) -> LieElement {
    let mut out = LieElement::zero();
    for (t, c) in e.terms() {
        out = out.add(&substitute_term(t, m).scale(c));
    }
    out
}

/// Quotient by the closing conditions `Xk ↦ m[k]`.
pub fn apply_closing_map(a: &OpenAlgebra, m: &BTreeMap<u32, LieElement>) -> Result<OpenAlgebra> {
    for (k, img) in m {
        if let Some(bad) = img.generators().into_iter().find(|g| m.contains_key(g) || !a.has_generator(*g)) {
            return Err(Error::InvalidParameter(format!("image of X{k} uses X{bad}, which does not survive")));
        }
    }
    let mut b = OpenAlgebra::new();
    for g in a.generators() {
        if !m.contains_key(&g.index) {
            b.add_generator(g.index, g.provenance);
        }
    }
    let survives = |i: &u32| !m.contains_key(i);
    for ((i, j), v) in &a.table {
        if survives(i) && survives(j) {
            b.table.insert((*i, *j), substitute(v, m));
        }
    }
    b.refresh()?;

    for ((i, j), v) in &a.table {
        if survives(i) && survives(j) {
            continue;
        }
        let lhs = b.bracket(&substitute(&LieElement::gen(*i), m), &substitute(&LieElement::gen(*j), m));
        let rhs = b.normalize(&substitute(v, m));
        let diff = lhs.sub(&rhs);
        if diff.is_zero() {
            continue;
        }
        let words: Vec<_> = diff.terms().filter(|(t, _)| matches!(t, LieTerm::Br(..))).collect();
        let pair = match words.as_slice() {
            [(LieTerm::Br(x, y), c)] => match (x.as_ref(), y.as_ref(), c.recip()) {
                (LieTerm::Gen(p), LieTerm::Gen(q), Some(inv)) => Some((*p, *q, (*c).clone(), inv)),
                _ => None,
            },
            _ => None,
        };
        match pair {
            Some((p, q, c, inv)) => {
                let word = LieElement::term(LieTerm::br(LieTerm::Gen(p), LieTerm::Gen(q)), c);
                let v = diff.sub(&word).scale(&inv).neg();
                b.set_bracket(p, q, v)?;
            }
            None => {
                return Err(Error::InconsistentRelation(format!(
                    "[X{i},X{j}]: bracket of images {lhs} differs from image {rhs}"
                )))
            }
        }
    }

    for r in a.relations() {
        let n = b.normalize(&substitute(&r, m));
        if n.is_zero() {
            continue;
        }
        if n.is_linear() {
            return Err(Error::InconsistentRelation(format!("{} (from {})", relation_string(&n), relation_string(&r))));
        }
        b.add_relation(&n)?;
    }
    for d in &a.deferred {
        let n = b.normalize(&substitute(d, m));
        b.defer(n);
    }
    Ok(b)
}
