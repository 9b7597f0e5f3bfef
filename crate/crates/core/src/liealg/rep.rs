//! Matrix representations and exact homomorphism checks.

use std::collections::BTreeMap;

use serde::Serialize;

use super::algebra::{relation_string, OpenAlgebra};
use super::element::{LieElement, LieTerm};
use crate::error::{Error, Result};
use crate::spectral::matrix::Matrix2;

/// Generator images; all matrices are 2×2.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatrixRep {
    pub images: BTreeMap<u32, Matrix2>,
}

impl MatrixRep {
    pub fn new(images: impl IntoIterator<Item = (u32, Matrix2)>) -> Self {
        MatrixRep { images: images.into_iter().collect() }
    }

    pub fn image_term(&self, t: &LieTerm) -> Result<Matrix2> {
        match t {
            LieTerm::Gen(i) => self.images.get(i).cloned().ok_or(Error::UncoveredGenerator(*i)),
            LieTerm::Br(a, b) => Ok(self.image_term(a)?.commutator(&self.image_term(b)?)),
        }
    }

    pub fn image(&self, e: &LieElement) -> Result<Matrix2> {
        let mut out = Matrix2::zero();
        for (t, c) in e.terms() {
            out = out.add(&self.image_term(t)?.scale(c));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub label: String,
    pub residual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomomorphismReport {
    pub entries: Vec<ResidualEntry>,
    pub pass: bool,
}

/// Exact residual `[ρ(Xi), ρ(Xj)] − ρ([Xi,Xj])` for every table entry, and
/// `ρ(r)` for every relation.
pub fn verify_homomorphism(a: &OpenAlgebra, r: &MatrixRep) -> Result<HomomorphismReport> {
    for g in a.generators() {
        if !r.images.contains_key(&g.index) {
            return Err(Error::UncoveredGenerator(g.index));
        }
    }
    let mut entries = Vec::new();
    for ((i, j), v) in a.table() {
        let res = r.image_term(&LieTerm::Gen(*i))?.commutator(&r.image_term(&LieTerm::Gen(*j))?).sub(&r.image(v)?);
        entries.push(ResidualEntry { label: format!("[X{i},X{j}] = {v}"), pass: res.is_zero(), residual: res.to_string() });
    }
    for rel in a.relations() {
        let res = r.image(&rel)?;
        entries.push(ResidualEntry { label: relation_string(&rel), pass: res.is_zero(), residual: res.to_string() });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(HomomorphismReport { entries, pass })
}
