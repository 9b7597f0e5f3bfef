//! Jacobi-driven relation inference and naming of unknown brackets.

use serde::Serialize;

use super::algebra::{relation_string, OpenAlgebra, Provenance};
use super::element::{LieElement, LieTerm};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PassReport {
    pub pass: usize,
    /// Triples examined in this pass.
    pub triples: usize,
    /// New relations, rendered as bracket words before naming.
    pub relations: Vec<String>,
    /// `(index, defining bracket)` for each generator named in this pass.
    pub new_generators: Vec<(u32, String)>,
    pub total_generators: usize,
    pub independent_generators: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub passes: Vec<PassReport>,
    /// True when the last pass produced nothing new and no deeper triples
    /// remain. False means only "no fixpoint within the given depth".
    pub closed: bool,
}

/// Innermost unknown `[Xi,Xj]` words of `t`, in post-order.
fn collect_pairs(t: &LieTerm, out: &mut Vec<(u32, u32)>) {
    if let LieTerm::Br(a, b) = t {
        match (a.as_ref(), b.as_ref()) {
            (LieTerm::Gen(i), LieTerm::Gen(j)) => {
                if !out.contains(&(*i, *j)) {
                    out.push((*i, *j));
                }
            }
            _ => {
                collect_pairs(a, out);
                collect_pairs(b, out);
            }
        }
    }
}

fn live_by_degree(a: &OpenAlgebra) -> Vec<(u32, u32)> {
    let elim = a.eliminated();
    a.generators().map(|g| g.index).filter(|k| !elim.contains(k)).map(|k| (k, a.degree(k))).collect()
}

/// Run `depth` graded passes. Pass p examines every triple of surviving
/// generators whose degrees sum to p + 2, records the nonzero Jacobi
/// combinations as relations, then names each unknown bracket they
/// contain (inner words first) as a fresh closure-derived generator.
pub fn jacobi_closure(a: &OpenAlgebra, depth: usize) -> Result<(OpenAlgebra, ClosureReport)> {
    assert!(depth >= 1, "closure depth must be positive");
    let mut alg = a.clone();
    let mut passes = Vec::new();
    for pass in 1..=depth {
        let level = pass as u32 + 2;
        let live = live_by_degree(&alg);
        let mut triples = 0;
        let mut found = Vec::new();
        for (x, &(p, dp)) in live.iter().enumerate() {
            for (y, &(q, dq)) in live.iter().enumerate().skip(x + 1) {
                for &(r, dr) in &live[y + 1..] {
                    if dp + dq + dr != level {
                        continue;
                    }
                    triples += 1;
                    let j = alg.jacobi(p, q, r);
                    if !j.is_zero() && !found.contains(&j) {
                        found.push(j);
                    }
                }
            }
        }

        let relations: Vec<String> = found.iter().map(relation_string).collect();
        let mut new_generators = Vec::new();
        let mut pending = found;
        loop {
            let mut pairs = Vec::new();
            for e in &pending {
                for (t, _) in e.terms() {
                    collect_pairs(t, &mut pairs);
                }
            }
            if pairs.is_empty() {
                break;
            }
            for (i, j) in pairs {
                if alg.bracket_entry(i, j).is_some() {
                    continue;
                }
                let k = alg.next_index();
                alg.name_bracket(i, j, k, Provenance::ClosureDerived(i, j))?;
                new_generators.push((k, format!("[X{i},X{j}]")));
            }
            pending = pending.iter().map(|e| alg.normalize(e)).collect();
        }
        for e in &pending {
            alg.add_relation(e)?;
        }
        passes.push(PassReport {
            pass,
            triples,
            relations,
            new_generators,
            total_generators: alg.generator_count(),
            independent_generators: alg.independent_count(),
        });
    }
    let last = passes.last().expect("depth >= 1");
    let closed = last.relations.is_empty() && last.new_generators.is_empty() && !has_unprocessed(&alg, depth);
    Ok((alg, ClosureReport { passes, closed }))
}

/// Whether some triple of surviving generators has degree sum beyond the
/// last processed level and a nonzero Jacobi combination.
fn has_unprocessed(a: &OpenAlgebra, depth: usize) -> bool {
    let level = depth as u32 + 2;
    let live = live_by_degree(a);
    for (x, &(p, dp)) in live.iter().enumerate() {
        for (y, &(q, dq)) in live.iter().enumerate().skip(x + 1) {
            for &(r, dr) in &live[y + 1..] {
                if dp + dq + dr > level && !a.jacobi(p, q, r).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Convenience: the relation `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]` for a
/// single triple, in `min = rest` form.
pub fn jacobi_relation(a: &OpenAlgebra, p: u32, q: u32, r: u32) -> Option<String> {
    let j: LieElement = a.jacobi(p, q, r);
    (!j.is_zero()).then(|| relation_string(&j))
}
